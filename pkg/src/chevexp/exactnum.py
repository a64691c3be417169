"""Exact scalars: rationals with p-adic valuations, finite fields F_{p^k} and
their unramified characteristic-zero lifts Q[t]/(f).

Every ring here exposes the same small interface, which the matrix layer
relies on:

``characteristic``
    0 or p.
``degree``
    k, the number of power-basis coordinates of an element.
``poly``
    the monic modulus as a tuple of integer coefficients, lowest degree first.
``coeffs(x)`` / ``from_coeffs(cs)``
    conversion between an element and its power-basis coordinates, which are
    Fractions in characteristic 0 and integers in [0, p) otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

# Scalars of every characteristic-zero computation. Fraction already keeps
# numerator and denominator coprime with a positive denominator.
LocalizedRational = Fraction

MAX_EXTENSION_DEGREE = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")


def vp(x, p: int):
    """p-adic valuation of an integer, Fraction or UnramifiedElement.

    Returns ``math.inf`` for zero.

    >>> vp(Fraction(4, 6), 2)
    1
    >>> vp(Fraction(1, 9), 3)
    -2
    """
    _check_prime(p)
    if isinstance(x, UnramifiedElement):
        return x.valuation()
    x = Fraction(x)
    if x == 0:
        return math.inf
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class Certificate:
    """Outcome of a p-integrality check.

    ``witness_index`` and ``valuation`` describe the first entry with negative
    valuation; ``worst_valuation`` is the minimum over all entries.
    """

    ok: bool
    p: int
    worst_valuation: float
    witness_index: int | None = None
    valuation: float | None = None

    def to_json(self):
        worst = self.worst_valuation
        return {
            "ok": self.ok,
            "worst_valuation": None if worst == math.inf else worst,
            "witness_index": self.witness_index,
        }

    def __bool__(self):
        return self.ok


def certify_p_integral(values, p: int) -> Certificate:
    """Check that every value has non-negative p-adic valuation.

    >>> certify_p_integral([Fraction(1, 3), 5], 3)
    Certificate(ok=False, p=3, worst_valuation=-1, witness_index=0, valuation=-1)
    """
    _check_prime(p)
    worst = math.inf
    first = None
    for i, v in enumerate(values):
        val = vp(v, p)
        worst = min(worst, val)
        if val < 0 and first is None:
            first = (i, val)
    if first is None:
        return Certificate(True, p, worst)
    return Certificate(False, p, worst, first[0], first[1])


def reduce_rational(x, p: int) -> int:
    """Image of a p-integral rational in Z/p."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


# ---------------------------------------------------------------------------
# polynomial helpers over Z/p, coefficient lists lowest degree first

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, b, p):
    a = _poly_trim(x % p for x in a)
    b = _poly_trim(x % p for x in b)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _poly_trim(a)
    return a


def _is_irreducible(f, p):
    """Irreducibility of a monic polynomial by trial division (degree <= 4)."""
    k = len(f) - 1
    for d in range(1, k // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k over F_p.

    Candidates t^k + c_{k-1} t^{k-1} + ... + c_0 are scanned in lexicographic
    order of (c_{k-1}, ..., c_0). For k = 1 this is t itself.
    """
    _check_prime(p)
    if k == 1:
        return (0, 1)
    for high_first in itertools.product(range(p), repeat=k):
        f = tuple(reversed(high_first)) + (1,)
        if _is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")


def _reduce_coeffs(raw, poly, k, zero):
    """Reduce a coefficient list modulo a monic polynomial of degree k."""
    raw = list(raw)
    for m in range(len(raw) - 1, k - 1, -1):
        c = raw[m]
        if c:
            for l in range(k):
                if poly[l]:
                    raw[m - k + l] -= poly[l] * c
        raw[m] = zero
    return raw[:k] + [zero] * (k - len(raw))


def _poly_str(cs, var="t"):
    terms = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# finite fields

class FiniteField:
    """The field F_{p^k} in the power basis of a fixed irreducible modulus."""

    def __init__(self, p: int, k: int = 1):
        _check_prime(p)
        if not 1 <= k <= MAX_EXTENSION_DEGREE:
            raise ValueError(f"extension degree {k} outside 1..{MAX_EXTENSION_DEGREE}")
        self.p = p
        self.characteristic = p
        self.degree = k
        self.order = p ** k
        self.poly = smallest_irreducible(p, k)
        self.zero = FieldElement(self, (0,) * k)
        self.one = FieldElement(self, (1,) + (0,) * (k - 1))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})" if self.degree > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (GF, (self.p, self.degree))

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if value.field.p == self.p and value.field.degree == 1:
                return self.from_coeffs((value.c[0],))
            raise ValueError(f"cannot coerce {value!r} into {self}")
        if isinstance(value, (int, Fraction)):
            return FieldElement(self, (reduce_rational(value, self.p),) + (0,) * (self.degree - 1))
        if hasattr(value, "__int__") and not isinstance(value, float):
            return self(int(value))
        return self.from_coeffs(value)

    def coeffs(self, x) -> tuple[int, ...]:
        return self(x).c

    def from_coeffs(self, cs) -> FieldElement:
        cs = [int(c) % self.p for c in cs]
        if len(cs) > self.degree:
            cs = [c % self.p for c in _reduce_coeffs(cs, self.poly, self.degree, 0)]
        cs += [0] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs))

    def from_index(self, n: int) -> FieldElement:
        """Element whose base-p digits are its power-basis coordinates."""
        cs = []
        for _ in range(self.degree):
            n, r = divmod(n, self.p)
            cs.append(r)
        return FieldElement(self, tuple(cs))

    def elements(self):
        return [self.from_index(n) for n in range(self.order)]

    def nonzero_elements(self):
        return [self.from_index(n) for n in range(1, self.order)]

    def gen(self) -> FieldElement:
        """The class of t (for k = 1 this is 0, the root of t)."""
        return self.from_coeffs([0, 1])

    def random(self, rng) -> FieldElement:
        return self.from_index(rng.randrange(self.order))

    def random_nonzero(self, rng) -> FieldElement:
        return self.from_index(rng.randrange(1, self.order))

    def prime_field(self) -> FiniteField:
        return GF(self.p, 1)

    def lift_ring(self):
        return QQ if self.degree == 1 else unramified_ring(self.p, self.degree)


@lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FiniteField:
    return FiniteField(p, k)


class FieldElement:
    """Element of F_{p^k}; ``c`` holds the power-basis coordinates."""

    __slots__ = ("field", "c")

    def __init__(self, field: FiniteField, c: tuple[int, ...]):
        self.field = field
        self.c = c

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                other = self.field(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.c))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a - b) % p for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        f = self.field
        p, k = f.p, f.degree
        if k == 1:
            return FieldElement(f, (self.c[0] * other.c[0] % p,))
        raw = [0] * (2 * k - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    raw[i + j] += a * b
        red = _reduce_coeffs(raw, f.poly, k, 0)
        return FieldElement(f, tuple(x % p for x in red))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.field.degree == 1:
            return FieldElement(self.field, (pow(self.c[0], -1, self.field.p),))
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.c == other.c or (
                self.field.p == other.field.p and self.field.poly == other.field.poly and self.c == other.c
            )
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.field(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.degree, self.c))

    def __int__(self):
        if any(self.c[1:]):
            raise ValueError(f"{self} is not in the prime field")
        return self.c[0]

    def index(self) -> int:
        return sum(a * self.field.p ** i for i, a in enumerate(self.c))

    def in_prime_field(self) -> bool:
        return not any(self.c[1:])

    def frobenius(self, times: int = 1):
        return self ** (self.field.p ** times)

    def frobenius_root(self):
        """The unique y with y^p = self (the field is perfect)."""
        return self ** (self.field.order // self.field.p)

    def __repr__(self):
        return f"{_poly_str(self.c)}"

    def to_json(self):
        return self.c[0] if self.field.degree == 1 else list(self.c)


# ---------------------------------------------------------------------------
# characteristic zero

class RationalField:
    """Q, the lift ring of every prime field."""

    characteristic = 0
    degree = 1
    poly = (0, 1)
    zero = Fraction(0)
    one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_rational_field, ())

    def __call__(self, value):
        if isinstance(value, FieldElement):
            return lift(value)
        return Fraction(value)

    def coeffs(self, x):
        return (Fraction(x),)

    def from_coeffs(self, cs):
        cs = list(cs)
        if len(cs) > 1 and any(cs[1:]):
            raise ValueError("rational numbers have a single coordinate")
        return Fraction(cs[0]) if cs else Fraction(0)

    def residue_field(self, p):
        return GF(p, 1)


QQ = RationalField()


def _rational_field():
    return QQ


class UnramifiedRing:
    """Q[t]/(f) where f lifts the modulus of F_{p^k} with digits in [0, p).

    Since f stays irreducible mod p, Z_(p)[t]/(f) is the valuation ring of an
    unramified extension and the valuation of an element is the minimum of
    the valuations of its power-basis coordinates.
    """

    characteristic = 0

    def __init__(self, p: int, k: int):
        _check_prime(p)
        if not 2 <= k <= MAX_EXTENSION_DEGREE:
            raise ValueError("use QQ for k = 1; k must be at most 4")
        self.p = p
        self.degree = k
        self.poly = smallest_irreducible(p, k)
        self.zero = UnramifiedElement(self, (Fraction(0),) * k)
        self.one = UnramifiedElement(self, (Fraction(1),) + (Fraction(0),) * (k - 1))

    def __repr__(self):
        return f"UnramifiedRing({self.p}, {self.degree})"

    def __reduce__(self):
        return (unramified_ring, (self.p, self.degree))

    def __eq__(self, other):
        return isinstance(other, UnramifiedRing) and (self.p, self.degree) == (other.p, other.degree)

    def __hash__(self):
        return hash(("unramified", self.p, self.degree))

    def __call__(self, value):
        if isinstance(value, UnramifiedElement):
            return value
        if isinstance(value, FieldElement):
            return lift(value)
        if isinstance(value, (int, Fraction)):
            return UnramifiedElement(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        return self.from_coeffs(value)

    def coeffs(self, x):
        return self(x).c

    def from_coeffs(self, cs):
        cs = [Fraction(c) for c in cs]
        if len(cs) > self.degree:
            cs = _reduce_coeffs(cs, self.poly, self.degree, Fraction(0))
        cs += [Fraction(0)] * (self.degree - len(cs))
        return UnramifiedElement(self, tuple(cs))

    def residue_field(self, p=None):
        return GF(self.p, self.degree)


@lru_cache(maxsize=None)
def unramified_ring(p: int, k: int) -> UnramifiedRing:
    return UnramifiedRing(p, k)


class UnramifiedElement:
    __slots__ = ("ring", "c")

    def __init__(self, ring: UnramifiedRing, c):
        self.ring = ring
        self.c = tuple(c)

    def _other(self, other):
        if isinstance(other, UnramifiedElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return UnramifiedElement(self.ring, (a + b for a, b in zip(self.c, other.c)))

    __radd__ = __add__

    def __neg__(self):
        return UnramifiedElement(self.ring, (-a for a in self.c))

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return UnramifiedElement(self.ring, (a - b for a, b in zip(self.c, other.c)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UnramifiedElement(self.ring, (a * other for a in self.c))
        other = self._other(other)
        if other is NotImplemented:
            return other
        k = self.ring.degree
        raw = [Fraction(0)] * (2 * k - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    raw[i + j] += a * b
        return UnramifiedElement(self.ring, _reduce_coeffs(raw, self.ring.poly, k, Fraction(0)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def multiplication_matrix(self):
        """Matrix of y -> self*y in the power basis (columns are images)."""
        k = self.ring.degree
        cols = []
        basis_elt = self
        for _ in range(k):
            cols.append(basis_elt.c)
            basis_elt = basis_elt * self.ring.from_coeffs([0, 1])
        return [[cols[j][i] for j in range(k)] for i in range(k)]

    def norm(self) -> Fraction:
        from .linalg import determinant
        return determinant(self.multiplication_matrix())

    def inverse(self):
        from .linalg import solve
        if not self:
            raise ZeroDivisionError("inverse of zero")
        k = self.ring.degree
        sol = solve(self.multiplication_matrix(), [Fraction(1)] + [Fraction(0)] * (k - 1))
        return UnramifiedElement(self.ring, sol)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return UnramifiedElement(self.ring, (a / other for a in self.c))
        return self * other.inverse()

    def __bool__(self):
        return any(self.c)

    def __eq__(self, other):
        if isinstance(other, UnramifiedElement):
            return self.ring == other.ring and self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c[0] == other and not any(self.c[1:])
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def valuation(self):
        return min(vp(a, self.ring.p) for a in self.c)

    def __repr__(self):
        return _poly_str(self.c)

    def to_json(self):
        return [rational_str(a) for a in self.c]


def lift(x: FieldElement):
    """Coefficientwise lift with digits in [0, p)."""
    f = x.field
    if f.degree == 1:
        return Fraction(x.c[0])
    ring = unramified_ring(f.p, f.degree)
    return UnramifiedElement(ring, (Fraction(a) for a in x.c))


def reduce(x, field: FiniteField) -> FieldElement:
    """Residue class of a p-integral element of the lift ring."""
    if isinstance(x, UnramifiedElement):
        return FieldElement(field, tuple(reduce_rational(a, field.p) for a in x.c))
    return field(Fraction(x))


def field_tower(p: int, k: int):
    """Return (F_{p^k}, its unramified lift ring)."""
    field = GF(p, k)
    return field, field.lift_ring()


def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def ring_of(x):
    """Best-effort guess of the ring an individual scalar lives in."""
    if isinstance(x, FieldElement):
        return x.field
    if isinstance(x, UnramifiedElement):
        return x.ring
    return QQ


def is_p_integral(x, p: int) -> bool:
    return vp(x, p) >= 0
