"""Truncated Witt vectors and the Witt embeddings of an exponential map.

The addition and negation polynomials are produced by the ghost-component
recursion: with w_j(a) = sum_{i<=j} p^i a_i^{p^(j-i)}, the j-th sum
polynomial is fixed by w_j(S) = w_j(a) + w_j(b).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from sympy import QQ as SymQQ
from sympy.polys.rings import ring as poly_ring

from .chevalley import AlgebraElement, p_power
from .exactnum import _check_prime
from .linalg import Matrix


@dataclass(frozen=True)
class WittAdditionLaw:
    """Integer polynomials S_0..S_{m-1} in a_0..a_{m-1}, b_0..b_{m-1}."""

    p: int
    m: int
    polynomials: tuple
    terms: tuple

    def evaluate(self, a, b):
        values = list(a) + list(b)
        return tuple(_evaluate(ts, values) for ts in self.terms)

    def as_strings(self):
        return [str(f.as_expr()) for f in self.polynomials]


def _evaluate(terms, values):
    zero = values[0] * 0
    total = zero
    for coeff, exps in terms:
        t = values[0] * 0 + coeff
        for v, e in zip(values, exps):
            if e:
                t = t * v**e
        total = total + t
    return total


def _terms(poly, p):
    out = []
    for monom, coeff in poly.terms():
        if coeff.denominator != 1:
            raise AssertionError("Witt polynomial with non-integral coefficient")
        c = int(coeff.numerator) % p
        if c:
            out.append((c, monom))
    return tuple(out)


def _ghost(vars_, j, p):
    return sum(p**i * vars_[i] ** (p ** (j - i)) for i in range(j + 1))


@lru_cache(maxsize=None)
def witt_addition_law(p: int, m: int) -> WittAdditionLaw:
    """The universal sum polynomials for length m.

    >>> law = witt_addition_law(2, 2)
    >>> law.as_strings()[1]
    '-a0*b0 + a1 + b1'
    """
    _check_prime(p)
    if not 1 <= m <= 4:
        raise ValueError("Witt vector length must be between 1 and 4")
    names = [f"a{i}" for i in range(m)] + [f"b{i}" for i in range(m)]
    R, *gens = poly_ring(",".join(names), SymQQ)
    a, b = gens[:m], gens[m:]
    S = []
    for j in range(m):
        rhs = _ghost(a, j, p) + _ghost(b, j, p) - sum(p**i * S[i] ** (p ** (j - i)) for i in range(j))
        S.append(rhs.quo_ground(SymQQ(p**j)))
    for j in range(m):
        if _ghost(S, j, p) != _ghost(a, j, p) + _ghost(b, j, p):
            raise AssertionError("ghost identity fails")
    if m >= 2:
        # the length-2 law written out directly
        expected = a[1] + b[1] + (a[0] ** p + b[0] ** p - (a[0] + b[0]) ** p).quo_ground(SymQQ(p))
        if S[1] != expected:
            raise AssertionError("second Witt sum polynomial disagrees with the closed form")
    return WittAdditionLaw(p, m, tuple(S), tuple(_terms(s, p) for s in S))


@lru_cache(maxsize=None)
def witt_negation_law(p: int, m: int):
    """Polynomials N_j with w_j(N(a)) = -w_j(a)."""
    names = [f"a{i}" for i in range(m)]
    R, *a = poly_ring(",".join(names), SymQQ)
    N = []
    for j in range(m):
        rhs = -_ghost(a, j, p) - sum(p**i * N[i] ** (p ** (j - i)) for i in range(j))
        N.append(rhs.quo_ground(SymQQ(p**j)))
    return tuple(_terms(f, p) for f in N)


class WittVector:
    """(a_0, ..., a_{m-1}) over a finite field of characteristic p."""

    __slots__ = ("p", "field", "components")

    def __init__(self, field, components):
        self.field = field
        self.p = field.characteristic
        self.components = tuple(field(c) for c in components)
        if not 1 <= len(self.components) <= 4:
            raise ValueError("Witt vector length must be between 1 and 4")

    @property
    def length(self):
        return len(self.components)

    @classmethod
    def zero(cls, field, m):
        return cls(field, [0] * m)

    def _check(self, other):
        if not isinstance(other, WittVector) or other.field is not self.field or other.length != self.length:
            raise ValueError("Witt vectors of different shape or field")

    def __add__(self, other):
        return witt_add(self, other)

    def __neg__(self):
        terms = witt_negation_law(self.p, self.length)
        return WittVector(self.field, [_evaluate(t, list(self.components)) for t in terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, n: int):
        """n-fold sum, by doubling."""
        result, base = WittVector.zero(self.field, self.length), self
        n = int(n)
        if n < 0:
            n, base = -n, -base
        while n:
            if n & 1:
                result = result + base
            base = base + base
            n >>= 1
        return result

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, WittVector) and self.field is other.field and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"W({', '.join(str(c) for c in self.components)})"

    def to_json(self):
        return [c.to_json() for c in self.components]


def witt_add(a: WittVector, b: WittVector) -> WittVector:
    """Sum under the universal addition law.

    >>> from chevexp.exactnum import GF
    >>> F = GF(2)
    >>> witt_add(WittVector(F, [1, 0]), WittVector(F, [1, 0]))
    W(0, 1)
    """
    a._check(b)
    law = witt_addition_law(a.p, a.length)
    return WittVector(a.field, law.evaluate(a.components, b.components))


def witt_points(field, m):
    for cs in itertools.product(list(field.elements()), repeat=m):
        yield WittVector(field, cs)


# ---------------------------------------------------------------------------
# embeddings


def _p_powers(x: AlgebraElement, m: int):
    out, y = [], x
    for _ in range(m):
        out.append(y)
        y = p_power(y)
    if not y.is_zero():
        raise ValueError(f"x^[p^{m}] is nonzero: m is too small")
    if m and out[-1].is_zero():
        raise ValueError(f"x^[p^{m - 1}] already vanishes: m is too large")
    return out


def witt_embed(phi, x: AlgebraElement, a) -> Matrix:
    """phi(a_0 x) phi(a_1 x^[p]) ... phi(a_{m-1} x^[p^{m-1}])."""
    components = a.components if isinstance(a, WittVector) else tuple(a)
    field = getattr(phi, "field", None) or x.ring
    if x.ring is not field:
        from .springer import embed
        x = embed(x, field)
    key = tuple(x.coords)
    cache = getattr(phi, "_powers", None)
    if cache is None:
        cache = {}
        try:
            phi._powers = cache
        except AttributeError:
            pass
    if key not in cache:
        cache[key] = _p_powers(x, len(components))
    powers = cache[key]
    if len(powers) != len(components):
        raise ValueError(f"expected a Witt vector of length {len(powers)}")
    result = Matrix.identity(field, x.algebra.rep_dim)
    for c, y in zip(components, powers):
        c = field(c)
        if c:
            result = result * phi(y * c)
    return result


@dataclass
class EmbeddingReport:
    homomorphism_cases: int
    homomorphism_failures: list
    injective: bool
    image_size: int
    expected_size: int
    abelian: bool
    exhaustive: bool

    @property
    def ok(self):
        return not self.homomorphism_failures and self.injective and self.abelian

    def to_json(self):
        return {
            "ok": self.ok,
            "homomorphism_cases": self.homomorphism_cases,
            "failures": self.homomorphism_failures[:10],
            "injective": self.injective,
            "image_size": self.image_size,
            "expected_size": self.expected_size,
            "abelian": self.abelian,
            "exhaustive": self.exhaustive,
        }


def _matrix_key(g: Matrix):
    return tuple(tuple(c.entries()) for c in g.comps)


def verify_witt_embedding(phi, x: AlgebraElement, field, pairs: int | None = None, seed: int = 0) -> EmbeddingReport:
    """Homomorphism, injectivity and commutativity of a ↦ f(a) on W_m(field).

    Every point is evaluated, so injectivity is exact. The homomorphism
    property is checked on all pairs when ``pairs`` is None, else on that
    many random pairs.
    """
    from .springer import embed, nilpotent_order

    x = embed(x, field)
    m = nilpotent_order(x)
    points = list(witt_points(field, m))
    images = {w: witt_embed(phi, x, w) for w in points}
    keys = {_matrix_key(g) for g in images.values()}
    if pairs is None:
        todo = itertools.product(points, repeat=2)
    else:
        rng = random.Random(seed)
        todo = [(rng.choice(points), rng.choice(points)) for _ in range(pairs)]
    failures, cases, abelian = [], 0, True
    for a, b in todo:
        fa, fb = images[a], images[b]
        cases += 1
        if images[a + b] != fa * fb:
            failures.append({"a": a.to_json(), "b": b.to_json()})
        if fa * fb != fb * fa:
            abelian = False
    return EmbeddingReport(
        cases,
        failures,
        len(keys) == len(points),
        len(keys),
        field.order**m,
        abelian,
        pairs is None,
    )
