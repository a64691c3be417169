"""Dense exact matrices over the rings of :mod:`chevexp.exactnum`.

A matrix over F_{p^k} or over Q[t]/(f) is stored as k matrices over the base
field (F_p or Q), one per power-basis coordinate, so that products reduce to
k^2 base-field products followed by reduction modulo f. The base-field kernels
are python-flint's ``nmod_mat`` and ``fmpq_mat``.
"""

from __future__ import annotations

from fractions import Fraction

import flint

from .exactnum import QQ, Certificate, certify_p_integral, rational_str, reduce_rational


def to_fmpq(x) -> flint.fmpq:
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def from_fmpq(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _base_matrix(ring, n, m, entries=None):
    if ring.characteristic:
        if entries is None:
            return flint.nmod_mat(n, m, ring.characteristic)
        return flint.nmod_mat(n, m, [int(e) for e in entries], ring.characteristic)
    if entries is None:
        return flint.fmpq_mat(n, m)
    return flint.fmpq_mat(n, m, [to_fmpq(e) for e in entries])


def _base_scalar(ring, c):
    return int(c) if ring.characteristic else to_fmpq(c)


def _base_value(ring, v):
    return int(v) if ring.characteristic else from_fmpq(v)


def _reduce_components(ring, raw):
    """Fold components of degree >= k back using the monic modulus."""
    k, poly = ring.degree, ring.poly
    for deg in range(len(raw) - 1, k - 1, -1):
        top = raw[deg]
        for l in range(k):
            if poly[l]:
                raw[deg - k + l] = raw[deg - k + l] - top * _base_scalar(ring, poly[l])
    return raw[:k]


class Matrix:
    """An n x m matrix over a ring with the exactnum interface."""

    __slots__ = ("ring", "comps", "nrows", "ncols")

    def __init__(self, ring, comps):
        self.ring = ring
        self.comps = list(comps)
        self.nrows = self.comps[0].nrows()
        self.ncols = self.comps[0].ncols()

    # -- construction -----------------------------------------------------
    @classmethod
    def zeros(cls, ring, n, m=None):
        m = n if m is None else m
        return cls(ring, [_base_matrix(ring, n, m) for _ in range(ring.degree)])

    @classmethod
    def identity(cls, ring, n):
        comps = [_base_matrix(ring, n, n) for _ in range(ring.degree)]
        for i in range(n):
            comps[0][i, i] = 1
        return cls(ring, comps)

    @classmethod
    def from_rows(cls, ring, rows):
        rows = [list(r) for r in rows]
        n, m = len(rows), len(rows[0]) if rows else 0
        flat = [ring.coeffs(ring(x)) for r in rows for x in r]
        comps = [_base_matrix(ring, n, m, [c[l] for c in flat]) for l in range(ring.degree)]
        return cls(ring, comps)

    @classmethod
    def from_sparse(cls, ring, n, m, entries):
        """Matrix from a dict {(i, j): scalar}."""
        comps = [_base_matrix(ring, n, m) for _ in range(ring.degree)]
        for (i, j), x in entries.items():
            for l, c in enumerate(ring.coeffs(ring(x))):
                if c:
                    comps[l][i, j] = _base_scalar(ring, c)
        return cls(ring, comps)

    @classmethod
    def from_integer_sparse(cls, ring, n, entries):
        """Square matrix with integer entries given as {(i, j): int}."""
        comps = [_base_matrix(ring, n, n) for _ in range(ring.degree)]
        p = ring.characteristic
        for (i, j), c in entries.items():
            comps[0][i, j] = c % p if p else c
        return cls(ring, comps)

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.ring.from_coeffs([_base_value(self.ring, c[i, j]) for c in self.comps])

    def rows(self):
        lists = [c.tolist() for c in self.comps]
        ring = self.ring
        if ring.degree == 1:
            if ring.characteristic:
                return [[ring.from_coeffs((int(v),)) for v in row] for row in lists[0]]
            return [[from_fmpq(v) for v in row] for row in lists[0]]
        return [
            [ring.from_coeffs([_base_value(ring, lists[l][i][j]) for l in range(ring.degree)])
             for j in range(self.ncols)]
            for i in range(self.nrows)
        ]

    def entries(self):
        return [x for row in self.rows() for x in row]

    def __iter__(self):
        return iter(self.rows())

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Matrix):
            return False
        if other.ring is not self.ring and other.ring != self.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
        return True

    def __add__(self, other):
        self._check(other)
        return Matrix(self.ring, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.ring, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return Matrix(self.ring, [-a for a in self.comps])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            self._check(other)
            k = self.ring.degree
            if k == 1:
                return Matrix(self.ring, [self.comps[0] * other.comps[0]])
            raw = [None] * (2 * k - 1)
            for i, a in enumerate(self.comps):
                for j, b in enumerate(other.comps):
                    prod = a * b
                    raw[i + j] = prod if raw[i + j] is None else raw[i + j] + prod
            return Matrix(self.ring, _reduce_components(self.ring, raw))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s):
        ring = self.ring
        cs = ring.coeffs(ring(s))
        k = ring.degree
        if k == 1:
            return Matrix(ring, [self.comps[0] * _base_scalar(ring, cs[0])])
        raw = [None] * (2 * k - 1)
        for l, c in enumerate(cs):
            if not c:
                continue
            for j, a in enumerate(self.comps):
                term = a * _base_scalar(ring, c)
                raw[l + j] = term if raw[l + j] is None else raw[l + j] + term
        zero = _base_matrix(ring, self.nrows, self.ncols)
        raw = [zero if r is None else r for r in raw]
        return Matrix(ring, _reduce_components(ring, raw))

    def __truediv__(self, s):
        ring = self.ring
        if ring.characteristic == 0 and ring.degree == 1:
            return Matrix(ring, [self.comps[0] * to_fmpq(Fraction(1) / Fraction(s))])
        if ring.characteristic == 0 and isinstance(s, (int, Fraction)):
            inv = to_fmpq(Fraction(1) / Fraction(s))
            return Matrix(ring, [c * inv for c in self.comps])
        return self.scale(ring(1) / ring(s))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative matrix powers are not supported")
        if self.ring.degree == 1:
            return Matrix(self.ring, [self.comps[0] ** e])
        result = Matrix.identity(self.ring, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            a == b for a, b in zip(self.comps, other.comps)
        )

    __hash__ = None

    def commutator(self, other):
        return self * other - other * self

    def transpose(self):
        return Matrix(self.ring, [c.transpose() for c in self.comps])

    T = property(transpose)

    def trace(self):
        ring = self.ring
        cs = []
        for c in self.comps:
            t = sum((c[i, i] for i in range(self.nrows)), _base_scalar(ring, 0))
            cs.append(_base_value(ring, t))
        return ring.from_coeffs(cs)

    def is_zero(self) -> bool:
        zero = _base_matrix(self.ring, self.nrows, self.ncols)
        return all(c == zero for c in self.comps)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.ring, self.nrows)

    def is_strictly_upper(self) -> bool:
        for c in self.comps:
            for i in range(self.nrows):
                for j in range(min(i + 1, self.ncols)):
                    if c[i, j] != 0:
                        return False
        return True

    def nilpotency_degree(self):
        """Smallest d with M^d = 0, or None when M is not nilpotent."""
        n = self.nrows
        power = Matrix.identity(self.ring, n)
        for d in range(1, n + 1):
            power = power * self
            if power.is_zero():
                return d
        return None

    def is_nilpotent(self) -> bool:
        return self.nilpotency_degree() is not None

    def support(self):
        """Positions of nonzero entries, row-major."""
        out = []
        lists = [c.tolist() for c in self.comps]
        for i in range(self.nrows):
            for j in range(self.ncols):
                if any(l[i][j] != 0 for l in lists):
                    out.append((i, j))
        return out

    # -- change of rings --------------------------------------------------
    def certificate(self, p: int) -> Certificate:
        if self.ring.characteristic:
            raise ValueError("integrality certificates apply to characteristic-zero matrices")
        return certify_p_integral(self.entries(), p)

    def reduce(self, field) -> Matrix:
        """Reduction mod p of a p-integral matrix over the lift of ``field``."""
        if self.ring.characteristic:
            raise ValueError("matrix is already in positive characteristic")
        if self.ring.degree != field.degree:
            raise ValueError("field degree does not match the lift ring")
        p = field.p
        comps = []
        for c in self.comps:
            vals = [reduce_rational(from_fmpq(v), p) for v in c.entries()]
            comps.append(flint.nmod_mat(self.nrows, self.ncols, vals, p))
        return Matrix(field, comps)

    def lift(self) -> Matrix:
        """Lift digitwise from F_{p^k} to its unramified characteristic-zero ring."""
        if not self.ring.characteristic:
            raise ValueError("matrix is already in characteristic zero")
        ring = self.ring.lift_ring()
        comps = [flint.fmpq_mat(self.nrows, self.ncols, [int(v) for v in c.entries()]) for c in self.comps]
        return Matrix(ring, comps)

    def to_json(self):
        return [[scalar_json(x) for x in row] for row in self.rows()]

    def __repr__(self):
        rows = self.rows()
        body = "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in rows)
        return f"Matrix over {self.ring}:\n{body}"


def scalar_json(x):
    if isinstance(x, Fraction):
        return rational_str(x)
    if isinstance(x, int):
        return rational_str(Fraction(x))
    return x.to_json()


# ---------------------------------------------------------------------------
# small generic routines on lists of field elements (Fraction or FieldElement)

def _is_zero(x):
    return not x


def row_reduce(rows):
    """Reduced row echelon form; returns (rref rows, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    m = len(a[0])
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, len(a)) if not _is_zero(a[i][col])), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and not _is_zero(a[i][col]):
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(rows) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows, zero, one):
    """Basis of {v : rows * v = 0}, one vector per free column, in column order."""
    if not rows:
        return []
    m = len(rows[0])
    red, pivots = row_reduce(rows)
    free = [c for c in range(m) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * m
        v[f] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def determinant(rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((i for i in range(col, n) if not _is_zero(a[i][col])), None)
        if piv is None:
            return a[0][0] * 0 if n else 1
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det = det * a[col][col]
        inv = 1 / a[col][col]
        for i in range(col + 1, n):
            if not _is_zero(a[i][col]):
                f = a[i][col] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


def solve(rows, rhs):
    """Solve a square nonsingular system."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        raise ValueError("singular system")
    return [red[i][n] for i in range(n)]


def matrix_det(M: Matrix):
    return determinant(M.rows())


def exp_nilpotent(Y: Matrix) -> Matrix:
    """exp(Y) for a nilpotent matrix over a characteristic-zero ring."""
    if Y.ring.characteristic:
        raise ValueError("the exponential needs characteristic zero")
    n = Y.nrows
    result = Matrix.identity(Y.ring, n)
    term = Matrix.identity(Y.ring, n)
    for j in range(1, n + 1):
        term = (term * Y) / j
        if term.is_zero():
            return result
        result = result + term
    if not (term * Y).is_zero():
        raise ValueError("matrix is not nilpotent")
    return result


__all__ = [
    "Matrix",
    "row_reduce",
    "rank",
    "nullspace",
    "determinant",
    "solve",
    "exp_nilpotent",
    "scalar_json",
]
