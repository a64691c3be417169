"""Trace-form splitting gl_n = dφ(g) + m and the unipotent/nilpotent maps.

The Gram matrix of the trace form on the Chevalley basis is block diagonal:
a Cartan block on h_1..h_r and 2 x 2 blocks pairing e_a with e_{-a}. Its
inverse is therefore cheap and sparse, and projecting a matrix onto dφ(g)
only needs the traces tr(M dφ(b_i)).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint

from .chevalley import (
    AlgebraElement,
    ChevalleyAlgebra,
    SplittingUnavailable,
    rep_matrix,
)
from .exactnum import QQ, certify_p_integral, reduce_rational
from .linalg import Matrix, solve, to_fmpq


def _opposite(alg: ChevalleyAlgebra, i: int):
    """Basis indices j for which tr(dφ(b_i) dφ(b_j)) can be nonzero."""
    r, npos = alg.rank, alg.npos
    if i < r:
        return range(r)
    if i < r + npos:
        return (i + npos,)
    return (i - npos,)


def _trace_pair(alg, i, j) -> int:
    bi, bj = alg.rep_basis[i], alg.rep_basis[j]
    return sum(v * bj.get((c, r), 0) for (r, c), v in bi.items())


@lru_cache(maxsize=None)
def _gram(alg: ChevalleyAlgebra):
    G = [[0] * alg.dim for _ in range(alg.dim)]
    for i in range(alg.dim):
        for j in _opposite(alg, i):
            G[i][j] = _trace_pair(alg, i, j)
    return tuple(tuple(r) for r in G)


def gram_matrix(alg: ChevalleyAlgebra):
    """Integer Gram matrix G_ij = tr(dφ(b_i) dφ(b_j)) as a list of rows.

    >>> from chevexp.chevalley import algebra
    >>> gram_matrix(algebra("A1"))
    [[2, 0, 0], [0, 0, 1], [0, 1, 0]]
    """
    return [list(r) for r in _gram(alg)]


@lru_cache(maxsize=None)
def gram_determinant(alg: ChevalleyAlgebra) -> int:
    G = _gram(alg)
    r = alg.rank
    cartan = flint.fmpz_mat(r, r, [G[i][j] for i in range(r) for j in range(r)])
    det = int(cartan.det())
    # each pair (e_a, e_-a) contributes det [[0, g], [g, 0]] = -g^2
    for k in range(alg.npos):
        g = G[r + k][r + alg.npos + k]
        det *= -g * g
    return det


def is_nondegenerate_mod_p(alg: ChevalleyAlgebra, p: int) -> bool:
    return gram_determinant(alg) % p != 0


def splitting_available(alg: ChevalleyAlgebra, p: int) -> bool:
    return is_nondegenerate_mod_p(alg, p)


class TraceFormData:
    """Sparse inverse of the Gram matrix, over Q or reduced mod p."""

    def __init__(self, alg: ChevalleyAlgebra, characteristic: int = 0):
        p = characteristic
        if p and not is_nondegenerate_mod_p(alg, p):
            raise SplittingUnavailable(f"trace form of {alg.name} is degenerate mod {p}")
        self.algebra = alg
        self.characteristic = p
        G = _gram(alg)
        r, npos = alg.rank, alg.npos
        cartan = [[Fraction(G[i][j]) for j in range(r)] for i in range(r)]
        inv_cols = [solve(cartan, [Fraction(int(i == j)) for i in range(r)]) for j in range(r)]
        conv = (lambda v: reduce_rational(v, p)) if p else to_fmpq
        rows = []
        for i in range(r):
            rows.append([(j, conv(inv_cols[j][i])) for j in range(r) if inv_cols[j][i]])
        for k in range(npos):
            rows.append([(r + npos + k, conv(Fraction(1, G[r + k][r + npos + k])))])
        for k in range(npos):
            rows.append([(r + k, conv(Fraction(1, G[r + k][r + npos + k])))])
        self.inverse_rows = rows

    def solve_traces(self, traces):
        """Coordinates c = G^{-1} v for one base-field component."""
        p = self.characteristic
        out = []
        for row in self.inverse_rows:
            s = 0
            for j, g in row:
                v = traces[j]
                if v:
                    s = s + g * v
            out.append(s % p if p else s)
        return out


@lru_cache(maxsize=None)
def trace_form_data(alg: ChevalleyAlgebra, characteristic: int = 0) -> TraceFormData:
    return TraceFormData(alg, characteristic)


def _traces(alg, comp_list):
    """tr(M dφ(b_i)) for every basis element, from M.tolist()."""
    out = []
    for entries in alg.rep_basis:
        s = 0
        for (r, c), v in entries.items():
            m = comp_list[c][r]
            if m:
                s = s + v * m
        out.append(s)
    return out


def project_g(M: Matrix, alg: ChevalleyAlgebra, p: int | None = None) -> AlgebraElement:
    """The x with tr(dφ(x) dφ(b)) = tr(M dφ(b)) for all basis elements b.

    Over a field of characteristic p the trace form must be nondegenerate mod
    p. Over characteristic zero the solve is exact over Q; passing ``p``
    additionally enforces the nondegeneracy condition at p.
    """
    ring = M.ring
    char = ring.characteristic
    if p is not None and not is_nondegenerate_mod_p(alg, p):
        raise SplittingUnavailable(f"trace form of {alg.name} is degenerate mod {p}")
    data = trace_form_data(alg, char)
    comp_coords = []
    for comp in M.comps:
        rows = comp.tolist()
        if char:
            rows = [[int(v) for v in row] for row in rows]
        comp_coords.append(data.solve_traces(_traces(alg, rows)))
    if char:
        coords = [ring.from_coeffs([cc[i] for cc in comp_coords]) for i in range(alg.dim)]
    else:
        coords = [
            ring.from_coeffs([Fraction(int(cc[i].p), int(cc[i].q)) if cc[i] else Fraction(0) for cc in comp_coords])
            for i in range(alg.dim)
        ]
    return AlgebraElement(alg, coords, ring)


def project_m(M: Matrix, alg: ChevalleyAlgebra, p: int | None = None) -> Matrix:
    return M - rep_matrix(project_g(M, alg, p))


def certify_element(x: AlgebraElement, p: int):
    return certify_p_integral(x.coords, p)


# ---------------------------------------------------------------------------
# root groups

@lru_cache(maxsize=None)
def _root_powers(alg: ChevalleyAlgebra, index: int):
    """dφ(e)^j / j! for j >= 1 over Q, until the powers vanish."""
    E = alg.rep_matrix_of_basis(index, QQ)
    out = []
    term = Matrix.identity(QQ, alg.rep_dim)
    j = 1
    while True:
        term = (term * E) / j
        if term.is_zero():
            return tuple(out)
        out.append(term)
        j += 1


def _to_ring(M: Matrix, ring) -> Matrix:
    if ring is QQ:
        return M
    if ring.characteristic:
        return M.reduce(ring) if ring.degree == 1 else _reduce_into(M, ring)
    zero = flint.fmpq_mat(M.nrows, M.ncols)
    return Matrix(ring, [M.comps[0]] + [zero] * (ring.degree - 1))


def _reduce_into(M: Matrix, field) -> Matrix:
    p = field.p
    base = flint.nmod_mat(M.nrows, M.ncols, [reduce_rational(Fraction(int(v.p), int(v.q)), p) for v in M.comps[0].entries()], p)
    zero = flint.nmod_mat(M.nrows, M.ncols, p)
    return Matrix(field, [base] + [zero] * (field.degree - 1))


@lru_cache(maxsize=None)
def _root_powers_in(alg, index, ring):
    return tuple(_to_ring(D, ring) for D in _root_powers(alg, index))


def root_group_element(alg: ChevalleyAlgebra, root, t, ring) -> Matrix:
    """U_a(t) = exp(t dφ(e_a)) in the representation, over ``ring``."""
    index = alg.root_index[tuple(root)]
    t = ring(t)
    result = Matrix.identity(ring, alg.rep_dim)
    if not t:
        return result
    power = ring.one
    for D in _root_powers_in(alg, index, ring):
        power = power * t
        result = result + D.scale(power)
    return result


def torus_element(alg: ChevalleyAlgebra, root, c, ring):
    """h_a(c) = w_a(c) w_a(-1) with w_a(c) = U_a(c) U_{-a}(-1/c) U_a(c)."""
    c = ring(c)
    root = tuple(root)
    nroot = tuple(-x for x in root)

    def w(s):
        return root_group_element(alg, root, s, ring) * root_group_element(alg, nroot, -(ring.one / s), ring) * root_group_element(alg, root, s, ring)

    return w(c) * w(-ring.one)


# ---------------------------------------------------------------------------
# unipotent <-> nilpotent

def br_unipotent_to_nilpotent(g: Matrix, alg: ChevalleyAlgebra) -> AlgebraElement:
    """π_g(g) for a unipotent element g of G over a finite field."""
    from .springer import is_group_member, is_unipotent

    if not is_group_member(alg, g):
        raise ValueError("matrix is not in the group")
    if not is_unipotent(g):
        raise ValueError("matrix is not unipotent")
    x = project_g(g, alg)
    if not rep_matrix(x).is_nilpotent():
        raise AssertionError("projection of a unipotent element is not nilpotent")
    return x


def br_inverse_on_U(x: AlgebraElement) -> Matrix:
    """The unique u in U with π_g(u) = x, solved height by height.

    u is parametrised as the ordered product of root-group elements
    U_a(t_a) over the positive roots. The e_b-coordinate of π_g(u) for b of
    height h equals t_b plus a polynomial in parameters of smaller height, so
    the parameters are fixed one height at a time.
    """
    alg, ring = x.algebra, x.ring
    if not x.in_positive_part():
        raise ValueError("element is not supported on positive roots")
    roots = alg.rs.positive_roots
    params = {a: ring.zero for a in roots}

    def build():
        u = Matrix.identity(ring, alg.rep_dim)
        for a in roots:
            if params[a]:
                u = u * root_group_element(alg, a, params[a], ring)
        return u

    by_height = {}
    for a in roots:
        by_height.setdefault(sum(a), []).append(a)
    for h in sorted(by_height):
        y = project_g(build(), alg)
        for a in by_height[h]:
            i = alg.root_index[a]
            params[a] = x.coords[i] - y.coords[i]
    u = build()
    if project_g(u, alg) != x:
        raise AssertionError("height induction did not reproduce the element")
    return u
