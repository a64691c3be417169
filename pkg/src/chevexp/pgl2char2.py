"""PGL_2 inside GL_3 in characteristic 2.

Points of GL_3 are written [[x1, 0, x2], [x3, 1, x4], [x5, 0, x6]] with
respect to the basis {E, H, F} of sl_2, where H is the identity matrix
(diag(1, -1) reduces to it mod 2). Nilpotents of pgl_2 are the pairs (x, y)
sitting at positions (2,1) and (2,3).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import sympy

from .exactnum import GF
from .linalg import Matrix, nullspace, row_reduce


def sqrt(z):
    """Inverse Frobenius in F_{2^k}: z^(2^(k-1))."""
    if z.field.p != 2:
        raise ValueError("square roots are taken in characteristic 2")
    return z.frobenius_root()


def sl2_basis(F):
    """(E, H, F) as 2x2 matrices over F."""
    return (
        Matrix.from_rows(F, [[0, 1], [0, 0]]),
        Matrix.from_rows(F, [[1, 0], [0, 1]]),
        Matrix.from_rows(F, [[0, 0], [1, 0]]),
    )


def point(F, x1, x2, x3, x4, x5, x6) -> Matrix:
    return Matrix.from_rows(F, [[x1, 0, x2], [x3, 1, x4], [x5, 0, x6]])


def coordinates(P: Matrix):
    """(x1, ..., x6) of a point with middle column (0, 1, 0)."""
    r = P.rows()
    F = P.ring
    if (r[0][1], r[1][1], r[2][1]) != (F.zero, F.one, F.zero):
        raise ValueError("middle column must be (0, 1, 0)")
    return r[0][0], r[0][2], r[1][0], r[1][2], r[2][0], r[2][2]


def satisfies_group_equations(P: Matrix) -> bool:
    try:
        x1, x2, x3, x4, x5, x6 = coordinates(P)
    except ValueError:
        return False
    return not (x1 * x5 + x3 * x3) and not (x2 * x6 + x4 * x4) and not (x1 * x6 + x2 * x5 + 1)


def ad_matrix_sl2(g: Matrix) -> Matrix:
    """Ad(g) in the basis {E, H, F} by the closed formula."""
    F = g.ring
    (x1, x2), (x3, x4) = g.rows()
    if x1 * x4 - x2 * x3 != F.one:
        raise ValueError("matrix is not in SL_2")
    return Matrix.from_rows(F, [[x1 * x1, 0, x2 * x2], [x1 * x3, 1, x2 * x4], [x3 * x3, 0, x4 * x4]])


def _sl2_coordinates(X: Matrix):
    """(e, h, f) with X = eE + hH + fF; X must have equal diagonal entries."""
    (a, b), (c, d) = X.rows()
    if a != d:
        raise ValueError("matrix is not in sl_2 (char 2)")
    return b, a, c


def conjugation_matrix(g: Matrix) -> Matrix:
    """Ad(g) computed as X ↦ g X g^{-1} on the basis; the independent route."""
    F = g.ring
    (x1, x2), (x3, x4) = g.rows()
    g_inv = Matrix.from_rows(F, [[x4, -x2], [-x3, x1]])
    cols = [_sl2_coordinates(g * B * g_inv) for B in sl2_basis(F)]
    return Matrix.from_rows(F, [[cols[j][i] for j in range(3)] for i in range(3)])


def ad_inverse(P: Matrix) -> Matrix:
    if not satisfies_group_equations(P):
        raise ValueError("point does not satisfy the PGL_2 equations")
    x1, x2, x3, x4, x5, x6 = coordinates(P)
    return Matrix.from_rows(P.ring, [[sqrt(x1), sqrt(x2)], [sqrt(x5), sqrt(x6)]])


def unipotent_membership(P: Matrix) -> bool:
    """The closed conditions for U(PGL_2), cross-checked against (P - I)^3 = 0."""
    try:
        x1, x2, x3, x4, x5, x6 = coordinates(P)
        equations = x6 == x1 and not (x1 * x5 + x3 * x3) and not (x1 * x2 + x4 * x4) and not (x1 * x1 + x2 * x5 + 1)
    except ValueError:
        equations = False
    if equations and ((P - Matrix.identity(P.ring, 3)) ** 3).is_zero() is False:
        raise AssertionError("equations hold but the point is not unipotent")
    return equations


def characteristic_polynomial(P: Matrix):
    """Coefficients (c0, c1, c2, c3) of det(t I - P), low to high."""
    F = P.ring
    m = P.rows()
    tr = m[0][0] + m[1][1] + m[2][2]
    minors = (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return (-det, minors, -tr, F.one)


def displayed_characteristic_polynomial(P: Matrix):
    """(1 - t)(t^2 + (x1 + x6) t + x2 x5 + x1 x6), low to high; sign-free in char 2."""
    x1, x2, x3, x4, x5, x6 = coordinates(P)
    s, c = x1 + x6, x2 * x5 + x1 * x6
    # (1 - t)(t^2 + s t + c) = c + (s - c) t + (1 - s) t^2 - t^3
    return (c, s - c, 1 - s, -P.ring.one)


def ad_sl2(X: Matrix) -> Matrix:
    """ad(X) in the basis {E, H, F} by the closed formula."""
    F = X.ring
    (x1, x2), (x3, x4) = X.rows()
    if x1 != x4:
        raise ValueError("matrix is not in sl_2 (char 2)")
    return Matrix.from_rows(F, [[0, 0, 0], [x3, 0, x2], [0, 0, 0]])


def ad_by_commutators(X: Matrix) -> Matrix:
    F = X.ring
    cols = [_sl2_coordinates(X * B - B * X) for B in sl2_basis(F)]
    return Matrix.from_rows(F, [[cols[j][i] for j in range(3)] for i in range(3)])


def nilpotent(F, x, y) -> Matrix:
    return Matrix.from_rows(F, [[0, 0, 0], [x, 0, y], [0, 0, 0]])


def phibar(x, y) -> Matrix:
    F = x.field
    r = sqrt(x * y) + 1
    return Matrix.from_rows(F, [[x * y + 1, 0, y * y], [x * r, 1, y * r], [x * x, 0, x * y + 1]])


def phibar_inv(P: Matrix):
    if not unipotent_membership(P):
        raise ValueError("point is not unipotent in PGL_2")
    x1, x2, x3, x4, x5, x6 = coordinates(P)
    return sqrt(x5), sqrt(x2)


def phibar_by_lifting(x, y) -> Matrix:
    """Ad(I + N) for the unique nilpotent N in sl_2 with ad(N) = (x, y)."""
    F = x.field
    a = sqrt(x * y)
    N = Matrix.from_rows(F, [[a, y], [x, a]])
    if not ad_sl2(N) == nilpotent(F, x, y):
        raise AssertionError("lift does not map to the given nilpotent")
    return ad_matrix_sl2(Matrix.identity(F, 2) + N)


# ---------------------------------------------------------------------------
# enumerations


def sl2_points(F):
    for a, b, c, d in itertools.product(list(F.elements()), repeat=4):
        if a * d - b * c == F.one:
            yield Matrix.from_rows(F, [[a, b], [c, d]])


def pgl2_points(F):
    """All solutions of the three equations, by brute force over F^6."""
    els = list(F.elements())
    for x1, x2, x3, x4, x5, x6 in itertools.product(els, repeat=6):
        if not (x1 * x5 + x3 * x3) and not (x2 * x6 + x4 * x4) and not (x1 * x6 + x2 * x5 + 1):
            yield point(F, x1, x2, x3, x4, x5, x6)


def tangent_space():
    """Kernel of the Jacobian of the three equations at the identity, over F_2.

    Returns a basis of 3 x 3 matrices (middle column zero).
    """
    xs = sympy.symbols("x1:7")
    x1, x2, x3, x4, x5, x6 = xs
    eqs = [x1 * x5 + x3**2, x2 * x6 + x4**2, x1 * x6 + x2 * x5 + 1]
    at = {x1: 1, x2: 0, x3: 0, x4: 0, x5: 0, x6: 1}
    F = GF(2)
    rows = [[F(int(sympy.diff(e, v).subs(at)) % 2) for v in xs] for e in eqs]
    basis = []
    for v in nullspace(rows, F.zero, F.one):
        basis.append(point(F, *v) - Matrix.from_rows(F, [[0, 0, 0], [0, 1, 0], [0, 0, 0]]))
    return basis


def span_of_commutators(basis):
    """Row-reduced F_2 span of all [A, B] for A, B in the basis."""
    vecs = [list((A * B - B * A).entries()) for A, B in itertools.combinations(basis, 2)]
    red, piv = row_reduce(vecs)
    return red[: len(piv)]


# ---------------------------------------------------------------------------
# interpolation and the Frobenius witness


def _univariate_indicator(F, a):
    """Coefficients of 1 - (t - a)^(q-1), low to high, length q."""
    q = F.order
    poly = [F.one]
    for _ in range(q - 1):
        nxt = [F.zero] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * a
        poly = nxt
    out = [-c for c in poly[:q]]
    out[0] = out[0] + F.one
    # degree q-1 term of (t - a)^(q-1) is 1
    return out


def interpolate(F, f):
    """The reduced polynomial (degrees < q in x and y) agreeing with f on F^2.

    Returns {(i, j): coefficient} with nonzero coefficients only.
    """
    q = F.order
    els = list(F.elements())
    ind = {a: _univariate_indicator(F, a) for a in els}
    coeffs = {}
    for a in els:
        La = ind[a]
        for b in els:
            v = f(a, b)
            if not v:
                continue
            Lb = ind[b]
            for i in range(q):
                if not La[i]:
                    continue
                vi = v * La[i]
                for j in range(q):
                    if Lb[j]:
                        coeffs[(i, j)] = coeffs.get((i, j), F.zero) + vi * Lb[j]
    return {ij: c for ij, c in coeffs.items() if c}


def _poly_json(poly):
    return sorted(([i, j, c.to_json()] for (i, j), c in poly.items()), key=lambda t: (t[0], t[1]))


def _total_degree(poly):
    return max((i + j for i, j in poly), default=0)


def frobenius_square_formula(x, y) -> Matrix:
    """Entrywise square of phibar, written polynomially."""
    F = x.field
    xy = x * y
    return Matrix.from_rows(
        F,
        [
            [xy * xy + 1, 0, y**4],
            [x * x * (xy + 1), 1, y * y * (xy + 1)],
            [x**4, 0, xy * xy + 1],
        ],
    )


def entrywise_square(P: Matrix) -> Matrix:
    return Matrix.from_rows(P.ring, [[v * v for v in row] for row in P.rows()])


@dataclass
class FrobeniusWitness:
    frobenius_polynomial_agrees: bool
    frobenius_interpolants_over_prime_field: bool
    inverse_square_agrees: bool
    sqrt_interpolants: dict
    sqrt_interpolants_differ: bool
    coordinate_degrees: dict
    degrees_increase: bool

    def to_json(self):
        return {
            "claim": (
                "Entrywise squaring of phibar agrees with fixed polynomials over F_2 "
                "on all of F_16^2, the square of the second inverse coordinate is x2, "
                "and the interpolant of the (2,1)-coordinate over F_(2^k), k = 1..4, "
                "has total degree increasing with k. This is a statement about these "
                "finite fields only."
            ),
            "frobenius_polynomial_agrees": self.frobenius_polynomial_agrees,
            "frobenius_interpolants_over_prime_field": self.frobenius_interpolants_over_prime_field,
            "inverse_square_agrees": self.inverse_square_agrees,
            "sqrt_interpolants": self.sqrt_interpolants,
            "sqrt_interpolants_differ": self.sqrt_interpolants_differ,
            "coordinate_degrees": self.coordinate_degrees,
            "degrees_increase": self.degrees_increase,
            "ok": self.frobenius_polynomial_agrees
            and self.frobenius_interpolants_over_prime_field
            and self.inverse_square_agrees
            and self.sqrt_interpolants_differ
            and self.degrees_increase,
        }


def frobenius_descent_witness(max_k: int = 4) -> FrobeniusWitness:
    F16 = GF(2, 4)
    els = list(F16.elements())
    frob_ok = all(
        entrywise_square(phibar(x, y)) == frobenius_square_formula(x, y) for x in els for y in els
    )
    # the interpolants of the squared entries have F_2 coefficients and
    # degree below 16 in each variable, so they are the polynomials themselves
    squared = {(x, y): entrywise_square(phibar(x, y)).rows() for x in els for y in els}
    interp_ok = all(
        c.in_prime_field()
        for i in range(3)
        for j in range(3)
        for c in interpolate(F16, lambda a, b: squared[(a, b)][i][j]).values()
    )
    inv_ok = True
    for x in els:
        for y in els:
            P = phibar(x, y)
            x2 = coordinates(P)[1]
            _, s = phibar_inv(P)
            inv_ok &= s * s == x2
    sqrt_polys = {}
    for k in (2, 4):
        F = GF(2, k)
        sqrt_polys[k] = interpolate(F, lambda a, b: sqrt(a * b) + 1)
    # compare as polynomials with exponents; coefficients are 0/1 in both
    as_sets = {k: {(i, j, int(c)) for (i, j), c in poly.items()} for k, poly in sqrt_polys.items()}
    degrees = {}
    for k in range(1, max_k + 1):
        F = GF(2, k)
        poly = interpolate(F, lambda a, b: a * (sqrt(a * b) + 1))
        degrees[k] = _total_degree(poly)
    seq = [degrees[k] for k in sorted(degrees)]
    return FrobeniusWitness(
        frob_ok,
        interp_ok,
        inv_ok,
        {f"F_{2 ** k}": _poly_json(p) for k, p in sqrt_polys.items()},
        as_sets[2] != as_sets[4],
        {f"F_{2 ** k}": d for k, d in degrees.items()},
        all(a < b for a, b in zip(seq, seq[1:])),
    )


def formulas_json():
    """The closed formulas as strings, for the command line dump."""
    return {
        "Ad": "[[x1^2, 0, x2^2], [x1*x3, 1, x2*x4], [x3^2, 0, x4^2]]",
        "group_equations": ["x1*x5 + x3^2", "x2*x6 + x4^2", "x1*x6 + x2*x5 + 1"],
        "Ad_inverse": "[[sqrt(x1), sqrt(x2)], [sqrt(x5), sqrt(x6)]]",
        "unipotent_equations": ["x6 = x1", "x1*x5 + x3^2", "x1*x2 + x4^2", "x1^2 + x2*x5 + 1"],
        "ad": "[[0, 0, 0], [x3, 0, x2], [0, 0, 0]]",
        "phibar": "[[x*y + 1, 0, y^2], [x*(sqrt(x*y) + 1), 1, y*(sqrt(x*y) + 1)], [x^2, 0, x*y + 1]]",
        "phibar_inverse": "(sqrt(x5), sqrt(x2))",
    }
