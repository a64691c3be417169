import itertools
import random

import pytest

from chevexp.exactnum import GF
from chevexp.linalg import Matrix
from chevexp import pgl2char2 as pg


def sl2(F, a, b, c, d):
    return Matrix.from_rows(F, [[a, b], [c, d]])


def test_basis_identity_in_char_two():
    E, H, Fm = pg.sl2_basis(GF(2))
    assert H.is_identity()
    assert E * Fm + Fm * E == H


def test_ad_example():
    F = GF(2, 2)
    w = F.gen()
    g = sl2(F, w, 1, 0, w * w)
    assert g.rows()[0][0] * g.rows()[1][1] == F.one
    assert pg.ad_matrix_sl2(g) == pg.conjugation_matrix(g)
    assert pg.ad_matrix_sl2(g) == pg.point(F, w * w, 1, 0, w * w, 0, w**4)


@pytest.mark.parametrize("k", [1, 2])
def test_ad_image_is_solution_set(k):
    F = GF(2, k)
    sl = list(pg.sl2_points(F))
    image = {tuple(pg.ad_matrix_sl2(g).entries()) for g in sl}
    solutions = {tuple(P.entries()) for P in pg.pgl2_points(F)}
    assert image == solutions
    # characteristic 2: g ↦ Ad(g) is injective on SL_2 since the centre is trivial
    assert len(image) == len(sl) == F.order * (F.order**2 - 1)


@pytest.mark.parametrize("k", [1, 2])
def test_homomorphism_exhaustive(k):
    F = GF(2, k)
    sl = list(pg.sl2_points(F))
    ads = [pg.ad_matrix_sl2(g) for g in sl]
    for (g, A), (h, B) in itertools.product(zip(sl, ads), repeat=2):
        assert pg.ad_matrix_sl2(g * h) == A * B


@pytest.mark.parametrize("k", [3, 4])
def test_homomorphism_random(k):
    F = GF(2, k)
    rng = random.Random(k)
    sl = list(pg.sl2_points(F)) if k == 3 else None

    def pick():
        if sl is not None:
            return rng.choice(sl)
        while True:
            a, b, c = (F.random(rng) for _ in range(3))
            if a:
                return sl2(F, a, b, c, (1 + b * c) / a)

    for _ in range(200):
        g, h = pick(), pick()
        assert pg.ad_matrix_sl2(g) == pg.conjugation_matrix(g)
        assert pg.ad_matrix_sl2(g * h) == pg.ad_matrix_sl2(g) * pg.ad_matrix_sl2(h)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ad_inverse_round_trip(k):
    F = GF(2, k)
    for g in pg.sl2_points(F):
        P = pg.ad_matrix_sl2(g)
        assert pg.satisfies_group_equations(P)
        assert pg.ad_inverse(P) == g
    with pytest.raises(ValueError):
        pg.ad_inverse(pg.point(F, 0, 0, 0, 0, 0, 0))


@pytest.mark.parametrize("k", [1, 2])
def test_unipotent_points(k):
    F = GF(2, k)
    I = Matrix.identity(F, 3)
    uni = [P for P in pg.pgl2_points(F) if ((P - I) ** 3).is_zero()]
    assert {tuple(P.entries()) for P in uni} == {
        tuple(P.entries()) for P in pg.pgl2_points(F) if pg.unipotent_membership(P)
    }
    assert len(uni) == F.order**2


@pytest.mark.parametrize("k", [1, 2, 3])
def test_characteristic_polynomial(k):
    F = GF(2, k)
    for g in pg.sl2_points(F):
        P = pg.ad_matrix_sl2(g)
        assert pg.characteristic_polynomial(P) == pg.displayed_characteristic_polynomial(P)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_ad_formula(k):
    F = GF(2, k)
    els = list(F.elements())
    for a, b, c in itertools.product(els, repeat=3):
        X = sl2(F, a, b, c, a)
        assert pg.ad_sl2(X) == pg.ad_by_commutators(X)
    with pytest.raises(ValueError):
        pg.ad_sl2(sl2(F, 1, 0, 0, 0))


def test_tangent_space():
    basis = pg.tangent_space()
    assert len(basis) == 3
    F = GF(2)
    # {x1 = x6, free x3, free x4}: the image of ad plus the diagonal direction
    span = {tuple(sum((B.scale(F(c)) for c, B in zip(cs, basis)), Matrix.zeros(F, 3)).entries())
            for cs in itertools.product(range(2), repeat=3)}
    expected = {
        tuple(Matrix.from_rows(F, [[a, 0, 0], [x, 0, y], [0, 0, a]]).entries())
        for a, x, y in itertools.product(range(2), repeat=3)
    }
    assert span == expected
    comm = pg.span_of_commutators(basis)
    assert len(comm) == 2
    pts = {tuple(pg.nilpotent(F, x, y).entries()) for x, y in itertools.product(F.elements(), repeat=2)}
    combos = set()
    for cs in itertools.product(range(2), repeat=2):
        v = [F.zero] * 9
        for c, row in zip(cs, comm):
            if c:
                v = [s + t for s, t in zip(v, row)]
        combos.add(tuple(v))
    assert combos == pts


def test_nilpotent_cone_is_the_span_over_f4():
    F = GF(2, 2)
    els = list(F.elements())
    # pgl_2 is {diag(a, 0, a) + nilpotent(x, y)}; keep its nilpotent elements
    cone = set()
    for a, x, y in itertools.product(els, repeat=3):
        P = Matrix.from_rows(F, [[a, 0, 0], [x, 0, y], [0, 0, a]])
        if (P**3).is_zero():
            cone.add(tuple(P.entries()))
    span = {tuple(pg.nilpotent(F, x, y).entries()) for x in els for y in els}
    assert cone == span
    ad_images = {tuple(pg.ad_sl2(sl2(F, a, b, c, a)).entries()) for a in els for b in els for c in els}
    assert ad_images == span


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_phibar(k):
    F = GF(2, k)
    els = list(F.elements())
    I = Matrix.identity(F, 3)
    seen = set()
    for x in els:
        for y in els:
            P = pg.phibar(x, y)
            assert P == pg.phibar_by_lifting(x, y)
            assert pg.unipotent_membership(P) and pg.satisfies_group_equations(P)
            assert pg.phibar_inv(P) == (x, y)
            assert P * pg.nilpotent(F, x, y) == pg.nilpotent(F, x, y) * P
            seen.add(tuple(P.entries()))
    assert len(seen) == F.order**2
    assert pg.phibar(F.zero, F.zero) == I


def test_phibar_inverse_rejects_non_unipotent():
    F = GF(2, 2)
    w = F.gen()
    P = pg.ad_matrix_sl2(sl2(F, w, 0, 0, w * w))
    with pytest.raises(ValueError):
        pg.phibar_inv(P)


def test_sqrt_requires_char_two():
    with pytest.raises(ValueError):
        pg.sqrt(GF(3)(1))
    F = GF(2, 3)
    for z in F.elements():
        assert pg.sqrt(z) ** 2 == z


def test_interpolation_recovers_polynomials():
    F = GF(2, 2)
    poly = pg.interpolate(F, lambda a, b: a * a * b + a + 1)
    assert {k: int(v) for k, v in poly.items()} == {(2, 1): 1, (1, 0): 1, (0, 0): 1}


def test_frobenius_witness():
    w = pg.frobenius_descent_witness()
    data = w.to_json()
    assert data["ok"]
    assert w.frobenius_polynomial_agrees and w.inverse_square_agrees
    assert w.sqrt_interpolants_differ
    assert w.coordinate_degrees == {"F_2": 2, "F_4": 5, "F_8": 9, "F_16": 17}
