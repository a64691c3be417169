import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from chevexp.chevalley import AlgebraElement, SplittingUnavailable, algebra, rep_matrix
from chevexp.exactnum import GF, QQ, unramified_ring
from chevexp.linalg import Matrix
from chevexp.splitting import (
    br_inverse_on_U,
    br_unipotent_to_nilpotent,
    gram_determinant,
    gram_matrix,
    is_nondegenerate_mod_p,
    project_g,
    project_m,
    root_group_element,
)
from chevexp.springer import adjoint_action, is_unipotent, matrix_inverse, regular_nilpotent
from oracles import trace_form_condition

PRIMES = [2, 3, 5, 7, 11, 13]


TYPES = ["A1", "A2", "A3", "A4", "A5", "A6", "B2", "B3", "C2", "C3", "D3", "D4", "D5", "G2", "F4", "E6", "E7", "E8"]


def random_matrix(ring, n, rng):
    if ring is QQ:
        return Matrix.from_rows(QQ, [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)])
    if ring.characteristic:
        return Matrix.from_rows(ring, [[ring.random(rng) for _ in range(n)] for _ in range(n)])
    return Matrix.from_rows(ring, [[ring.from_coeffs([rng.randint(-5, 5) for _ in range(ring.degree)]) for _ in range(n)] for _ in range(n)])


def random_element(alg, ring, rng):
    if ring.characteristic:
        return AlgebraElement(alg, [ring.random(rng) for _ in range(alg.dim)], ring)
    return alg.element([rng.randint(-4, 4) for _ in range(alg.dim)])


def test_gram_sl2():
    alg = algebra("A1")
    assert [list(r) for r in gram_matrix(alg)] == [[2, 0, 0], [0, 0, 1], [0, 1, 0]]
    assert gram_determinant(alg) == -2
    assert is_nondegenerate_mod_p(alg, 3) and not is_nondegenerate_mod_p(alg, 2)


@pytest.mark.parametrize("name", ["A3", "C3", "G2", "F4"])
def test_gram_matches_dense_traces(name):
    alg = algebra(name)
    G = gram_matrix(alg)
    mats = [rep_matrix(alg.basis_element(i)) for i in range(alg.dim)]
    for i in range(alg.dim):
        for j in range(alg.dim):
            assert G[i][j] == (mats[i] * mats[j]).trace()
            a, b = alg.basis_roots[i], alg.basis_roots[j]
            if a is not None and b is not None and any(x + y for x, y in zip(a, b)):
                assert G[i][j] == 0
    assert sympy.Matrix(G).det() == gram_determinant(alg)


def test_g2_determinant_support():
    det = gram_determinant(algebra("G2"))
    assert det and set(sympy.factorint(abs(det))) <= {2, 3}


@pytest.mark.parametrize("name", TYPES)
def test_trace_form_condition_both_directions(name):
    alg = algebra(name)
    for p in PRIMES:
        assert is_nondegenerate_mod_p(alg, p) == trace_form_condition(name, p), (name, p)
    # a violating prime exists for every type in the list
    assert any(not trace_form_condition(name, p) for p in PRIMES)


def test_projection_examples():
    sl2 = algebra("A1")
    I = Matrix.identity(QQ, 2)
    assert project_g(I, sl2).is_zero()
    M = Matrix.from_rows(QQ, [[1, 0], [0, 0]])
    assert project_g(M, sl2) == sl2.h(0) / 2
    assert project_m(M, sl2) == I / 2
    with pytest.raises(SplittingUnavailable):
        project_g(M.reduce(GF(2)), sl2)


@pytest.mark.parametrize("name", ["A2", "B2", "C3", "D4", "G2"])
def test_projection_identity_and_recombination(name):
    alg = algebra(name)
    rng = random.Random(5)
    for ring in (QQ, GF(7), GF(7, 2), unramified_ring(7, 2)):
        M = random_matrix(ring, alg.rep_dim, rng)
        assert rep_matrix(project_g(M, alg)) + project_m(M, alg) == M
        assert project_g(Matrix.identity(ring, alg.rep_dim), alg).is_zero()
    for ring in (QQ, GF(7), GF(7, 2)):
        y = random_element(alg, ring, rng)
        assert project_g(rep_matrix(y), alg) == y


@given(st.integers(0, 10**6))
def test_type_a_projection_formula(seed):
    rng = random.Random(seed)
    for name in ("A2", "A3"):
        alg = algebra(name)
        n = alg.rep_dim
        M = random_matrix(QQ, n, rng)
        expected = M - Matrix.identity(QQ, n).scale(M.trace() / n)
        assert rep_matrix(project_g(M, alg)) == expected


@pytest.mark.parametrize("name", ["B2", "C2", "C3", "D4"])
def test_odd_and_even_powers(name):
    alg = algebra(name)
    rng = random.Random(6)
    for _ in range(3):
        X = rep_matrix(random_element(alg, QQ, rng))
        for i in range(1, 6):
            P = X**i
            expected = P if i % 2 else Matrix.zeros(QQ, alg.rep_dim)
            assert rep_matrix(project_g(P, alg)) == expected


@pytest.mark.parametrize("name,p,k", [("A2", 5, 2), ("C2", 3, 1), ("G2", 7, 1)])
def test_projection_equivariance(name, p, k):
    alg = algebra(name)
    F = GF(p, k)
    rng = random.Random(7)
    roots = list(alg.rs.positive_roots) + [tuple(-x for x in a) for a in alg.rs.positive_roots]
    g = Matrix.identity(F, alg.rep_dim)
    g_inv = Matrix.identity(F, alg.rep_dim)
    for _ in range(5):
        a, t = rng.choice(roots), F.random(rng)
        g = g * root_group_element(alg, a, t, F)
        g_inv = root_group_element(alg, a, -t, F) * g_inv
    assert (g * g_inv).is_identity()
    M = random_matrix(F, alg.rep_dim, rng)
    assert project_g(g * M * g_inv, alg) == adjoint_action(g, project_g(M, alg), g_inv)


def test_br_unipotent_to_nilpotent_examples():
    sl2 = algebra("A1")
    F = GF(3)
    assert br_unipotent_to_nilpotent(Matrix.identity(F, 2), sl2).is_zero()
    g = Matrix.from_rows(F, [[1, 1], [0, 1]])
    assert br_unipotent_to_nilpotent(g, sl2) == sl2.e((1,), F)
    g2 = algebra("G2")
    u = root_group_element(g2, (1, 0), 1, GF(5))
    x = br_unipotent_to_nilpotent(u, g2)
    assert not x.is_zero() and rep_matrix(x).is_nilpotent()
    with pytest.raises(ValueError):
        br_unipotent_to_nilpotent(Matrix.identity(GF(5), g2.dim).scale(2), g2)


def test_br_inverse_examples():
    sl3 = algebra("A2")
    assert br_inverse_on_U(sl3.zero()).is_identity()
    u = br_inverse_on_U(sl3.e((1, 0)))
    assert u == Matrix.from_rows(QQ, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    g2 = algebra("G2")
    U = br_inverse_on_U(regular_nilpotent(g2))
    assert U.certificate(5)
    assert is_unipotent(U.reduce(GF(5)))


@given(st.integers(0, 10**6))
def test_br_round_trip(seed):
    rng = random.Random(seed)
    for name, p in (("B2", 3), ("G2", 5)):
        alg = algebra(name)
        F = GF(p)
        coords = [F.zero] * alg.dim
        for i in alg.positive_indices():
            coords[i] = F.random(rng)
        x = AlgebraElement(alg, coords, F)
        u = br_inverse_on_U(x)
        assert is_unipotent(u)
        assert br_unipotent_to_nilpotent(u, alg) == x
        assert (u * matrix_inverse(u)).is_identity()
