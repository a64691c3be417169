"""Artin-Hasse series and the two exponential constructions built from it.

The series E_p(t) = exp(t + t^p/p + t^{p^2}/p^2 + ...) satisfies
E' = (1 + t^{p-1} + t^{p^2-1} + ...) E, which gives the recurrence

    j c_j = sum_k c_{j - p^k}.

Coefficients are carried as the integers a_j = j! c_j so that N = 10^4 terms
never touch a rational gcd.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .chevalley import AlgebraElement, SplittingUnavailable, rep_matrix
from .exactnum import Certificate, _check_prime, lift, reduce
from .linalg import Matrix, exp_nilpotent
from .ppower import m_power
from .rootdata import coxeter_number
from .splitting import br_inverse_on_U, project_g, project_m, splitting_available


def _vp_factorial(j: int, p: int) -> int:
    v, q = 0, p
    while q <= j:
        v += j // q
        q *= p
    return v


class AHSeries:
    """Truncated Artin-Hasse series c_0 + c_1 t + ... + c_N t^N."""

    def __init__(self, p: int, N: int):
        _check_prime(p)
        if N < 0:
            raise ValueError("truncation degree must be non-negative")
        self.p = p
        self.N = N
        self._scaled = self._recurrence(p, N)
        self._cache = {}

    @staticmethod
    def _recurrence(p, N):
        powers = []
        q = 1
        while q <= N:
            powers.append(q)
            q *= p
        a = [gmpy2.mpz(1)]
        # falling[k] = (j-1)! / (j-p^k)!, kept current as j advances
        falling = [gmpy2.mpz(1) for _ in powers]
        for j in range(1, N + 1):
            s = gmpy2.mpz(0)
            for k, q in enumerate(powers):
                if q > j:
                    break
                if q == j:
                    falling[k] = gmpy2.fac(j - 1)
                elif q < j:
                    falling[k] = falling[k] * (j - 1) // (j - q)
                s += a[j - q] * falling[k]
            a.append(s)
        return a

    def scaled(self, j: int) -> int:
        """The integer j! c_j."""
        return int(self._scaled[j])

    def coefficient(self, j: int) -> Fraction:
        if j not in self._cache:
            self._cache[j] = Fraction(int(self._scaled[j]), math.factorial(j))
        return self._cache[j]

    @property
    def coefficients(self):
        return [self.coefficient(j) for j in range(self.N + 1)]

    def valuation(self, j: int):
        a = self._scaled[j]
        if a == 0:
            return math.inf
        return int(gmpy2.remove(a, self.p)[1]) - _vp_factorial(j, self.p)

    def certificate(self) -> Certificate:
        worst, first = math.inf, None
        for j in range(self.N + 1):
            v = self.valuation(j)
            worst = min(worst, v)
            if v < 0 and first is None:
                first = (j, v)
        if first is None:
            return Certificate(True, self.p, worst)
        return Certificate(False, self.p, worst, *first)

    def reduced(self, j: int) -> int:
        """c_j mod p."""
        if self.valuation(j) < 0:
            raise ValueError(f"coefficient {j} is not {self.p}-integral")
        a, f = int(self._scaled[j]), math.factorial(j)
        g = math.gcd(a, f)
        a, f = a // g, f // g
        return a * pow(f, -1, self.p) % self.p

    def __repr__(self):
        return f"AHSeries(p={self.p}, N={self.N})"


_SERIES: dict[int, AHSeries] = {}


def ah_coefficients(p: int, N: int) -> AHSeries:
    """The truncated series; cached per p and grown on demand.

    >>> ah_coefficients(2, 3).coefficients
    [Fraction(1, 1), Fraction(1, 1), Fraction(1, 1), Fraction(2, 3)]
    """
    if N > 10**4:
        raise ValueError("truncation degree above 10^4 is out of range")
    s = _SERIES.get(p)
    if s is None or s.N < N:
        s = _SERIES[p] = AHSeries(p, N)
    if s.N == N:
        return s
    out = AHSeries.__new__(AHSeries)
    out.p, out.N, out._scaled, out._cache = p, N, s._scaled[: N + 1], s._cache
    return out


def ah_matrix(series, Y: Matrix) -> Matrix:
    """Sum of c_j Y^j for a nilpotent matrix Y; ``series`` may be a prime."""
    d = Y.nilpotency_degree()
    if d is None:
        raise ValueError("matrix is not nilpotent")
    p = series if isinstance(series, int) else series.p
    series = ah_coefficients(p, max(d - 1, 0))
    ring = Y.ring
    char = ring.characteristic
    if char and char != p:
        raise ValueError("field characteristic differs from the series prime")
    result = Matrix.identity(ring, Y.nrows)
    power = Matrix.identity(ring, Y.nrows)
    for j in range(1, d):
        power = power * Y
        c = series.reduced(j) if char else series.coefficient(j)
        if c:
            result = result + power.scale(c)
    return result


def ah_factorized(p: int, Y: Matrix) -> Matrix:
    """exp(Y) exp(Y^p / p) exp(Y^{p^2} / p^2) ..., over characteristic zero."""
    result = exp_nilpotent(Y)
    q = p
    while True:
        Yq = Y**q
        if Yq.is_zero():
            return result
        result = result * exp_nilpotent(Yq / q)
        q *= p


# ---------------------------------------------------------------------------
# constructions on u


@dataclass
class GExpEvaluation:
    input: AlgebraElement
    p: int
    char0_result: Matrix
    certificate: Certificate
    modp_result: Matrix
    path: str

    def to_json(self):
        return {
            "path": self.path,
            "p": self.p,
            "input": self.input.to_json(),
            "certificate": self.certificate.to_json(),
            "char0": self.char0_result.to_json(),
            "modp": self.modp_result.to_json(),
        }


def lift_element(x: AlgebraElement) -> AlgebraElement:
    ring = x.ring.lift_ring()
    return AlgebraElement(x.algebra, [lift(c) if c else ring.zero for c in x.coords], ring)


def reduce_element(x: AlgebraElement, field) -> AlgebraElement:
    return AlgebraElement(x.algebra, [reduce(c, field) for c in x.coords], field)


def _check_domain(x: AlgebraElement):
    p = x.ring.characteristic
    if not p:
        raise ValueError("expected an element over a finite field")
    if not x.in_positive_part():
        raise ValueError("element is not supported on positive roots")
    alg = x.algebra
    # type A at p | n+1 keeps exact formulas: powers of nilpotents are traceless
    if not splitting_available(alg, p) and alg.rs.type_label != "A":
        raise SplittingUnavailable(f"trace form of {alg.name} is degenerate mod {p}")
    return p


def sigma(x: AlgebraElement, p: int):
    """π_m(dφ(x)^p) / p over characteristic zero, with its certificate."""
    if x.ring.characteristic:
        raise ValueError("sigma is evaluated over characteristic zero")
    Y = rep_matrix(x)
    S = project_m(Y**p, x.algebra) / p
    return S, S.certificate(p)


def _finish(x, p, U, path):
    from .springer import is_group_member, is_unipotent

    cert = U.certificate(p)
    if not cert:
        raise AssertionError(f"{path}: result is not {p}-integral ({cert})")
    g = U.reduce(x.ring)
    if not is_unipotent(g):
        raise AssertionError(f"{path}: reduction is not unipotent")
    if not is_group_member(x.algebra, g):
        raise AssertionError(f"{path}: reduction is not in the group")
    return GExpEvaluation(x, p, U, cert, g, path)


def lifted_log(x: AlgebraElement, p: int) -> AlgebraElement:
    """X + m^p(X)/p + (m^p)^2(X)/p^2 + ... for X over characteristic zero."""
    z, term, scale = x, x, 1
    for _ in range(x.algebra.rep_dim + 1):
        term = m_power(term, p)
        if term.is_zero():
            return z
        scale *= p
        z = z + term / scale
    raise AssertionError("iterated p-power map did not vanish")


def gexp_tilde(x: AlgebraElement) -> GExpEvaluation:
    """exp(dφ(X + m^p(X)/p + ...)) for X over F_{p^k} supported on u, reduced mod p."""
    p = _check_domain(x)
    X = lift_element(x)
    U = exp_nilpotent(rep_matrix(lifted_log(X, p)))
    return _finish(x, p, U, "exp")


def psi_path(x: AlgebraElement) -> GExpEvaluation:
    """π^{-1} π_g(E_p(dφ X) E_p(-σ(X))), the second route to the same element."""
    p = _check_domain(x)
    alg = x.algebra
    if alg.rs.type_label in "EFG" and p * p <= coxeter_number(alg.rs):
        raise ValueError(f"the ψ route needs p^2 > h for {alg.name}")
    X = lift_element(x)
    Y = rep_matrix(X)
    S, cert = sigma(X, p)
    if not cert:
        raise AssertionError(f"σ(X) is not {p}-integral ({cert})")
    M = ah_matrix(p, Y) * ah_matrix(p, -S)
    U = br_inverse_on_U(project_g(M, alg))
    return _finish(x, p, U, "psi")
