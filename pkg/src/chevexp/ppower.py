"""Multilinear maps m_i, power maps m^i and the iterated lifted p-power map."""

from __future__ import annotations

from dataclasses import dataclass, field

from .chevalley import AlgebraElement, ChevalleyAlgebra, SplittingUnavailable, bracket, rep_matrix
from .exactnum import Certificate, certify_p_integral
from .rootdata import coxeter_number
from .splitting import project_g, splitting_available


def m_multi(xs, p: int | None = None) -> AlgebraElement:
    """π_g of the ordered product dφ(x_1) ... dφ(x_i), as an algebra element.

    >>> from chevexp.chevalley import algebra
    >>> sl2 = algebra("A1")
    >>> e, f = sl2.e((1,)), sl2.e((-1,))
    >>> m_multi([e, f]) - m_multi([f, e]) == e.bracket(f)
    True
    """
    xs = list(xs)
    if not xs:
        raise ValueError("m_multi needs at least one argument")
    alg = xs[0].algebra
    product = rep_matrix(xs[0])
    for y in xs[1:]:
        if y.algebra is not alg or y.ring != xs[0].ring:
            raise ValueError("arguments must share algebra and ring")
        product = product * rep_matrix(y)
    return project_g(product, alg, p)


def m_power(x: AlgebraElement, i: int, p: int | None = None) -> AlgebraElement:
    """m^i(x) = π_g(dφ(x)^i), checked to commute with x."""
    if i < 1:
        raise ValueError("power must be positive")
    y = project_g(rep_matrix(x) ** i, x.algebra, p)
    if not bracket(x, y).is_zero():
        raise AssertionError("m^i(x) does not commute with x")
    return y


@dataclass
class PowerMapResult:
    """Iterates (m^p)^j(x) for j = 0, 1, ... with their certificates."""

    p: int
    value: AlgebraElement
    iterations: list = field(default_factory=list)
    vanishing_index: int | None = None
    bound: int | None = None
    certificates: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            all(self.certificates)
            and self.vanishing_index is not None
            and (self.bound is None or self.vanishing_index <= self.bound)
        )

    def to_json(self):
        return {
            "p": self.p,
            "vanishing_index": self.vanishing_index,
            "bound": self.bound,
            "iterations": [y.to_json() for y in self.iterations],
            "certificates": [c.to_json() for c in self.certificates],
            "ok": self.ok,
        }


def vanishing_bound(alg: ChevalleyAlgebra, p: int) -> int:
    """Smallest i with p^i >= h."""
    h = coxeter_number(alg.rs)
    i = 0
    while p**i < h:
        i += 1
    return i


def iterate_p_power(x: AlgebraElement, p: int, steps: int) -> PowerMapResult:
    """Apply m^p repeatedly, stopping early at zero."""
    result = PowerMapResult(p, x, [x], None, None, [certify_p_integral(x.coords, p)])
    y = x
    if y.is_zero():
        result.vanishing_index = 0
        return result
    for j in range(1, steps + 1):
        y = m_power(y, p, p)
        result.iterations.append(y)
        result.certificates.append(certify_p_integral(y.coords, p))
        result.value = y
        if y.is_zero():
            result.vanishing_index = j
            break
    return result


def theorem_a_scan(alg: ChevalleyAlgebra, p: int, x: AlgebraElement) -> PowerMapResult:
    """Iterate m^p on a p-integral element of u over Q up to the bound p^i >= h.

    Raises AssertionError when an iterate fails its integrality certificate or
    the iterates have not vanished by the bound.
    """
    if x.ring.characteristic:
        raise ValueError("theorem_a_scan works over characteristic zero")
    if not x.in_positive_part():
        raise ValueError("element is not supported on positive roots")
    if not splitting_available(alg, p):
        raise SplittingUnavailable(f"trace form of {alg.name} is degenerate mod {p}")
    start: Certificate = certify_p_integral(x.coords, p)
    if not start:
        raise ValueError(f"element is not {p}-integral")
    bound = vanishing_bound(alg, p)
    result = iterate_p_power(x, p, bound)
    result.bound = bound
    for j, c in enumerate(result.certificates):
        if not c:
            raise AssertionError(f"iterate {j} is not {p}-integral: {c}")
    if result.vanishing_index is None:
        raise AssertionError(f"(m^{p})^{bound}(x) is nonzero")
    return result
