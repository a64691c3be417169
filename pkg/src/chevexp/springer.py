"""Group membership, regular nilpotents and the family of exponential maps.

Groups are the images of the distinguished representations: SL_{n+1} for
type A, the isometry groups of the stored forms for B, C, D, and the
automorphism groups of the adjoint module for the exceptional types.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field

import flint

from .chevalley import AlgebraElement, ChevalleyAlgebra, bracket, p_power, rep_matrix, rep_preimage
from .exactnum import GF, QQ
from .linalg import Matrix, determinant, nullspace, rank
from .rootdata import weyl_exponents


# ---------------------------------------------------------------------------
# membership


def matrix_determinant(g: Matrix):
    ring = g.ring
    if ring.degree == 1:
        d = g.comps[0].det()
        return ring.from_coeffs((int(d),)) if ring.characteristic else ring.from_coeffs((d,))
    return determinant(g.rows())


def matrix_inverse(g: Matrix) -> Matrix:
    ring = g.ring
    if ring.degree == 1:
        return Matrix(ring, [g.comps[0].inv()])
    n = g.nrows
    aug = [row + [ring.one if i == j else ring.zero for j in range(n)] for i, row in enumerate(g.rows())]
    from .linalg import row_reduce

    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return Matrix.from_rows(ring, [r[n:] for r in red])


def _generator_indices(alg: ChevalleyAlgebra):
    r, npos = alg.rank, alg.npos
    return [r + k for k in range(r)] + [r + npos + k for k in range(r)]


def is_group_member(alg: ChevalleyAlgebra, g: Matrix) -> bool:
    """Membership of g in the group carried by the representation.

    For the adjoint types it suffices to check g ad(b) = ad(g b) g for the
    simple root vectors b = e_{±a_i}, which generate the algebra: the identity
    then propagates to brackets by the Jacobi identity.
    """
    ring = g.ring
    n = alg.rep_dim
    if (g.nrows, g.ncols) != (n, n):
        return False
    label = alg.rs.type_label
    if label == "A":
        return matrix_determinant(g) == ring.one
    if label in "BCD":
        J = Matrix.from_rows(ring, alg.form)
        return g.T * J * g == J and matrix_determinant(g) == ring.one
    if not matrix_determinant(g):
        return False
    rows = g.rows()
    for i in _generator_indices(alg):
        B = alg.rep_matrix_of_basis(i, ring)
        q = alg.rep_position[i]
        image = alg.vector_to_element([row[q] for row in rows], ring)
        if g * B != rep_matrix(image) * g:
            return False
    return True


def is_unipotent(g: Matrix) -> bool:
    N = g - Matrix.identity(g.ring, g.nrows)
    return (N ** g.nrows).is_zero()


def adjoint_action(g: Matrix, x: AlgebraElement, g_inv: Matrix | None = None) -> AlgebraElement:
    """Ad(g) x, read back from g dφ(x) g^{-1}."""
    if g_inv is None:
        g_inv = matrix_inverse(g)
    return rep_preimage(g * rep_matrix(x) * g_inv, x.algebra)


# ---------------------------------------------------------------------------
# grading and regular nilpotents


@dataclass(frozen=True)
class CocharacterGrading:
    """Weights of the basis under the sum of positive coroots."""

    weights: tuple
    graded_components: dict

    @classmethod
    def of(cls, alg: ChevalleyAlgebra):
        comps = {}
        for i, w in enumerate(alg.weights):
            comps.setdefault(w, []).append(i)
        return cls(tuple(alg.weights), {w: tuple(v) for w, v in comps.items()})

    def weight(self, x: AlgebraElement):
        """The weight of a homogeneous nonzero element, else None."""
        ws = {self.weights[i] for i in x.support()}
        return ws.pop() if len(ws) == 1 else None


def regular_nilpotent(alg: ChevalleyAlgebra, ring=QQ) -> AlgebraElement:
    """Sum of the simple root vectors."""
    x = alg.zero(ring)
    for a in alg.rs.simple_roots:
        x = x + alg.e(a, ring)
    return x


def _ad_rows(x: AlgebraElement, columns):
    """Rows of ad(x) restricted to the given basis indices."""
    alg, ring = x.algebra, x.ring
    images = [bracket(x, alg.basis_element(j, ring)).coords for j in columns]
    return [[images[c][i] for c in range(len(columns))] for i in range(alg.dim)]


def _field_rank(rows, ring):
    if not rows or not rows[0]:
        return 0
    if ring.degree == 1:
        if ring.characteristic:
            M = flint.nmod_mat(len(rows), len(rows[0]), [int(v) for r in rows for v in r], ring.characteristic)
        else:
            M = flint.fmpq_mat(len(rows), len(rows[0]), [flint.fmpq(v.numerator, v.denominator) for r in rows for v in r])
        return M.rank()
    return rank(rows)


def centralizer_dimension(y: AlgebraElement) -> int:
    """dim ker ad(y)."""
    alg = y.algebra
    return alg.dim - _field_rank(_ad_rows(y, range(alg.dim)), y.ring)


def nilpotent_order(x: AlgebraElement) -> int:
    """The least m with x^[p^m] = 0."""
    if not x.ring.characteristic:
        raise ValueError("nilpotent order is defined over positive characteristic")
    m, y = 0, x
    while not y.is_zero():
        y = p_power(y)
        m += 1
        if m > x.algebra.rep_dim:
            raise ValueError("element is not nilpotent")
    return m


def centralizer_weight_basis(x: AlgebraElement):
    """Homogeneous basis of ker ad(x) as (element, weight) pairs, x first.

    The weights are checked against twice the exponents. For SL_{n+1} with
    p | n + 1 the scalar matrices are central; that weight-0 direction is
    dropped with a warning so the remaining basis matches the gl_n picture.
    """
    alg, ring = x.algebra, x.ring
    grading = CocharacterGrading.of(alg)
    if grading.weight(x) != 2 or centralizer_dimension(x) < alg.rank:
        raise ValueError("expected a regular nilpotent of weight 2")
    out = []
    for w in sorted(grading.graded_components):
        if w < 0:
            continue
        cols = grading.graded_components[w]
        rows = _ad_rows(x, cols)
        for v in nullspace(rows, ring.zero, ring.one):
            coords = [ring.zero] * alg.dim
            for c, j in zip(v, cols):
                coords[j] = c
            out.append((AlgebraElement(alg, coords, ring), w))
    if out and out[0][1] == 0:
        if alg.rs.type_label == "A" and ring.characteristic and (alg.rank + 1) % ring.characteristic == 0:
            warnings.warn("p divides n+1: dropping the central weight-0 direction", stacklevel=2)
            out = [pair for pair in out if pair[1] != 0]
        else:
            raise AssertionError("unexpected weight-0 vector in the centralizer")
    if len(out) != alg.rank:
        raise AssertionError(f"centralizer has dimension {len(out)}, expected {alg.rank}")
    expected = sorted(2 * k for k in weyl_exponents(alg.rs))
    if sorted(w for _, w in out) != expected:
        raise AssertionError(f"centralizer weights {[w for _, w in out]} differ from {expected}")
    # normalise the weight-2 vector to x itself
    out = [(x, 2) if w == 2 else (y, w) for y, w in out]
    return out


def is_regular_in_centralizer(y: AlgebraElement, x: AlgebraElement) -> bool:
    """Whether y in ker ad(x) is regular: its component along x is nonzero.

    The answer is cross-checked against dim ker ad(y) = rank.
    """
    if not bracket(x, y).is_zero():
        raise ValueError("y does not centralise x")
    alg = x.algebra
    simple = alg.root_index[alg.rs.simple_roots[0]]
    coefficient = y.coords[simple] / x.coords[simple]
    answer = bool(coefficient)
    if answer != (centralizer_dimension(y) == alg.rank):
        raise AssertionError("coefficient test and kernel dimension disagree")
    return answer


# ---------------------------------------------------------------------------
# the family of exponential maps


def embed(x: AlgebraElement, ring) -> AlgebraElement:
    """Move x from F_p (or a subfield) into ``ring``."""
    if x.ring is ring or x.ring == ring:
        return x
    if x.ring.degree != 1:
        raise ValueError("only prime-field elements can be embedded")
    return AlgebraElement(x.algebra, [ring(int(c)) for c in x.coords], ring)


def extra_direction(alg: ChevalleyAlgebra, p: int):
    """For D_{p^n+1}: a weight-2p^n centraliser vector independent of X^[p^n]."""
    label, r = alg.rs.type_label, alg.rs.rank
    n = 0
    while p**n + 1 < r:
        n += 1
    if label != "D" or p**n + 1 != r or n == 0:
        raise ValueError(f"{alg.name} is not of type D_(p^n+1) for p={p}")
    F = GF(p)
    x = regular_nilpotent(alg, F)
    power = x
    for _ in range(n):
        power = p_power(power)
    w = 2 * p**n
    for y, wy in centralizer_weight_basis(x):
        if wy == w and _field_rank([power.coords, y.coords], F) == 2:
            return y, n
    raise AssertionError("no extra centraliser direction found")


class GExpMap:
    """y ↦ φ(a_0 y) φ(a_1 y^[p]) ... φ(a_{m-1} y^[p^{m-1}]) (φ(b γ(y)) for D_{p^n+1}).

    φ defaults to the modified Artin-Hasse exponential. ``params`` lie in
    ``field``; with ``strict`` the parameters must satisfy a_0 ≠ 0 and
    a_0, ..., a_{m-2} in F_p, and the relation ψ(X^[p]) = ψ(X)^p is asserted
    at the regular element X. ``strict=False`` admits arbitrary parameters so
    that failures of that relation can be exhibited.
    """

    def __init__(self, alg: ChevalleyAlgebra, field, params=None, b=None, base=None, strict=True):
        from .artinhasse import gexp_tilde

        self.algebra = alg
        self.field = field
        self.p = p = field.characteristic
        self.regular = regular_nilpotent(alg, field)
        self.m = nilpotent_order(regular_nilpotent(alg, GF(p)))
        if params is None:
            params = [1] + [0] * (self.m - 1)
        self.params = tuple(field(a) for a in params)
        self.b = None if b is None else field(b)
        self._base = base or (lambda y: gexp_tilde(y).modp_result)
        self._values = {}
        self.gamma = None
        if self.b is not None:
            direction, self.gamma_exponent = extra_direction(alg, p)
            self.gamma = embed(direction, field)
        problems = self.domain_problems()
        if strict and problems:
            raise ValueError("; ".join(problems))
        self.relation_holds = self.check_relation(self.regular)
        if strict and not self.relation_holds:
            raise AssertionError("ψ(X^[p]) ≠ ψ(X)^p at the regular element")

    def domain_problems(self):
        out = []
        if len(self.params) != self.m:
            out.append(f"expected {self.m} parameters, got {len(self.params)}")
        if not self.params or not self.params[0]:
            out.append("a_0 must be nonzero")
        for j, a in enumerate(self.params[:-1]):
            if not a.in_prime_field():
                out.append(f"a_{j} must lie in F_{self.p}")
        return out

    def phi(self, y: AlgebraElement) -> Matrix:
        key = tuple(y.coords)
        if key not in self._values:
            self._values[key] = self._base(y)
        return self._values[key]

    def gamma_of(self, y: AlgebraElement):
        """γ on the regular line: γ(cX) = c^{p^n} X_r and γ(c X^[p^i]) = 0 for i > 0."""
        x = self.regular
        power = x
        for i in range(self.m + 1):
            support = power.support()
            if support:
                j = support[0]
                c = y.coords[j] / power.coords[j]
                if power * c == y:
                    if i == 0:
                        return self.gamma * (c ** (self.p**self.gamma_exponent))
                    return None
            power = p_power(power)
        raise ValueError("the extra parameter is only evaluable on the regular line and its p-powers")

    def __call__(self, y: AlgebraElement) -> Matrix:
        y = embed(y, self.field)
        result = Matrix.identity(self.field, self.algebra.rep_dim)
        power = y
        for a in self.params:
            if power.is_zero():
                break
            if a:
                result = result * self.phi(power * a)
            power = p_power(power)
        if self.b:
            g = self.gamma_of(y)
            if g is not None:
                result = result * self.phi(g * self.b)
        return result

    def check_relation(self, y: AlgebraElement) -> bool:
        """ψ(y^[p]) = ψ(y)^p."""
        y = embed(y, self.field)
        return self(p_power(y)) == self(y) ** self.p

    def __repr__(self):
        return f"GExpMap({self.algebra.name}, {self.field}, params={self.params}, b={self.b})"


def gexp_family(alg: ChevalleyAlgebra, field, params=None, b=None, strict=True) -> GExpMap:
    return GExpMap(alg, field, params, b, strict=strict)


# ---------------------------------------------------------------------------
# Witt subgroups and centraliser checks


@dataclass
class Report:
    suite: str
    cases: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, witness):
        self.failures.append(witness)

    def to_json(self):
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": sorted(self.failures, key=repr),
            "ok": self.ok,
            **self.details,
        }


def _key(g: Matrix):
    return tuple(tuple(c.entries()) for c in g.comps) if g.ring.characteristic else tuple(map(str, g.entries()))


def _witt_points(field, m):
    return itertools.product(list(field.elements()), repeat=m)


def canonical_witt_check(phi: GExpMap, psi: GExpMap, x: AlgebraElement | None = None) -> Report:
    """Compare the image point sets of the Witt embeddings at x."""
    from .witt import witt_embed

    field = phi.field
    x = embed(x if x is not None else phi.regular, field)
    m = nilpotent_order(x)
    report = Report("canonical")
    image_phi, image_psi = set(), set()
    for a in _witt_points(field, m):
        image_phi.add(_key(witt_embed(phi, x, a)))
        image_psi.add(_key(witt_embed(psi, x, a)))
        report.cases += 1
    equal = image_phi == image_psi
    report.details.update(
        equal=equal,
        sizes=[len(image_phi), len(image_psi)],
        only_in_second=len(image_psi - image_phi),
    )
    return report


def _refined_generators(x: AlgebraElement):
    """Weight-basis vectors that are not p-power iterates of earlier choices."""
    ring = x.ring
    chosen, span = [], []
    for y, w in centralizer_weight_basis(x):
        if _field_rank(span + [y.coords], ring) == len(span):
            continue
        chosen.append((y, w))
        z = y
        while not z.is_zero():
            if _field_rank(span + [z.coords], ring) > len(span):
                span.append(z.coords)
            z = p_power(z)
    return chosen, len(span)


def _commutant_points(X: Matrix):
    """All matrices commuting with X, by enumerating a nullspace basis over F_p."""
    field = X.ring
    n = X.nrows
    p, k = field.p, field.degree
    # unknown g as n*n*k digits over F_p
    rows = []
    basis_mats = []
    for idx in range(n * n):
        i, j = divmod(idx, n)
        for l in range(k):
            E = Matrix.from_sparse(field, n, n, {(i, j): field.from_coeffs([int(t == l) for t in range(k)])})
            basis_mats.append(E)
    images = [(E * X - X * E) for E in basis_mats]
    F = GF(p)
    for r in range(n):
        for c in range(n):
            for l in range(k):
                rows.append([F(int(M.comps[l][r, c])) for M in images])
    vectors = nullspace(rows, F.zero, F.one)
    gens = []
    for v in vectors:
        g = Matrix.zeros(field, n)
        for coeff, E in zip(v, basis_mats):
            if coeff:
                g = g + E.scale(field(int(coeff)))
        gens.append(g)
    for combo in itertools.product(range(p), repeat=len(gens)):
        g = Matrix.zeros(field, n)
        for c, h in zip(combo, gens):
            if c:
                g = g + h.scale(field(c))
        yield g


def centralizer_decomposition_check(phi: GExpMap, x: AlgebraElement | None = None) -> Report:
    """Product of Witt subgroups over the refined generators versus C_G(x)^0."""
    from .witt import witt_embed

    alg, field = phi.algebra, phi.field
    if alg.rs.type_label != "A":
        raise ValueError("centralizer decomposition is checked for SL_n only")
    x = embed(x if x is not None else phi.regular, field)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        gens, span_dim = _refined_generators(x)
    lengths = [nilpotent_order(y) for y, _ in gens]
    report = Report("centralizer")
    report.details["generators"] = [y.to_json() for y, _ in gens]
    report.details["weights"] = [w for _, w in gens]
    report.details["lengths"] = lengths
    if span_dim != alg.rank:
        report.fail({"reason": "generators and p-powers do not span the centraliser"})
    X = rep_matrix(x)
    factors = []
    for (y, _), m in zip(gens, lengths):
        factors.append([witt_embed(phi, y, a) for a in _witt_points(field, m)])
    image = set()
    for combo in itertools.product(*factors):
        g = Matrix.identity(field, alg.rep_dim)
        for h in combo:
            g = g * h
        report.cases += 1
        if g * X != X * g or not is_group_member(alg, g):
            report.fail({"reason": "image point outside the centraliser"})
        image.add(_key(g))
    oracle = {
        _key(g)
        for g in _commutant_points(X)
        if matrix_determinant(g) == field.one and is_unipotent(g)
    }
    report.details.update(
        product_size=report.cases,
        image_size=len(image),
        centralizer_size=len(oracle),
        expected_size=field.order ** alg.rank,
    )
    if len(image) != report.cases:
        report.fail({"reason": "product map is not injective"})
    if image != oracle:
        report.fail({"reason": "image differs from the connected centraliser"})
    return report


# ---------------------------------------------------------------------------
# Borel elements and equivariance


def random_borel(alg: ChevalleyAlgebra, field, rng: random.Random, length: int = 4):
    """(b, b^{-1}) as a product of torus points and positive root elements."""
    from .splitting import root_group_element, torus_element

    n = alg.rep_dim
    b = Matrix.identity(field, n)
    b_inv = Matrix.identity(field, n)
    for a in alg.rs.simple_roots:
        c = field.random_nonzero(rng)
        b = b * torus_element(alg, a, c, field)
        b_inv = torus_element(alg, a, field.one / c, field) * b_inv
    for _ in range(length):
        a = rng.choice(alg.rs.positive_roots)
        t = field.random(rng)
        b = b * root_group_element(alg, a, t, field)
        b_inv = root_group_element(alg, a, -t, field) * b_inv
    return b, b_inv


def random_u_element(alg: ChevalleyAlgebra, ring, rng: random.Random) -> AlgebraElement:
    coords = [ring.zero] * alg.dim
    for i in alg.positive_indices():
        coords[i] = ring.random(rng) if hasattr(ring, "random") else ring(rng.randint(-3, 3))
    return AlgebraElement(alg, coords, ring)


def equivariance_suite(phi, alg: ChevalleyAlgebra, field, samples: int = 20, seed: int = 0) -> Report:
    """φ(Ad(b) x) = b φ(x) b^{-1} for random Borel elements b and x in u."""
    rng = random.Random(seed)
    report = Report("equivariance")
    for s in range(samples):
        b, b_inv = random_borel(alg, field, rng)
        if not (b * b_inv).is_identity():
            raise AssertionError("inverse bookkeeping failed")
        x = random_u_element(alg, field, rng)
        y = adjoint_action(b, x, b_inv)
        report.cases += 1
        if phi(y) != b * phi(x) * b_inv:
            report.fail({"sample": s, "x": x.to_json()})
    return report
