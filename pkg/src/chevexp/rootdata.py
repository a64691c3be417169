"""Root systems of the simple types A-G.

Roots are integer tuples of coordinates in the basis of simple roots
(Bourbaki numbering). Positive roots are ordered by height and then
lexicographically, and this order is used everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactnum import is_prime

# Hard-coded numerical data per type: exponents, bad primes, Coxeter number.
def _table_row(label: str, n: int):
    if label == "A":
        return list(range(1, n + 1)), set(), n + 1
    if label in "BC":
        return list(range(1, 2 * n, 2)), {2}, 2 * n
    if label == "D":
        return sorted(list(range(1, 2 * n - 2, 2)) + [n - 1]), {2}, 2 * n - 2
    return {
        ("E", 6): ([1, 4, 5, 7, 8, 11], {2, 3}, 12),
        ("E", 7): ([1, 5, 7, 9, 11, 13, 17], {2, 3}, 18),
        ("E", 8): ([1, 7, 11, 13, 17, 19, 23, 29], {2, 3, 5}, 30),
        ("F", 4): ([1, 5, 7, 11], {2, 3}, 12),
        ("G", 2): ([1, 5], {2, 3}, 6),
    }[(label, n)]


@dataclass(frozen=True)
class RootSystemFacts:
    exponents: tuple[int, ...]
    bad_primes: frozenset[int]
    coxeter_number: int


def table_facts(label: str, rank: int) -> RootSystemFacts:
    """The tabulated exponents, bad primes and Coxeter number."""
    exps, bad, h = _table_row(label, rank)
    return RootSystemFacts(tuple(exps), frozenset(bad), h)


def _valid(label: str, rank: int) -> bool:
    if not isinstance(rank, int) or rank < 1:
        return False
    return {
        "A": rank >= 1,
        "B": rank >= 2,
        "C": rank >= 2,
        "D": rank >= 3,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }.get(label, False)


def _dynkin(label: str, n: int):
    """Squared lengths of the simple roots and the list of bonds (i, j)."""
    lengths = [2] * n
    bonds = [(i, i + 1) for i in range(n - 1)]
    if label == "B":
        lengths = [4] * (n - 1) + [2]
    elif label == "C":
        lengths = [2] * (n - 1) + [4]
    elif label == "D":
        bonds = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif label == "E":
        bonds = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, n - 1)]
    elif label == "F":
        lengths = [4, 4, 2, 2]
    elif label == "G":
        lengths = [2, 6]
    return lengths, bonds


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A reduced irreducible root system with a fixed order on its roots.

    Attributes
    ==========
    type_label, rank
        Cartan type, e.g. ``("E", 8)``.
    inner
        Symmetric matrix of inner products of simple roots (short roots have
        squared length 2).
    cartan_matrix
        ``cartan_matrix[i][j] = 2 (a_i, a_j) / (a_i, a_i)``, the value of the
        root a_j on the simple coroot of a_i.
    positive_roots
        Ordered by (height, coordinates).
    """

    type_label: str
    rank: int
    inner: tuple
    cartan_matrix: tuple
    positive_roots: tuple
    index: dict = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def simple_roots(self):
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @property
    def roots(self):
        return self.positive_roots + tuple(neg(a) for a in self.positive_roots)

    def __repr__(self):
        return f"RootSystem({self.name})"

    def is_root(self, a) -> bool:
        return a in self.index or neg(a) in self.index

    def is_positive(self, a) -> bool:
        return a in self.index

    def order_key(self, a):
        """Position in the fixed order; negative roots come after all positive ones."""
        if a in self.index:
            return self.index[a]
        return len(self.positive_roots) + self.index[neg(a)]

    def product(self, a, b) -> int:
        n = self.rank
        return sum(a[i] * b[j] * self.inner[i][j] for i in range(n) for j in range(n))

    def norm2(self, a) -> int:
        return self.product(a, a)

    def pairing(self, a, b) -> int:
        """<a, b^vee> = 2 (a, b) / (b, b)."""
        return 2 * self.product(a, b) // self.norm2(b)

    def coroot_coordinates(self, a):
        """The coroot of a in the basis of simple coroots."""
        na = self.norm2(a)
        out = []
        for i in range(self.rank):
            c = Fraction(a[i] * self.inner[i][i], na)
            assert c.denominator == 1
            out.append(int(c))
        return tuple(out)

    def highest_root(self):
        return self.positive_roots[-1]

    def height(self, a) -> int:
        return sum(a)

    def max_height(self) -> int:
        return sum(self.positive_roots[-1])

    def string_down(self, a, b) -> int:
        """Largest r with b - r a a root (or zero)."""
        r = 0
        while True:
            c = tuple(y - (r + 1) * x for x, y in zip(a, b))
            if not self.is_root(c):
                return r
            r += 1


def neg(a):
    return tuple(-x for x in a)


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def is_positive_tuple(a) -> bool:
    return sum(a) > 0


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Construct the root system of the given Cartan type.

    Examples
    ========
    >>> len(build_root_system("E", 8).positive_roots)
    120
    >>> [sum(a) for a in build_root_system("A", 2).positive_roots]
    [1, 1, 2]
    """
    type_label = type_label.upper()
    if not _valid(type_label, rank):
        raise ValueError(f"invalid Cartan type {type_label}{rank}")
    n = rank
    lengths, bonds = _dynkin(type_label, n)
    inner = [[0] * n for _ in range(n)]
    for i in range(n):
        inner[i][i] = lengths[i]
    for i, j in bonds:
        # (a_i, a_j) = -max(|a_i|^2, |a_j|^2) / 2 for adjacent nodes
        v = -max(lengths[i], lengths[j]) // 2
        inner[i][j] = inner[j][i] = v
    cartan = [[2 * inner[i][j] // inner[i][i] for j in range(n)] for i in range(n)]

    # grow positive roots by height using root strings through simple roots
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for b in layer:
            for i in range(n):
                # q = how far b - a_i, b - 2 a_i, ... stay roots
                q = 0
                while True:
                    c = list(b)
                    c[i] -= q + 1
                    c = tuple(c)
                    if c in found:
                        q += 1
                    else:
                        break
                pair = sum(b[j] * cartan[i][j] for j in range(n))  # <b, a_i^vee>
                if q - pair > 0:
                    c = list(b)
                    c[i] += 1
                    c = tuple(c)
                    if c not in found:
                        found.add(c)
                        nxt.append(c)
        layer = nxt
    positive = tuple(sorted(found, key=lambda a: (sum(a), a)))
    index = {a: k for k, a in enumerate(positive)}
    return RootSystem(
        type_label,
        n,
        tuple(tuple(r) for r in inner),
        tuple(tuple(r) for r in cartan),
        positive,
        index,
    )


def parse_type(spec: str, rank: int | None = None) -> RootSystem:
    """Accept "G2", "E8", or a bare letter together with a rank."""
    spec = spec.strip().upper()
    label = spec[0]
    if len(spec) > 1:
        rank = int(spec[1:])
    if rank is None:
        raise ValueError(f"missing rank for type {spec}")
    return build_root_system(label, rank)


def height_distribution(rs: RootSystem):
    counts = {}
    for a in rs.positive_roots:
        counts[sum(a)] = counts.get(sum(a), 0) + 1
    return [counts[h] for h in range(1, max(counts) + 1)]


def weyl_exponents(rs: RootSystem) -> tuple[int, ...]:
    """Exponents as the partition conjugate to the numbers of roots per height.

    >>> weyl_exponents(build_root_system("D", 4))
    (1, 3, 3, 5)
    """
    counts = height_distribution(rs) + [0]
    exps = []
    for e in range(1, len(counts)):
        exps += [e] * (counts[e - 1] - counts[e])
    return tuple(sorted(exps))


def coxeter_number(rs: RootSystem) -> int:
    h = table_facts(rs.type_label, rs.rank).coxeter_number
    if h != rs.max_height() + 1:
        raise AssertionError(f"Coxeter number mismatch for {rs.name}")
    return h


def bad_primes(rs: RootSystem) -> frozenset[int]:
    return table_facts(rs.type_label, rs.rank).bad_primes


def facts(rs: RootSystem) -> RootSystemFacts:
    """Table data, cross-checked against the recomputed exponents."""
    t = table_facts(rs.type_label, rs.rank)
    if weyl_exponents(rs) != t.exponents:
        raise AssertionError(f"exponent mismatch for {rs.name}")
    coxeter_number(rs)
    return t


def is_good_prime(rs: RootSystem, p: int) -> bool:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    return p not in bad_primes(rs)


def is_separably_good(rs: RootSystem, p: int, isogeny_tag: str | None = None) -> bool:
    """Good, and for SL_{n+1} additionally p does not divide n + 1.

    Only the groups carried by the distinguished representations are modelled
    (SL_{n+1} for type A), so ``isogeny_tag`` is informational.
    """
    if not is_good_prime(rs, p):
        return False
    if rs.type_label == "A":
        return (rs.rank + 1) % p != 0
    return True
