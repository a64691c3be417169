"""Iterating the characteristic-zero p-power map on the nilradical of E6 and G2.

The map sends X to the projection of X^p back into the Lie algebra. Every
iterate stays p-integral and the iteration dies once p^i reaches the Coxeter
number.

Run: python3 demos/power_map_exceptional.py
"""

import random

from chevexp import GF, QQ, algebra
from chevexp.artinhasse import reduce_element
from chevexp.chevalley import p_power
from chevexp.ppower import m_power, theorem_a_scan
from chevexp.rootdata import coxeter_number
from chevexp.springer import random_u_element, regular_nilpotent

rng = random.Random(1)
for name, p in (("G2", 5), ("G2", 7), ("E6", 5), ("E6", 7)):
    alg = algebra(name)
    h = coxeter_number(alg.rs)
    x = random_u_element(alg, QQ, rng)
    r = theorem_a_scan(alg, p, x)
    sizes = [len(y.support()) for y in r.iterations]
    print(f"{name}, p={p}, h={h}: support sizes of the iterates {sizes}, "
          f"zero after {r.vanishing_index} steps (bound {r.bound}), integral={all(r.certificates)}")

g2 = algebra("G2")
x = regular_nilpotent(g2)
F = GF(5)
print("\nReducing m^5(x) mod 5 gives the restricted 5-power of x mod 5:",
      reduce_element(m_power(x, 5), F) == p_power(reduce_element(x, F)))
