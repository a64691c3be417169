"""Two independent constructions of the same unipotent element for F4 at p = 7.

One route exponentiates a corrected logarithm over the rationals. The other
multiplies two truncated Artin-Hasse exponentials and projects back to the
group. Both are reduced mod p and compared entrywise.

Run: python3 demos/two_routes_to_a_unipotent.py
"""

import random

from chevexp import GF, algebra
from chevexp.artinhasse import ah_coefficients, gexp_tilde, psi_path
from chevexp.springer import is_group_member, is_unipotent, random_u_element

series = ah_coefficients(7, 40)
print("Artin-Hasse coefficients for p=7, j <= 12:", [str(c) for c in series.coefficients[:13]])
print("integral through degree 40:", bool(series.certificate()))

f4 = algebra("F4")
F7 = GF(7)
x = random_u_element(f4, F7, random.Random(4))
a, b = gexp_tilde(x), psi_path(x)
print(f"\nF4 over F_7, a random element of the nilradical with {len(x.support())} nonzero coordinates")
print("routes agree:", a.modp_result == b.modp_result)
print("unipotent:", is_unipotent(a.modp_result), " in the group:", is_group_member(f4, a.modp_result))
