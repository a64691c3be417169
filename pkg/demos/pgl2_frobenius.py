"""PGL2 inside GL3 in characteristic 2, and why its exponential is not polynomial.

Run: python3 demos/pgl2_frobenius.py
"""

import itertools
import json

from chevexp import GF
from chevexp import pgl2char2 as pg

F4 = GF(2, 2)
points = list(pg.pgl2_points(F4))
unipotent = [P for P in points if pg.unipotent_membership(P)]
print(f"Over F_4 the three defining equations have {len(points)} solutions; {len(unipotent)} are unipotent.")

w = F4.gen()
print("\nphibar at (x, y) = (w, 1):")
print(pg.phibar(w, F4.one))
print("back to the nilpotent coordinates:", pg.phibar_inv(pg.phibar(w, F4.one)))

print("\nThe (2,1) entry x(sqrt(xy) + 1) interpolated over F_2, F_4, F_8, F_16 has degrees")
witness = pg.frobenius_descent_witness()
print(json.dumps(witness.coordinate_degrees), "so no single polynomial serves every field;")
print("squaring every entry removes the square roots:", witness.frobenius_polynomial_agrees)
print("\nsqrt(xy) + 1 as interpolated polynomials:", json.dumps(witness.sqrt_interpolants))
