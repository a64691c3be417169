"""SL4 in characteristic 2: one regular nilpotent, its exponential, and its Witt line.

Run: python3 demos/sl4_in_char2.py
"""

from chevexp import GF, algebra
from chevexp.chevalley import p_power, rep_matrix
from chevexp.springer import centralizer_decomposition_check, gexp_family, regular_nilpotent
from chevexp.witt import WittVector, verify_witt_embedding, witt_embed

sl4 = algebra("A3")
F2 = GF(2)
x = regular_nilpotent(sl4, F2)
X = rep_matrix(x)
print("X, the sum of simple root vectors in the natural representation:")
print(X)

phi = gexp_family(sl4, F2)
print(f"\nx^[2] is nonzero, x^[4] vanishes, so Witt vectors have length m = {phi.m}.")
print("phi(x) =")
print(phi(x))
print("which is I + X + X^2:", phi(x) == X**0 + X + X * X)

print("\nThe Witt line through x:")
for a in ([1, 0], [0, 1], [1, 1]):
    w = WittVector(F2, a)
    print(f"  f{tuple(a)} =", witt_embed(phi, x, w).rows())
one = WittVector(F2, [1, 0])
print("(1,0) + (1,0) =", one + one, "and f(1,0)^2 = f(0,1):", witt_embed(phi, x, one) ** 2 == witt_embed(phi, x, one + one))
print("embedding report:", verify_witt_embedding(phi, x, F2).to_json())

psi = gexp_family(sl4, F2, [1, 1])
print("\nAnother member of the family, parameters (1, 1): psi(x) = I + X + X^3:", psi(x) == X**0 + X + X**3)
print("psi(x^[2]) = psi(x)^2:", psi(p_power(x)) == psi(x) ** 2)

F4 = GF(2, 2)
loose = gexp_family(sl4, F4, [F4.gen(), 0], strict=False)
print("\nWith a leading parameter outside F_2 the p-power relation breaks:", not loose.relation_holds)

rep = centralizer_decomposition_check(gexp_family(sl4, F4))
d = rep.details
print(f"\nOver F_4 the Witt subgroups of the refined generators fill the unipotent centralizer:"
      f" {d['product_size']} products, {d['centralizer_size']} centralizer points, ok={rep.ok}")
