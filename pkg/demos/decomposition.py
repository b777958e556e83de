"""Deletion-contraction on an explicit polymatroid of L(F_2^3).

Pick a hyperplane H.  The polynomial of the whole lattice equals a shifted
copy of the polynomial below H minus the contractions by the atoms that
are not below H.
"""

from qcrit.fixtures import EX3_7_HYPERPLANE, ex3_7
from qcrit.wlat import IntPoly, char_poly, flats

M = ex3_7()
L = M.lattice
H = L.span(EX3_7_HYPERPLANE)
P = char_poly(M)
PH = char_poly(M.restriction(H))
gap = M.f(L.top()) - M.f(H)
print(f"P(M)     = {P}")
print(f"P(M|{H.short()}) = {PH}")

acc = IntPoly.monomial(gap) * PH
print(f"z^{gap} P(M|H) = {acc}")
for y in M.atoms():
    if L.leq(y, H):
        continue
    Py = char_poly(M.contraction(y))
    acc = acc - Py
    print(f"  minus P(M/{y.short()}) = {Py}")
print("result matches P(M):", acc == P)

print("non-flats and their (zero) contraction polynomials:")
fl = set(flats(M))
for x in M.elements():
    if x not in fl:
        print(f"  {x.short()}: {char_poly(M.contraction(x))}")
