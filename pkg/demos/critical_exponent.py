"""Critical exponent of a small binary matrix code, computed three ways.

The polynomial route evaluates the characteristic polynomial at q, q^2, ...
and stops at the first positive value.  The search route looks for the
fewest codewords whose column spaces add up to the whole ambient space.
"""

from qcrit.crit import count_tuples_formula, crit, crit_oracle
from qcrit.fixtures import ex4_3
from qcrit.qpm import from_code
from qcrit.rcode import supp_word
from qcrit.wlat import char_poly

C = ex4_3()
M = from_code(C)
P = char_poly(M)
print(f"code: {C.n}x{C.m} over F_{C.q}, dimension {C.k}")
print(f"P(z) = {P}")
for t in range(1, 4):
    print(f"  P({C.q}^{t}) = {P(C.q**t)}")

print("crit from the polynomial:", crit(M).render())
res = crit_oracle(C)
print("crit from the support search:", res.render())
for X in res.witnesses:
    print("  word with support", supp_word(X, C.q).short())

# P(q^t) counts t-tuples of codewords whose supports add up to everything
top = M.lattice.top()
print("pairs with full support:", count_tuples_formula(M, 2, top))
