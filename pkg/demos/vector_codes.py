"""Critical exponents of F_{q^m}-linear codes.

Random non-degenerate codes of length n > m reach the lower bound
ceil(n/m); Gabidulin codes of length n <= m have a single word of full
rank; the simplex code needs one word per block.  The hyperplane search
confirms the value by covering the q-system with as few hyperplanes as
possible.
"""

import math
import random

from qcrit.crit import crit, crit_via_hyperplanes
from qcrit.fixtures import random_vector_code
from qcrit.qpm import from_code
from qcrit.rcode import gabidulin, simplex

G = gabidulin(2, 3, 3, 2)
print("Gabidulin [3,2] over F_8:", crit(from_code(G)).render(), "/", crit_via_hyperplanes(G).render())

S = simplex(2, 2, 2)
res = crit_via_hyperplanes(S)
print("simplex [4,2] over F_4:", crit(from_code(S)).render(), "/", res.render())
for a in res.witnesses:
    print("  hyperplane with normal", a)

rng = random.Random(1)
for m, n, k in ((2, 5, 3), (3, 5, 2), (2, 6, 4)):
    C = random_vector_code(rng, 2, m, n, k)
    print(f"random [{n},{k}] over F_{2**m}: crit {crit(from_code(C)).render()}, ceil(n/m) = {math.ceil(n / m)}")
