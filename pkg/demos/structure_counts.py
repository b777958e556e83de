"""Counting tuples and subcodes by exact support.

Each count is obtained twice: by Moebius inversion over the subspace
lattice, and by enumerating codewords.
"""

from qcrit.crit import StructureSpec, count_structures, tuple_support_distribution
from qcrit.fixtures import ex5_8
from qcrit.qpm import from_code

C = ex5_8()
L = from_code(C).lattice
dist = tuple_support_distribution(C, 2)
print("pairs of codewords by dimension of the support sum:")
for d in range(C.n + 1):
    print(f"  {d}: {sum(c for U, c in dist.items() if U.dim == d)}")

for d in (1, 2):
    spec = StructureSpec("subcodes", [C], dims=[d])
    # structures indexed by U have support exactly U^perp, so U = 0 means full support
    formula, brute = count_structures(spec, L.bottom())
    print(f"{d}-dimensional subcodes with full support: {formula} (enumerated: {brute})")
