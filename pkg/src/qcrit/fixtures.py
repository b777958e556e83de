"""Built-in codes and weighted lattices, plus random generators for tests."""

from __future__ import annotations

import random

from qcrit.errors import InvalidParams
from qcrit.gf import GF, ext_field, matmul, rank
from qcrit.lattice import Lattice, SubspaceLattice
from qcrit.qpm import QPolymatroid
from qcrit.rcode import MatrixCode, VectorCode, dual, gabidulin, is_nondegenerate, simplex
from qcrit.wlat import WeightedLattice, from_table

Z3 = [0, 0, 0]
Z4 = [0, 0, 0, 0]
Z5 = [0, 0, 0, 0, 0]

EX4_3 = [
    [[1, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 0, 0], [0, 0, 1], [0, 0, 1], [0, 0, 0]],
    [[0, 1, 0], [0, 1, 1], [0, 0, 0], [0, 0, 1], [1, 0, 1]],
    [[0, 1, 1], [1, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 0]],
    [[0, 1, 1], [1, 1, 1], [1, 1, 1], [0, 1, 0], [1, 0, 0]],
]
# the two words whose supports sum to F_2^5
EX4_3_WITNESS = [EX4_3[3], EX4_3[5]]

EX5_8 = [
    [[1, 0, 0], [0, 1, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 1, 0], [0, 0, 1]],
    [[0, 1, 1], [0, 0, 1], [0, 0, 0]],
    [[0, 0, 0], [1, 0, 0], [1, 1, 0]],
]

EX5_9 = [
    [[1, 0], [0, 0], [0, 1], [0, 1]],
    [[0, 1], [1, 0], [1, 0], [0, 1]],
    [[1, 0], [1, 0], [1, 1], [0, 1]],
]
EX5_9_WITNESS = [EX5_9[0], EX5_9[1]]

TABLE_ROW1 = [
    [[1, 0, 0], [0, 1, 0], Z3, Z3, Z3, Z3],
    [[0, 0, 0], [0, 1, 0], [0, 0, 1], Z3, Z3, Z3],
    [[0, 1, 1], [0, 0, 1], Z3, Z3, Z3, Z3],
    [[0, 0, 0], [1, 0, 0], [1, 1, 0], Z3, Z3, Z3],
    [Z3, Z3, Z3, [1, 0, 0], [0, 1, 0], [0, 0, 1]],
]

TABLE_ROW2 = [
    [[0, 1, 1, 0, 1], [0, 1, 0, 1, 1], [0, 1, 0, 0, 0], [0, 0, 1, 1, 0], Z5],
    [Z5, Z5, [0, 0, 0, 0, 1], [0, 0, 0, 1, 0], [0, 0, 1, 0, 0]],
    [Z5, [0, 0, 0, 0, 1], [0, 1, 0, 0, 0], [0, 1, 0, 0, 1], [0, 0, 1, 1, 1]],
    [[0, 0, 0, 1, 1], [0, 0, 1, 0, 0], [0, 1, 0, 1, 0], [0, 1, 0, 0, 1], [0, 0, 1, 0, 0]],
    [Z5, [0, 1, 1, 1, 0], Z5, [0, 1, 0, 0, 1], [0, 1, 0, 1, 0]],
    [[0, 0, 1, 0, 1], [0, 0, 1, 0, 0], [0, 0, 0, 1, 1], [0, 0, 1, 1, 0], [0, 0, 1, 1, 0]],
]

TABLE_ROW3 = [
    [[0, 0, 0, 1], [0, 1, 1, 1], [1, 1, 1, 1], [0, 1, 1, 0]],
    [[1, 1, 0, 0], [1, 0, 0, 1], [0, 0, 1, 0], [0, 0, 1, 0]],
    [[0, 1, 1, 0], [1, 1, 1, 1], [0, 1, 1, 0], [1, 0, 0, 0]],
    [[1, 0, 0, 0], [1, 0, 0, 1], [1, 1, 1, 0], [0, 1, 1, 1]],
    [[0, 1, 0, 1], [1, 0, 0, 1], [0, 1, 1, 1], [1, 1, 0, 0]],
]

# row 4 is the dual of these five 5x4 words
TABLE_ROW4_DUAL_OF = [[Z4] + X for X in TABLE_ROW3]

TABLE_ROW5 = [
    [[1, 0, 0], Z3, [0, 1, 1], Z3, Z3, Z3],
    [Z3, [1, 0, 0], [1, 0, 1], Z3, Z3, Z3],
    [Z3, [0, 0, 1], [1, 1, 1], Z3, Z3, Z3],
    [Z3, Z3, Z3, [1, 0, 0], [0, 1, 0], [0, 0, 1]],
]


def ex4_3() -> MatrixCode:
    return MatrixCode(2, 5, 3, EX4_3)


def ex5_8() -> MatrixCode:
    return MatrixCode(2, 3, 3, EX5_8)


def ex5_9() -> MatrixCode:
    return MatrixCode(2, 4, 2, EX5_9)


def table_row(i: int) -> MatrixCode:
    """Code of row i (1-based) of the appendix comparison table."""
    if i == 1:
        return MatrixCode(2, 6, 3, TABLE_ROW1)
    if i == 2:
        return MatrixCode(2, 5, 5, TABLE_ROW2)
    if i == 3:
        return MatrixCode(2, 4, 4, TABLE_ROW3)
    if i == 4:
        return dual(MatrixCode(2, 5, 4, TABLE_ROW4_DUAL_OF))
    if i == 5:
        return MatrixCode(2, 6, 3, TABLE_ROW5)
    raise KeyError(f"no table row {i}")


# (label, expected crit, expected ceil(n/m), expected (n, m, k, d))
TABLE_EXPECTED = [
    ("[6x3,5,2]_2", 3, 2, (6, 3, 5, 2)),
    ("[5x5,6,3]_2", 2, 1, (5, 5, 6, 3)),
    ("[4x4,5,3]_2", 2, 1, (4, 4, 5, 3)),
    ("[5x4,15,1]_2", 2, 2, (5, 4, 15, 1)),
    ("[6x3,4,2]_2", 3, 2, (6, 3, 4, 2)),
]

# weights of the (2,3)-polymatroid on L(F_2^3) by spanning rows
_EX3_7_ATOMS = {"100": 3, "010": 3, "011": 3, "101": 3, "001": 3, "110": 2, "111": 2}
_EX3_7_PLANES = [
    (("100", "010"), 5),
    (("100", "011"), 5),
    (("100", "001"), 5),
    (("101", "011"), 5),
    (("010", "001"), 4),
    (("101", "010"), 4),
    (("110", "001"), 4),
]


def _vec(s: str) -> list[int]:
    return [int(c) for c in s]


def ex3_7() -> QPolymatroid:
    """The explicit (2,3)-polymatroid on L(F_2^3) with rank 5 at the top."""
    L = SubspaceLattice(2, 3)
    table = {L.key(L.bottom()): 0, L.key(L.top()): 5}
    for row, w in _EX3_7_ATOMS.items():
        table[L.key(L.span([_vec(row)]))] = w
    for rows, w in _EX3_7_PLANES:
        table[L.key(L.span([_vec(r) for r in rows]))] = w
    W = from_table(L, table)
    return QPolymatroid(L, W._store, 3)


EX3_7_HYPERPLANE = [[1, 0, 0], [0, 1, 0]]

BUILTIN_CODES = {
    "ex4_3": ex4_3,
    "ex5_8": ex5_8,
    "ex5_9": ex5_9,
    "table1_row1": lambda: table_row(1),
    "table1_row2": lambda: table_row(2),
    "table1_row3": lambda: table_row(3),
    "table1_row4": lambda: table_row(4),
    "table1_row5": lambda: table_row(5),
    "gabidulin_2_3_3_2": lambda: gabidulin(2, 3, 3, 2),
    "simplex_2_2_2": lambda: simplex(2, 2, 2),
}

BUILTIN_WLATS = {"ex3_7": ex3_7}


def random_matrix_code(rng: random.Random, q: int, n: int, m: int, k: int) -> MatrixCode:
    """Code spanned by k random n x m matrices; the dimension may drop below k."""
    gens = [[[rng.randrange(q) for _ in range(m)] for _ in range(n)] for _ in range(k)]
    return MatrixCode(q, n, m, gens, quiet=True)


def random_vector_code(
    rng: random.Random, q: int, m: int, n: int, k: int, nondegenerate: bool = True, tries: int = 200
) -> VectorCode:
    """Random F_{q^m}-[n, k] code, redrawn until it has full dimension (and full support if asked)."""
    if k > n:
        raise InvalidParams(f"dimension {k} exceeds length {n}")
    if nondegenerate and n > k * m:
        raise InvalidParams(f"an [{n}, {k}] code over F_{q}^{m} cannot have full support")
    E = ext_field(q, m)
    for _ in range(tries):
        G = [[rng.randrange(E.order) for _ in range(n)] for _ in range(k)]
        C = VectorCode(E, n, G, quiet=True)
        if C.k == k and (not nondegenerate or is_nondegenerate(C)):
            return C
    raise RuntimeError(f"no suitable random code found for q={q} m={m} n={n} k={k}")


def random_weighting(rng: random.Random, L, max_step: int = 2) -> WeightedLattice:
    """Random monotone weighting with f(bottom) = 0.

    Each element gets the largest weight among its lower covers plus a
    random step in [0, max_step].
    """
    table: dict[bytes, int] = {}
    for x in L.elements():
        below = L.coatoms(L.bottom(), x)
        base = max((table[L.key(y)] for y in below), default=0)
        table[L.key(x)] = 0 if not below else base + rng.randint(0, max_step)
    return from_table(L, table)


def _basis_rows(L: Lattice, x) -> list[list[int]]:
    if L.q == 1:
        return [[int(i == j) for j in range(L.n)] for i in range(L.n) if x >> i & 1]
    return [list(r) for r in x.basis]


def random_polymatroid(rng: random.Random, L: Lattice, terms: int = 3) -> WeightedLattice:
    """Random monotone submodular weighting.

    A truncated positive combination of image ranks dim(X A) for random
    matrices A and indicators [X not below K] for random elements K.  Each
    term is monotone and submodular, and so is the truncated sum.
    """
    F = GF(2 if L.q == 1 else L.q)
    n = L.n
    parts = []
    for _ in range(terms):
        w = rng.randint(1, 2)
        if rng.random() < 0.5:
            c = rng.randint(1, n)
            parts.append((w, [[rng.randrange(F.order) for _ in range(c)] for _ in range(n)], None))
        else:
            parts.append((w, None, rng.choice(L.elements(height=rng.randint(0, n - 1)))))
    cap = rng.randint(1, 2 * n * terms)
    table: dict[bytes, int] = {}
    for x in L.elements():
        rows = _basis_rows(L, x)
        total = 0
        for w, A, K in parts:
            if A is not None:
                total += w * (rank(F, matmul(F, rows, A, len(A[0])), len(A[0])) if rows else 0)
            else:
                total += w * (not L.leq(x, K))
        table[L.key(x)] = min(total, cap)
    return from_table(L, table)
