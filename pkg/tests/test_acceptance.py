"""Acceptance suite: one PASS/FAIL line per criterion.

Each criterion is a function ``(workers) -> (ok, transcript)``.  The
transcript is a list of deterministic text lines describing every value that
was checked, so the determinism criterion can compare runs byte for byte.
Runtime limits apply to the single-threaded run.

Run with ``pytest -s tests/test_acceptance.py`` to see the summary lines.
"""

from __future__ import annotations

import math
import random
import time
from pathlib import Path

import pytest

from qcrit.crit import (
    StructureSpec,
    count_structures,
    count_tuples_brute,
    count_tuples_formula,
    crit,
    crit_oracle,
    crit_via_hyperplanes,
    is_witness,
    tuple_support_distribution,
    word_supports,
)
from qcrit.fixtures import (
    BUILTIN_CODES,
    EX3_7_HYPERPLANE,
    EX4_3_WITNESS,
    EX5_9_WITNESS,
    TABLE_EXPECTED,
    ex3_7,
    ex4_3,
    ex5_8,
    ex5_9,
    random_matrix_code,
    random_polymatroid,
    random_vector_code,
    random_weighting,
)
from qcrit.lattice import BooleanLattice, SubspaceLattice
from qcrit.qpm import check_axioms, check_representation, from_code
from qcrit.rcode import dual, gabidulin, load_code, simplex, supp_word, weight_distribution
from qcrit.wlat import IntPoly, char_poly, check_identities, load_wlat

FIX = Path(__file__).resolve().parent.parent / "fixtures"
THREADS = 4


class Transcript:
    def __init__(self):
        self.lines: list[str] = []
        self.ok = True

    def check(self, name: str, expected, computed) -> None:
        good = expected == computed
        self.ok &= good
        self.lines.append(f"{'ok ' if good else 'BAD'} {name}: expected {expected}, computed {computed}")

    def fact(self, name: str, good: bool, detail: str = "") -> None:
        self.ok &= bool(good)
        self.lines.append(f"{'ok ' if good else 'BAD'} {name}" + (f": {detail}" if detail else ""))


# criteria ------------------------------------------------------------------------------------------


def worked_5x3_code(workers):
    T = Transcript()
    C = ex4_3()
    M = from_code(C)
    P = char_poly(M, workers)
    T.check("characteristic polynomial", "z^6 - 4*z^4 - 25*z^3 + 44*z^2 + 40*z - 56", str(P))
    for z, v in ((1, 0), (2, 0), (4, 2280)):
        T.check(f"P({z})", v, P(z))
    T.check("crit by polynomial", 2, crit(M, workers=workers).value)
    T.check("crit by subcode search", 2, crit_oracle(C).value)
    T.fact("listed pair lies in the code with full support", is_witness(C, EX4_3_WITNESS))
    X1, X2 = (supp_word(X, 2) for X in EX4_3_WITNESS)
    T.check("support dimensions", (3, 3), (X1.dim, X2.dim))
    T.check("dimension of the support sum", 5, (X1 + X2).dim)
    return T


def appendix_table(workers):
    T = Transcript()
    crits, ceils = [], []
    for i, (label, _, _, (n, m, k, _)) in enumerate(TABLE_EXPECTED, 1):
        C = load_code(FIX / f"table1_row{i}.rmc")
        T.fact(f"row {i} file matches built-in", C.same_code(BUILTIN_CODES[f"table1_row{i}"]()))
        T.check(f"row {i} {label} parameters", (n, m, k), (C.n, C.m, C.k))
        crits.append(crit(from_code(C), workers=workers).value)
        ceils.append(-(-C.n // C.m))
    T.check("crit per row", [3, 2, 2, 2, 3], crits)
    T.check("ceil(n/m) per row", [2, 1, 1, 2, 2], ceils)
    return T


def polymatroid_on_plane_lattice(workers):
    T = Transcript()
    M = ex3_7()
    W, r = load_wlat(FIX / "ex3_7.wlat")
    L = M.lattice
    T.fact("file agrees with built-in", r == 3 and all(W.f(x) == M.f(x) for x in L.elements()))
    H = L.span(EX3_7_HYPERPLANE)
    P = char_poly(M, workers)
    PH = char_poly(M.restriction(H), workers)
    T.check("P(M)", "z^5 - 2*z^3 - 5*z^2 + 6*z", str(P))
    T.check(f"P(M|{H.short()})", "z^5 - z^3 - 2*z^2 + 2", str(PH))
    expected = {"001": "z^2 - 2*z + 1", "011": "z^2 - z", "101": "z^2 - z", "111": "z^3 - 2*z + 1"}
    off = sorted((y for y in M.atoms() if not L.leq(y, H)), key=L.short)
    T.check("atoms outside H", sorted(f"<{v}>" for v in expected), [L.short(y) for y in off])
    gap = M.f(L.top()) - M.f(H)
    acc = IntPoly.monomial(gap) * PH
    T.lines.append(f"    term z^{gap} P(M|H) = {acc}")
    for y in off:
        Py = char_poly(M.contraction(y), workers)
        T.check(f"P(M/{L.short(y)})", expected[L.short(y)[1:-1]], str(Py))
        acc = acc - Py
        T.lines.append(f"    after subtracting P(M/{L.short(y)}): {acc}")
    T.check("restriction minus contractions", str(P), str(acc))
    return T


def worked_3x3_code(workers):
    T = Transcript()
    C = ex5_8()
    M = from_code(C)
    W = weight_distribution(C)
    T.check("rank distribution", [1, 0, 15, 0], W)
    T.check("crit", 2, crit(M, workers=workers).value)
    A = [a(2) for a in M.weight_enumerator()]
    T.check("enumerator polynomials at q", W, A)
    return T


def worked_4x2_code(workers):
    T = Transcript()
    C = ex5_9()
    res = crit_oracle(C)
    T.check("crit by subcode search", 2, res.value)
    T.check("crit by polynomial", 2, crit(from_code(C), workers=workers).value)
    T.fact("listed pair accepted as certificate", is_witness(C, EX5_9_WITNESS))
    T.fact("found pair is a certificate", is_witness(C, res.witnesses))
    return T


IDENTITY_NAMES = ("direct=recursive", "chardecomp", "chardec", "P(1)=0", "nonflat-contraction-zero")


def _identity_run(T: Transcript, label: str, W) -> None:
    rep = check_identities(W)
    fails = rep.failures()
    counts = {name: sum(c.name == name and c.status == "pass" for c in rep.checks) for name in IDENTITY_NAMES}
    T.fact(label, not fails, " ".join(f"{k}={v}" for k, v in counts.items()) + f" fail={len(fails)}")


def identity_suite(workers):
    T = Transcript()
    rng = random.Random(6)
    for i in range(20):
        n = 1 + i % 4
        _identity_run(T, f"polymatroid on L(F_2^{n}) #{i}", random_polymatroid(rng, SubspaceLattice(2, n)))
    for i in range(20):
        n = 1 + i % 5
        _identity_run(T, f"polymatroid on Boolean lattice n={n} #{i}", random_polymatroid(rng, BooleanLattice(n)))
    for i in range(20):
        n = 1 + i % 4
        _identity_run(T, f"monotone weighting on L(F_2^{n}) #{i}", random_weighting(rng, SubspaceLattice(2, n)))
    for i in range(20):
        n = 1 + i % 5
        _identity_run(T, f"monotone weighting on Boolean lattice n={n} #{i}", random_weighting(rng, BooleanLattice(n)))
    return T


def _contained_count(dist: dict, L, V) -> int:
    return sum(c for S, (c, _) in dist.items() if L.leq(S, V))


def representability_suite(workers):
    T = Transcript()
    rng = random.Random(7)
    for i in range(10):
        n, m, k = rng.randint(2, 5), rng.randint(1, 3), rng.randint(1, 6)
        C = random_matrix_code(rng, 2, n, m, k)
        M = from_code(C)
        L = M.lattice
        tag = f"code {i} [{n}x{m},{C.k}]"
        ax = check_axioms(M, "exhaustive")
        T.fact(f"{tag} R1-R3", ax.ok, "; ".join(c.render() for c in ax.checks))
        rep = check_representation(C)
        T.fact(f"{tag} duality and exact supports", rep.ok, "; ".join(c.render() for c in rep.checks))
        D = dual(C)
        ws_c, ws_d = word_supports(C), word_supports(D)
        bad = [
            U.short()
            for U in L.elements()
            if _contained_count(ws_c, L, U.perp()) * 2 ** (m * U.dim)
            != 2**C.k * _contained_count(ws_d, L, U)
        ]
        T.fact(f"{tag} shortened sizes by enumeration", not bad, f"{len(L.elements())} subspaces, bad={bad[:3]}")
        for t in (1, 2):
            dist = tuple_support_distribution(C, t)
            bad = [U.short() for U in L.elements() if count_tuples_formula(M, t, U) != dist.get(U, 0)]
            T.fact(f"{tag} tuple counts t={t}", not bad, f"bad={bad[:3]}")
    return T


def vector_code_suite(workers):
    T = Transcript()
    for m, n, k in ((2, 2, 1), (2, 2, 2), (3, 3, 1), (3, 3, 2), (3, 2, 2), (4, 4, 2), (4, 3, 3)):
        C = gabidulin(2, m, n, k)
        T.check(f"Gabidulin q=2 m={m} [{n},{k}] crit", 1, crit(from_code(C), workers=workers).value)
        T.check(f"Gabidulin q=2 m={m} [{n},{k}] hyperplanes", 1, crit_via_hyperplanes(C).value)
    rng = random.Random(8)
    for i in range(12):
        m = 2 if i % 2 == 0 else 3
        n = rng.randint(m + 1, min(3 * m, 6))
        k = rng.randint(math.ceil(n / m), n)
        C = random_vector_code(rng, 2, m, n, k)
        T.check(f"random non-degenerate q=2 m={m} [{n},{k}] crit", math.ceil(n / m), crit(from_code(C), workers=workers).value)
    S = simplex(2, 2, 2)
    T.check("simplex q=2 m=2 k=2 crit", 2, crit(from_code(S), workers=workers).value)
    T.check("simplex q=2 m=2 k=2 hyperplanes", 2, crit_via_hyperplanes(S).value)
    return T


def structure_suite(workers):
    T = Transcript()
    C = ex5_8()
    M = from_code(C)
    L = M.lattice
    for t in (1, 2):
        spec = StructureSpec("words", [C], t=t)
        bad = []
        for U in L.elements():
            formula, brute = count_structures(spec, U)
            tuples = count_tuples_formula(M, t, U.perp())
            if not formula == brute == tuples == count_tuples_brute(C, t, U.perp()):
                bad.append(U.short())
        T.fact(f"word structures t={t} equal tuple counts", not bad, f"{len(L.elements())} subspaces, bad={bad[:3]}")
    for d in (1, 2):
        spec = StructureSpec("subcodes", [C], dims=[d])
        pairs = [count_structures(spec, U) for U in L.elements()]
        bad = [U.short() for U, (f, b) in zip(L.elements(), pairs) if f != b]
        T.fact(f"subcode structures d={d} formula = enumeration", not bad, f"total={sum(f for f, _ in pairs)} bad={bad[:3]}")
    return T


CRITERIA = {
    1: ("5x3 worked code", worked_5x3_code, 1.0),
    2: ("appendix table", appendix_table, 30.0),
    3: ("explicit polymatroid on L(F_2^3)", polymatroid_on_plane_lattice, 1.0),
    4: ("3x3 worked code", worked_3x3_code, 5.0),
    5: ("4x2 worked code", worked_4x2_code, 5.0),
    6: ("identity suite", identity_suite, 60.0),
    7: ("representability suite", representability_suite, 300.0),
    8: ("vector-code suite", vector_code_suite, 120.0),
    9: ("structure counting", structure_suite, 60.0),
}

_single_thread: dict[int, list[str]] = {}


def _run(num: int, workers: int):
    _, fn, _ = CRITERIA[num]
    start = time.perf_counter()
    T = fn(workers)
    return T, time.perf_counter() - start


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    title, _, limit = CRITERIA[num]
    T, elapsed = _run(num, 1)
    _single_thread[num] = T.lines
    fast = elapsed < limit
    status = "PASS" if T.ok and fast else "FAIL"
    with capsys.disabled():
        print(f"\n{status} criterion {num} ({title}): {len(T.lines)} checks, {elapsed:.2f} s (limit {limit:g} s)")
        for line in T.lines:
            if line.startswith("BAD"):
                print("    " + line)
    assert T.ok, "\n".join(T.lines)
    assert fast, f"took {elapsed:.2f} s, limit {limit} s"


def test_criterion_10_determinism(capsys):
    mismatched = []
    for num in sorted(CRITERIA):
        base = _single_thread.get(num) or _run(num, 1)[0].lines
        again = _run(num, THREADS)[0].lines
        if "\n".join(base).encode() != "\n".join(again).encode():
            mismatched.append(num)
    status = "PASS" if not mismatched else "FAIL"
    with capsys.disabled():
        print(f"\n{status} criterion 10 (determinism): criteria 1-9 at 1 and {THREADS} threads, mismatched={mismatched}")
    assert not mismatched
