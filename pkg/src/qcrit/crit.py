"""Critical exponents, support-counting and structure-counting.

The critical exponent of a loop-free polymatroid M is the least t with
P(M; base^t) > 0, where base is q for matrix codes and q^m for the
q-matroids of vector codes.  For a code it equals the least number of
codewords whose supports sum to the whole space; :func:`crit_oracle` and
:func:`crit_via_hyperplanes` compute it that way, independently of any
polynomial.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from qcrit.errors import (
    DegenerateCode,
    InconsistencyError,
    InvalidParams,
    ResourceLimit,
    ScalingMismatch,
)
from qcrit.gf import Subspace, kernel, matmul, rank, transpose
from qcrit.lattice import SubspaceLattice, gaussian_binomial, rref_profiles
from qcrit.qpm import QPolymatroid, from_code, from_matrix_code, scaling_equivalence
from qcrit.rcode import (
    ENUMERATION_CAP,
    Code,
    MatrixCode,
    VectorCode,
    classify,
    codewords,
    is_nondegenerate,
    q_system,
    supp_word,
    weight_distribution,
)
from qcrit.report import Report
from qcrit.wlat import char_poly

INFINITY = math.inf
TUPLE_CAP = 2**24
SUBCODE_CAP = 2**20


@dataclass
class CritResult:
    value: int | float
    method: str
    witnesses: list | None = None

    @property
    def is_infinite(self) -> bool:
        return self.value == INFINITY

    def render(self) -> str:
        return "infinity" if self.is_infinite else str(self.value)

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"crit": self.render(), "method": self.method}
        if self.witnesses is not None:
            d["witnesses"] = [_witness_json(w) for w in self.witnesses]
        return d


def _witness_json(w):
    if isinstance(w, Subspace):
        return [list(r) for r in w.basis]
    if isinstance(w, (list, tuple)) and w and isinstance(w[0], (list, tuple)):
        return [list(r) for r in w]
    return list(w)


# formula -------------------------------------------------------------------------------


def _cauchy_exponent(coeffs: Sequence[int], base: int) -> int:
    """Least t with base^t above every root of a monic polynomial with these coefficients."""
    bound = 1 + max((abs(c) for c in coeffs[:-1]), default=0)
    t = 1
    while base**t <= bound:
        t += 1
    return t


def crit(M: QPolymatroid, base: int | None = None, t_max: int | None = None, workers: int | None = None) -> CritResult:
    """Least t >= 1 with P(M; base^t) > 0, or infinity when M has a loop.

    For polymatroids built from a code the search stops at the top rank of
    the interval, which is the dimension of the code representing it; not
    finding a positive value by then means the inputs are inconsistent.
    Without a source code the search runs to a root bound of the (monic)
    polynomial.
    """
    base = M.eval_base if base is None else base
    if M.loops():
        return CritResult(INFINITY, "formula")
    P = char_poly(M, workers)
    if t_max is None:
        t_max = max(1, M.top_weight) if M.provenance is not None else _cauchy_exponent(P.coeffs, base)
    for t in range(1, t_max + 1):
        if P(base**t) > 0:
            return CritResult(t, "formula")
    raise InconsistencyError(f"P(M; {base}^t) is not positive for any t <= {t_max}")


# support search ------------------------------------------------------------------------------


def word_supports(C: Code, cap: int = ENUMERATION_CAP) -> dict[Subspace, tuple[int, Any]]:
    """Distinct supports of the codewords with their multiplicity and first word, in lattice order."""
    seen: dict[Subspace, list] = {}
    for X in codewords(C, cap):
        S = supp_word(X, C.q)
        entry = seen.get(S)
        if entry is None:
            seen[S] = [1, X]
        else:
            entry[0] += 1
    return {S: (c, X) for S, (c, X) in sorted(seen.items(), key=lambda kv: kv[0].sort_key())}


def crit_oracle(C: Code, t_max: int | None = None, cap: int = ENUMERATION_CAP) -> CritResult:
    """Least number of codewords whose supports sum to F_q^n, with the words found.

    Breadth-first search over sums of word supports; t words with full
    support sum span a subcode of dimension at most t, so the answer is the
    least dimension of a full-support subcode.
    """
    E = Subspace.full(C.field, C.n)
    sup = {S: X for S, (_, X) in word_supports(C, cap).items() if S.dim > 0}
    total = Subspace.zero(C.field, C.n)
    for S in sup:
        total = total + S
    if total != E:
        return CritResult(INFINITY if C.n else 1, "subcode-search", [])
    if E in sup:
        return CritResult(1, "subcode-search", [sup[E]])
    frontier: dict[Subspace, list] = {S: [X] for S, X in sup.items()}
    seen = set(frontier)
    t = 1
    while True:
        if t_max is not None and t >= t_max:
            raise ResourceLimit(f"no full-support subcode of dimension <= {t_max}")
        t += 1
        new: dict[Subspace, list] = {}
        for S in sorted(frontier, key=Subspace.sort_key):
            for s, X in sup.items():
                if s <= S:
                    continue
                T = S + s
                if T == E:
                    return CritResult(t, "subcode-search", frontier[S] + [X])
                if T not in seen:
                    seen.add(T)
                    new[T] = frontier[S] + [X]
        frontier = new


def in_code(C: Code, X: Sequence[Sequence[int]]) -> bool:
    M = C.to_matrix_code()
    flat = [x for row in X for x in row]
    return rank(M.field, M.flattened() + [flat], M.n * M.m) == M.k


def is_witness(C: Code, words: Sequence) -> bool:
    """Whether the given matrices are codewords whose supports sum to F_q^n."""
    if not all(in_code(C, X) for X in words):
        return False
    S = Subspace.zero(C.field, C.n)
    for X in words:
        S = S + supp_word(X, C.q)
    return S.dim == C.n


# tuple counting ---------------------------------------------------------------------------------


def _convolve(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for S, x in a.items():
        for T, y in b.items():
            out[S + T] += x * y
    return out


def tuple_support_distribution(C: Code, t: int, cap: int = TUPLE_CAP) -> Counter:
    """Number of t-tuples of codewords by the sum of their supports.

    Every word is enumerated once; tuples are aggregated by support, which
    gives the exact count of each support sum.
    """
    M = C.to_matrix_code()
    if M.q ** (M.k * t) > cap:
        raise ResourceLimit(f"{M.q}^({M.k}*{t}) tuples exceed the cap {cap}")
    single = Counter({S: c for S, (c, _) in word_supports(C, cap).items()})
    dist = Counter({Subspace.zero(C.field, C.n): 1})
    for _ in range(t):
        dist = _convolve(dist, single)
    return dist


def count_tuples_brute(C: Code, t: int, U: Subspace, cap: int = TUPLE_CAP) -> int:
    return tuple_support_distribution(C, t, cap).get(U, 0)


def count_tuples_formula(M: QPolymatroid, t: int, U: Subspace) -> int:
    """P(M / U^perp; base^t): the number of t-tuples whose supports sum to U."""
    return char_poly(M.contraction(M.lattice.perp(U)))(M.eval_base**t)


# hyperplanes -------------------------------------------------------------------------------------


def _normalized_functionals(E, k: int):
    """Nonzero vectors of F_{q^m}^k whose first nonzero entry is 1, in lexicographic order."""
    for lead in range(k):
        for tail in itertools.product(range(E.order), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + tail


def _functional_matrix(C: VectorCode, a: Sequence[int]) -> list[list[int]]:
    """The mk x m matrix over F_q of x -> a.x in the coordinates of the q-system."""
    E, m, k = C.ext, C.m, C.k
    units = [E.from_digits([1 if j == d else 0 for j in range(m)]) for d in range(m)]
    return [E.digits(E.mul(a[i], units[d])) for i in range(k) for d in range(m)]


def _hyperplane_space(C: VectorCode, a: Sequence[int]) -> Subspace:
    """The kernel of x -> a.x as an F_q-subspace of F_q^(mk)."""
    return kernel(C.ext.base, transpose(_functional_matrix(C, a)), C.m * C.k)


def _meet_kernel(F, S: Subspace, T: list[list[int]]) -> Subspace:
    """S intersected with the kernel of x -> x T, computed inside S."""
    B = S.matrix()
    img = matmul(F, B, T, len(T[0]))
    coeffs = kernel(F, transpose(img), S.dim)
    return Subspace.from_rows(F, matmul(F, coeffs.matrix(), B, S.n), S.n) if coeffs.dim else Subspace.zero(F, S.n)


def crit_via_hyperplanes(C: VectorCode, cap: int = ENUMERATION_CAP) -> CritResult:
    """Least number of F_{q^m}-hyperplanes whose common intersection with the q-system is zero."""
    if not isinstance(C, VectorCode):
        raise InvalidParams("the hyperplane formulation needs a vector code")
    U = q_system(C)
    if U.dim < C.n:
        raise DegenerateCode(f"q-system has F_q-dimension {U.dim} < n = {C.n}")
    E, k = C.ext, C.k
    F = E.base
    count = (E.order**k - 1) // (E.order - 1)
    if count > cap:
        raise ResourceLimit(f"{count} hyperplanes exceed the cap {cap}")
    hyper = [(a, _functional_matrix(C, a)) for a in _normalized_functionals(E, k)]
    # hyperplanes commute, so each state only tries indices above the smallest last index reaching it
    frontier: dict[Subspace, tuple[int, list]] = {U: (-1, [])}
    seen = {U}
    for r in range(1, k + 1):
        new: dict[Subspace, tuple[int, list]] = {}
        for S in sorted(frontier, key=Subspace.sort_key):
            last, path = frontier[S]
            for j in range(last + 1, len(hyper)):
                a, T = hyper[j]
                I = _meet_kernel(F, S, T)
                if I.dim == 0:
                    return CritResult(r, "hyperplane-search", path + [list(a)])
                if I == S:
                    continue
                prev = new.get(I)
                if I not in seen or prev is not None and j < prev[0]:
                    seen.add(I)
                    new[I] = (j, path + [list(a)])
        frontier = new
    raise InconsistencyError(f"no {k} hyperplanes meet the q-system trivially")


# bounds and families ----------------------------------------------------------------------------


@dataclass
class FamilyReport:
    lower: int
    upper: int
    crit: CritResult
    predictions: dict[str, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    report: Report = field(default_factory=Report)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "crit": self.crit.render(),
            "predictions": dict(self.predictions),
            "notes": list(self.notes),
            "report": self.report.to_dict(),
        }


def _is_simplex(C: VectorCode) -> bool:
    if C.k < 2 or C.n != C.m * C.k:
        return False
    W = weight_distribution(C)
    return all(w == 0 for i, w in enumerate(W) if i not in (0, C.m))


def bounds_and_family(C: Code, workers: int | None = None) -> FamilyReport:
    """The bounds ceil(n/m) <= crit <= k and the families that pin crit down.

    Predictions come from: F_{q^m}-linear non-degenerate codes, MRD codes
    with n <= m, 1-BMD codes with m < n <= 2m - d (all ceil(n/m)), and simplex
    codes (k).  Each prediction is checked against the computed value.
    """
    n, m = C.n, C.m
    lower = -(-n // m)
    upper = C.k
    M = from_code(C)
    value = crit(M, workers=workers)
    fam = FamilyReport(lower, upper, value, report=Report("bounds"))
    rep = fam.report
    nondeg = is_nondegenerate(C)
    if nondeg:
        rep.expect("lower-bound", f"ceil(n/m)={lower}", lower <= value.value, lower, value.render())
        rep.expect("upper-bound", f"k={upper}", value.value <= upper, value.render(), upper)
    else:
        rep.skip("lower-bound", "", "code is degenerate")
        rep.skip("upper-bound", "", "code is degenerate")
    cl = classify(C)
    if isinstance(C, VectorCode) and nondeg:
        fam.predictions["fqm-linear"] = lower
        if _is_simplex(C):
            fam.predictions["simplex"] = C.k
    if n <= m and cl.is_MRD:
        fam.predictions["mrd"] = lower
    if cl.d is not None and m < n <= 2 * m - cl.d and cl.is_1BMD:
        fam.predictions["1-bmd"] = lower
    if isinstance(C, MatrixCode) and m == n - 1 and C.k == n and nondeg:
        fam.notes.append("m = n-1, k = n, non-degenerate: no prediction (crit can exceed 2 here)")
    for name, pred in fam.predictions.items():
        rep.compare(f"prediction {name}", "", value.value, pred)
    return fam


# inequality suites -------------------------------------------------------------------------------


class _CritCache:
    def __init__(self, M: QPolymatroid):
        self.M = M
        self.rest: dict[bytes, float] = {}
        self.cont: dict[bytes, float] = {}

    def restriction(self, T) -> float:
        k = self.M.lattice.key(T)
        if k not in self.rest:
            self.rest[k] = crit(self.M.restriction(T)).value
        return self.rest[k]

    def contraction(self, U) -> float:
        k = self.M.lattice.key(U)
        if k not in self.cont:
            self.cont[k] = crit(self.M.contraction(U)).value
        return self.cont[k]


def _fmt(v: float) -> str:
    return "infinity" if v == INFINITY else str(int(v))


def _record(rep: Report, name: str, cases: int, failures: list, limit: int = 10) -> None:
    if not failures:
        rep.expect(name, f"{cases} cases", True)
        return
    for params, lhs, rhs in failures[:limit]:
        rep.expect(name, params, False, lhs, rhs)


def check_critical_inequalities(M: QPolymatroid, all_complements_max_n: int = 4, minimal_sets_max_n: int = 4) -> Report:
    """Sandwich, minor and minimal-set inequalities between critical exponents of minors.

    Complement pairs are taken exhaustively for n <= ``all_complements_max_n``
    and as (T, first complement of T) otherwise.
    """
    L = M.lattice
    rep = Report("critical")
    if not M.is_full:
        raise InvalidParams("the inequality suite runs on the full lattice")
    if M.loops():
        for name in ("restriction-sandwich", "contraction-beats-restriction", "restriction-below-contraction"):
            rep.skip(name, "", "hypothesis not met: the polymatroid has loops")
        return rep
    cc = _CritCache(M)
    c = crit(M).value
    xs = M.elements()
    every = L.n <= all_complements_max_n

    fails, cases = [], 0
    for T in xs:
        comps = L.complements(T)
        for T2 in comps if every else comps[:1]:
            cases += 1
            a, b = cc.restriction(T), cc.restriction(T2)
            if not a <= c <= a + b:
                fails.append((f"T={L.short(T)} T'={L.short(T2)}", f"{_fmt(a)}<={_fmt(c)}", f"<={_fmt(a + b)}"))
    _record(rep, "restriction-sandwich", cases, fails)

    fails = []
    for U in xs:
        target = cc.restriction(U)
        ok = any(L.meet(W, U) == L.bottom() and cc.contraction(W) <= target for W in xs)
        if not ok:
            fails.append((f"U={L.short(U)}", "no W", _fmt(target)))
    _record(rep, "contraction-beats-restriction", len(xs), fails)

    fails, cases = [], 0
    for U in xs:
        cu = cc.contraction(U)
        for T in L.complements(U):
            cases += 1
            if cc.restriction(T) > cu:
                fails.append((f"U={L.short(U)} T={L.short(T)}", _fmt(cc.restriction(T)), _fmt(cu)))
    _record(rep, "restriction-below-contraction", cases, fails)

    if L.n > minimal_sets_max_n:
        rep.skip("minimal-sets-agree", f"n={L.n}", f"only run for n <= {minimal_sets_max_n}")
        return rep
    top = M.top_weight
    for ell in range(1, max(1, top) + 1):
        A = [S for S in xs if all(cc.restriction(T) <= ell for T in L.complements(S))]
        B = [S for S in xs if cc.contraction(S) <= ell]
        minA = _minimal(L, A)
        minB = _minimal(L, B)
        rep.compare(
            "minimal-sets-agree",
            f"l={ell}",
            sorted(L.short(x) for x in minA),
            sorted(L.short(x) for x in minB),
        )
    return rep


def _minimal(L, xs: list) -> list:
    return [x for x in xs if not any(y != x and L.leq(y, x) for y in xs)]


# structure counting ------------------------------------------------------------------------------

STRUCTURE_KINDS = ("words", "cross", "subcodes")


@dataclass
class StructureSpec:
    """Structures over a family of codes.

    ``words``: t-tuples from codes[0].  ``cross``: one word from each code.
    ``subcodes``: one subcode of dimension dims[i] from each code.
    """

    kind: str
    codes: list[MatrixCode]
    t: int = 1
    dims: list[int] | None = None

    def __post_init__(self):
        if self.kind not in STRUCTURE_KINDS:
            raise InvalidParams(f"kind must be one of {STRUCTURE_KINDS}")
        if not self.codes:
            raise InvalidParams("at least one code is needed")
        if self.kind == "subcodes" and (self.dims is None or len(self.dims) != len(self.codes)):
            raise InvalidParams("subcode structures need one dimension per code")


def scaling_factors(codes: Sequence[MatrixCode]) -> tuple[QPolymatroid, list[Fraction]]:
    """The polymatroid of codes[0] and l_i with rho = l_i rho_i for every code."""
    n, q = codes[0].n, codes[0].q
    if any(C.n != n or C.q != q for C in codes):
        raise ScalingMismatch("all codes must share n and q")
    M = from_matrix_code(codes[0])
    ls = []
    for C in codes:
        lam = scaling_equivalence(M, from_matrix_code(C))
        if lam is None or lam <= 0:
            raise ScalingMismatch(f"{C!r} is not scaling-equivalent to the first code")
        ls.append(lam)
    return M, ls


def _theta(spec: StructureSpec, ls: list[Fraction], q: int, r: int) -> int:
    def dim_i(i):
        d = Fraction(r) / ls[i]
        if d.denominator != 1:
            raise ScalingMismatch(f"{r}/{ls[i]} is not an integer")
        return int(d)

    if spec.kind == "words":
        return q ** (spec.t * r)
    if spec.kind == "cross":
        return math.prod(q ** dim_i(i) for i in range(len(spec.codes)))
    return math.prod(gaussian_binomial(dim_i(i), spec.dims[i], q) for i in range(len(spec.codes)))


def _subcode_supports(C: MatrixCode, d: int, cap: int) -> Counter:
    F = C.field
    n_sub = gaussian_binomial(C.k, d, C.q)
    if n_sub > cap:
        raise ResourceLimit(f"{n_sub} subcodes exceed the cap {cap}")
    gens = C.flattened()
    zero = Subspace.zero(F, C.n)
    out: Counter = Counter()
    for S in rref_profiles(F, C.k, d):
        supp = zero
        for coeffs in S:
            v = [0] * (C.n * C.m)
            for c, g in zip(coeffs, gens):
                if c:
                    v = F.axpy(c, g, v)
            X = [v[i * C.m : (i + 1) * C.m] for i in range(C.n)]
            supp = supp + supp_word(X, C.q)
        out[supp] += 1
    return out


def _brute_structures(spec: StructureSpec) -> Counter | None:
    codes = spec.codes
    q = codes[0].q
    if spec.kind == "subcodes":
        draws = math.prod(gaussian_binomial(C.k, d, q) for C, d in zip(codes, spec.dims))
        if draws > SUBCODE_CAP:
            return None
        parts = [_subcode_supports(C, d, SUBCODE_CAP) for C, d in zip(codes, spec.dims)]
    else:
        picks = [codes[0]] * spec.t if spec.kind == "words" else list(codes)
        if q ** sum(C.k for C in picks) > TUPLE_CAP:
            return None
        cache: dict[int, Counter] = {}
        parts = []
        for C in picks:
            if id(C) not in cache:
                cache[id(C)] = Counter({S: c for S, (c, _) in word_supports(C).items()})
            parts.append(cache[id(C)])
    dist = Counter({Subspace.zero(codes[0].field, codes[0].n): 1})
    for p in parts:
        dist = _convolve(dist, p)
    return dist


def count_structures(spec: StructureSpec, U: Subspace, brute: bool = True) -> tuple[int, int | None]:
    """Number of structures whose support is exactly U^perp, by Moebius inversion and by enumeration.

    The second value is None when brute force is off or over its cap.
    """
    M, ls = scaling_factors(spec.codes)
    L = M.lattice
    k = M.raw(L.top())
    q = spec.codes[0].q
    formula = 0
    for V in L.elements(U, L.top()):
        formula += L.mobius(U, V) * _theta(spec, ls, q, k - M.raw(V))
    counted = None
    if brute:
        dist = _brute_structures(spec)
        if dist is not None:
            counted = dist.get(L.perp(U), 0)
    return formula, counted


def structure_distribution(spec: StructureSpec) -> Counter | None:
    """Exact counts of structures by support, or None when over the enumeration caps."""
    scaling_factors(spec.codes)
    return _brute_structures(spec)


def horizontal_sum(C: MatrixCode, D: MatrixCode) -> MatrixCode:
    """The code of all [X | Y] with X in C and Y in D."""
    if C.n != D.n or C.q != D.q:
        raise InvalidParams("codes must share n and q")
    gens = [[list(r) + [0] * D.m for r in X] for X in C.generators]
    gens += [[[0] * C.m + list(r) for r in Y] for Y in D.generators]
    return MatrixCode(C.q, C.n, C.m + D.m, gens)
