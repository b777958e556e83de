"""Representable q-polymatroids and their operations.

A :class:`QPolymatroid` is a weighted lattice whose weight is a rank
function bounded by r times the height.  Minors keep the polymatroid type,
the value r, the evaluation base used for critical exponents, and a link to
the code the rank function came from.
"""

from __future__ import annotations

import random
from fractions import Fraction

from qcrit.errors import InconsistencyError, InvalidInterval
from qcrit.lattice import Lattice, SubspaceLattice
from qcrit.rcode import ENUMERATION_CAP, MatrixCode, VectorCode, count_exact_support, dual, weight_distribution
from qcrit.report import Report
from qcrit.wlat import IntPoly, WeightedLattice, char_poly


class QPolymatroid(WeightedLattice):
    """Weighted lattice with rank bound r and an evaluation base for critical exponents."""

    def __init__(self, lattice: Lattice, rank, r: int, lo=None, hi=None, *, eval_base: int | None = None, provenance=None):
        super().__init__(lattice, rank, lo, hi)
        self.r = r
        self.eval_base = lattice.q if eval_base is None else eval_base
        self.provenance = provenance

    def _derive(self, lo, hi) -> "QPolymatroid":
        return QPolymatroid(
            self.lattice, self._store, self.r, lo, hi, eval_base=self.eval_base, provenance=self.provenance
        )

    def __repr__(self):
        L = self.lattice
        return f"QPolymatroid(r={self.r}, {L!r}, [{L.short(self.lo)}, {L.short(self.hi)}])"

    @property
    def is_full(self) -> bool:
        return self.lo == self.lattice.bottom() and self.hi == self.lattice.top()

    def rank(self, U) -> int:
        return self.f(U)

    def nullity(self, U) -> int:
        L = self.lattice
        return self.r * (L.height(U) - L.height(self.lo)) - self.f(U)

    def dual(self) -> "QPolymatroid":
        """Dual via A -> A^perp: rho*(B) = r dim B - rho(E) + rho(B^perp)."""
        if not self.is_full:
            raise InvalidInterval("the dual is defined on the full lattice only")
        L, r = self.lattice, self.r
        top = self.raw(L.top())
        raw = self.raw

        def rank_star(B):
            return r * L.height(B) - top + raw(L.perp(B))

        return QPolymatroid(L, rank_star, r, eval_base=self.eval_base, provenance=("dual", self.provenance))

    def contract_to(self, T) -> "QPolymatroid":
        """M.T, the contraction by T^perp."""
        return self.contraction(self.lattice.perp(T))

    def loops(self) -> list:
        base = self.raw(self.lo)
        return [a for a in self.atoms() if self.raw(a) == base]

    def coloops(self) -> list:
        top = self.raw(self.hi)
        return [H for H in self.coatoms() if top - self.raw(H) == self.r]

    def weight_enumerator(self) -> list[IntPoly]:
        """A(i; z): sum over i-dimensional X of the polynomial of M / X^perp."""
        if not self.is_full:
            raise InvalidInterval("the weight enumerator is defined on the full lattice only")
        L = self.lattice
        out = []
        for i in range(L.n + 1):
            acc = IntPoly()
            for X in L.elements(height=i):
                acc = acc + char_poly(self.contraction(L.perp(X)))
            out.append(acc)
        return out

    def rank_table(self) -> list[tuple[int, object, int]]:
        L = self.lattice
        return [(L.height(x), x, self.f(x)) for x in self.elements()]


def from_matrix_code(C: MatrixCode, cap: int | None = None) -> QPolymatroid:
    """(q, m)-polymatroid with rho(U) = k - dim C_U."""
    L = SubspaceLattice(C.q, C.n) if cap is None else SubspaceLattice(C.q, C.n, cap)
    return QPolymatroid(L, C.rho, C.m, eval_base=C.q, provenance=C)


def from_vector_code(C: VectorCode, cap: int | None = None) -> QPolymatroid:
    """q-matroid of a vector code, evaluated at powers of q^m.

    The rank is computed from the generator matrix and checked against the
    shortening of the expanded matrix code on every query.
    """
    L = SubspaceLattice(C.q, C.n) if cap is None else SubspaceLattice(C.q, C.n, cap)
    M = C.to_matrix_code()
    m = C.m

    def rank(W):
        a = C.rho(W)
        b, rem = divmod(M.rho(W), m)
        if rem or a != b:
            raise InconsistencyError(f"vector-code rank routes disagree at {W.short()}: {a} vs {M.rho(W)}/{m}")
        return a

    return QPolymatroid(L, rank, 1, eval_base=C.q**C.m, provenance=C)


def from_weighted_lattice(W: WeightedLattice, r: int) -> QPolymatroid:
    return QPolymatroid(W.lattice, W._store, r, W.lo, W.hi)


def from_code(C, cap: int | None = None) -> QPolymatroid:
    if isinstance(C, VectorCode):
        return from_vector_code(C, cap)
    return from_matrix_code(C, cap)


def scaling_equivalence(M1: WeightedLattice, M2: WeightedLattice) -> Fraction | None:
    """lambda with rank1 = lambda * rank2 on every element, or None when no such lambda exists."""
    L = M1.lattice
    if (L.q, L.n) != (M2.lattice.q, M2.lattice.n):
        return None
    lam: Fraction | None = None
    for A in L.elements(M1.lo, M1.hi):
        a, b = M1.f(A), M2.f(A)
        if lam is None:
            if b != 0:
                lam = Fraction(a, b)
            elif a != 0:
                return None
        elif a != lam * b:
            return None
    return Fraction(1) if lam is None else lam


AXIOM_LEVELS = ("off", "covers", "sampled", "exhaustive")


def check_axioms(M: QPolymatroid, level: str = "sampled", samples: int = 1000, seed: int = 0) -> Report:
    """Boundedness, monotonicity on covers and submodularity.

    ``covers`` checks the first two; ``sampled`` adds submodularity on
    ``samples`` random pairs; ``exhaustive`` checks submodularity on all pairs.
    """
    if level not in AXIOM_LEVELS:
        raise ValueError(f"level must be one of {AXIOM_LEVELS}")
    rep = Report("axioms")
    if level == "off":
        return rep
    L = M.lattice
    xs = M.elements()
    h0 = L.height(M.lo)
    bad = next((x for x in xs if not 0 <= M.f(x) <= M.r * (L.height(x) - h0)), None)
    rep.expect("R1 boundedness", f"{len(xs)} elements" if bad is None else f"at {L.short(bad)}", bad is None,
               None if bad is None else M.f(bad), None if bad is None else M.r * (L.height(bad) - h0))
    bad_pair = None
    for x in xs:
        for y in L.atoms(x, M.hi):
            if M.f(y) < M.f(x):
                bad_pair = (x, y)
                break
        if bad_pair:
            break
    rep.expect(
        "R2 monotonicity",
        "all covers" if bad_pair is None else f"{L.short(bad_pair[0])} < {L.short(bad_pair[1])}",
        bad_pair is None,
    )
    if level == "covers":
        return rep
    if level == "exhaustive":
        pairs = ((a, b) for i, a in enumerate(xs) for b in xs[i:])
        desc = "all pairs"
    else:
        rng = random.Random(seed)
        pairs = ((rng.choice(xs), rng.choice(xs)) for _ in range(samples))
        desc = f"{samples} sampled pairs, seed {seed}"
    viol = None
    for a, b in pairs:
        if M.f(L.join(a, b)) + M.f(L.meet(a, b)) > M.f(a) + M.f(b):
            viol = (a, b)
            break
    rep.expect("R3 submodularity", desc if viol is None else f"{L.short(viol[0])}, {L.short(viol[1])}", viol is None)
    return rep


def rank_report(M: QPolymatroid) -> str:
    """Rows 'dim, basis, rank' in enumeration order."""
    L = M.lattice
    return "\n".join(f"{h} {L.short(x)} {rk}" for h, x, rk in M.rank_table())


def check_representation(C, cap: int | None = None) -> Report:
    """Duality and support-counting identities linking a code to its polymatroid.

    Covers the dual rank function, the involution, the shortening relation
    dim C_U = k - r dim U + dim (C^perp)_(U^perp), exact-support counts as
    polynomial values and the rank distribution as weight-enumerator values.
    """
    rep = Report("representation")
    M = from_code(C, cap)
    D = dual(C)
    MD = from_code(D, cap)
    Mstar = M.dual()
    L = M.lattice
    xs = L.elements()
    Q = M.eval_base

    def record(name, bad):
        if bad is None:
            rep.expect(name, f"{len(xs)} subspaces", True)
        else:
            x, lhs, rhs = bad
            rep.expect(name, L.short(x), False, lhs, rhs)

    record("dual-rank", next(((x, Mstar.f(x), MD.f(x)) for x in xs if Mstar.f(x) != MD.f(x)), None))
    twice = Mstar.dual()
    record("dual-involution", next(((x, twice.f(x), M.f(x)) for x in xs if twice.f(x) != M.f(x)), None))
    k = C.k
    bad = None
    for U in xs:
        lhs = C.shortened_dim(U)
        rhs = k - M.r * U.dim + D.shortened_dim(U.perp())
        if lhs != rhs:
            bad = (U, lhs, rhs)
            break
    record("shortening-duality", bad)
    bad = None
    for U in xs:
        lhs = count_exact_support(C, U.perp())
        rhs = char_poly(M.contraction(U))(Q)
        if lhs != rhs:
            bad = (U, lhs, rhs)
            break
    record("exact-support", bad)
    enum_cap = ENUMERATION_CAP if cap is None else cap
    total = C.q ** C.k_fq
    if total > enum_cap:
        rep.skip("weight-enumerator", "", f"{total} codewords exceed the enumeration cap")
        return rep
    W = weight_distribution(C, enum_cap)
    W = W + [0] * (L.n + 1 - len(W))
    A = [a(Q) for a in M.weight_enumerator()]
    rep.compare("weight-enumerator", f"i=0..{L.n}", W, A)
    return rep
