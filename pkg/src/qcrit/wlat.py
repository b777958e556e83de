"""Weighted lattices and their characteristic polynomials.

A :class:`WeightedLattice` pairs an interval [lo, hi] of a lattice with a
monotone integer weight.  Minors share the underlying weight oracle and its
memo, so weights are computed at most once per element however many minors
are taken.
"""

from __future__ import annotations

import re
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Mapping, Sequence

from qcrit.errors import InvalidCoatom, InvalidInterval, ParseError
from qcrit.gf import Subspace, parse_row
from qcrit.lattice import BooleanLattice, Lattice, make_lattice
from qcrit.report import Report


class IntPoly:
    """Polynomial in z with exact integer coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def const(cls, c: int) -> "IntPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @staticmethod
    def _lift(other) -> "IntPoly":
        return other if isinstance(other, IntPoly) else IntPoly([other])

    def __add__(self, other):
        o = self._lift(other)
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return IntPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return IntPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return IntPoly()
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, z: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    eval = __call__

    def __repr__(self):
        return f"IntPoly({str(self)!r})"

    def __str__(self):
        parts = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            mag = abs(c)
            if d == 0:
                body = str(mag)
            else:
                mono = "z" if d == 1 else f"z^{d}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts) or "0"

    _TERM = re.compile(r"([+-]?)(\d+)?(?:(\*)?z(?:\^(\d+))?)?")

    @classmethod
    def parse(cls, text: str) -> "IntPoly":
        s = text.replace(" ", "")
        if not s:
            raise ParseError("empty polynomial")
        coeffs: dict[int, int] = {}
        pos = 0
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos or (pos > 0 and not m.group(1)):
                raise ParseError(f"cannot parse polynomial {text!r} at offset {pos}")
            sign, num, star, exp = m.groups()
            has_z = "z" in m.group(0)
            if not has_z and num is None or star and num is None:
                raise ParseError(f"cannot parse polynomial {text!r}")
            c = int(num) if num is not None else 1
            d = (int(exp) if exp else 1) if has_z else 0
            coeffs[d] = coeffs.get(d, 0) + (-c if sign == "-" else c)
            pos = m.end()
        top = max(coeffs)
        return cls([coeffs.get(i, 0) for i in range(top + 1)])


ZERO = IntPoly()
ONE = IntPoly([1])


class _WeightStore:
    """Memoising wrapper around a weight oracle, shared by a lattice and all its minors."""

    def __init__(self, lattice: Lattice, weight: Callable | Mapping):
        self.lattice = lattice
        self.table = weight if isinstance(weight, Mapping) else None
        self.oracle = None if self.table is not None else weight
        self.memo: dict[bytes, int] = {}
        self.lock = threading.Lock()
        self.poly_memo: dict[tuple[bytes, bytes], IntPoly] = {}

    def __call__(self, x) -> int:
        k = self.lattice.key(x)
        v = self.memo.get(k)
        if v is None:
            if self.table is not None:
                v = self.table[k]
            else:
                v = int(self.oracle(x))
            with self.lock:
                self.memo[k] = v
        return v


class WeightedLattice:
    """The interval [lo, hi] of ``lattice`` with weight f(x) - f(lo).

    ``weight`` is either a callable on elements or a mapping from canonical
    element keys to integers.
    """

    def __init__(self, lattice: Lattice, weight: Callable | Mapping | _WeightStore, lo=None, hi=None):
        self.lattice = lattice
        self.lo = lattice.bottom() if lo is None else lo
        self.hi = lattice.top() if hi is None else hi
        lattice.check_interval(self.lo, self.hi)
        self._store = weight if isinstance(weight, _WeightStore) else _WeightStore(lattice, weight)

    def _derive(self, lo, hi) -> "WeightedLattice":
        return WeightedLattice(self.lattice, self._store, lo, hi)

    def raw(self, x) -> int:
        """Weight of x in the ambient lattice, before shifting by f(lo)."""
        return self._store(x)

    def f(self, x) -> int:
        return self._store(x) - self._store(self.lo)

    __call__ = f

    @property
    def height(self) -> int:
        L = self.lattice
        return L.height(self.hi) - L.height(self.lo)

    @property
    def top_weight(self) -> int:
        return self.f(self.hi)

    def contains(self, x) -> bool:
        L = self.lattice
        return L.leq(self.lo, x) and L.leq(x, self.hi)

    def minor(self, X, Y) -> "WeightedLattice":
        """The weighted interval [X, Y]; X and Y must lie in this interval with X <= Y."""
        L = self.lattice
        if not (self.contains(X) and self.contains(Y) and L.leq(X, Y)):
            raise InvalidInterval(f"[{L.short(X)}, {L.short(Y)}] is not a sub-interval")
        return self._derive(X, Y)

    def restriction(self, Y) -> "WeightedLattice":
        return self.minor(self.lo, Y)

    def contraction(self, X) -> "WeightedLattice":
        return self.minor(X, self.hi)

    def elements(self, height: int | None = None) -> list:
        """Elements of the interval; ``height`` is relative to lo."""
        L = self.lattice
        h = None if height is None else L.height(self.lo) + height
        return L.elements(self.lo, self.hi, h)

    def atoms(self) -> list:
        return self.lattice.atoms(self.lo, self.hi)

    def coatoms(self) -> list:
        return self.lattice.coatoms(self.lo, self.hi)

    def key(self) -> tuple[bytes, bytes]:
        L = self.lattice
        return (L.key(self.lo), L.key(self.hi))

    def __repr__(self):
        L = self.lattice
        return f"WeightedLattice({L!r}, [{L.short(self.lo)}, {L.short(self.hi)}])"


# characteristic polynomials ---------------------------------------------------


def _partial_sum(W: WeightedLattice, xs: Sequence) -> dict[int, int]:
    L = W.lattice
    h0 = L.height(W.lo)
    top = W.raw(W.hi)
    acc: dict[int, int] = {}
    for x in xs:
        d = top - W.raw(x)
        acc[d] = acc.get(d, 0) + L.mobius_by_gap(L.height(x) - h0)
    return acc


def char_poly_direct(W: WeightedLattice, workers: int | None = None) -> IntPoly:
    """Sum of mu(lo, X) z^(f(hi) - f(X)) over the interval."""
    xs = W.elements()
    if workers and workers > 1 and len(xs) > 64:
        size = -(-len(xs) // workers)
        chunks = [xs[i : i + size] for i in range(0, len(xs), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _partial_sum(W, c), chunks))
    else:
        parts = [_partial_sum(W, xs)]
    total: dict[int, int] = {}
    for part in parts:
        for d, c in part.items():
            total[d] = total.get(d, 0) + c
    if not total:
        return ZERO
    return IntPoly([total.get(i, 0) for i in range(max(total) + 1)])


def char_poly(W: WeightedLattice, workers: int | None = None) -> IntPoly:
    """Direct polynomial, memoised per interval on the shared weight store."""
    memo = W._store.poly_memo
    k = W.key()
    p = memo.get(k)
    if p is None:
        p = char_poly_direct(W, workers)
        memo[k] = p
    return p


def char_poly_recursive(W: WeightedLattice, H=None, _memo: dict | None = None) -> IntPoly:
    """Deletion-contraction style recursion on a coatom H.

    P(W) = P(W|_H) (P(W/H) + 1) - sum over atoms b not below H of P(W/b),
    with the first coatom in canonical order used when H is omitted and on
    every sub-interval.
    """
    L = W.lattice
    memo = {} if _memo is None else _memo
    if H is not None:
        if not (W.contains(H) and L.height(H) == L.height(W.hi) - 1):
            raise InvalidCoatom(f"{L.short(H)} is not a coatom of the interval")
    else:
        k = W.key()
        if k in memo:
            return memo[k]
    h = W.height
    if h == 0:
        result = ONE
    elif h == 1:
        result = IntPoly.monomial(W.top_weight) - 1
    else:
        if H is None:
            H = W.coatoms()[0]
        rest = char_poly_recursive(W.restriction(H), None, memo)
        upper = IntPoly.monomial(W.f(W.hi) - W.f(H))  # P(W/H) + 1 on a height-one interval
        result = rest * upper
        for b in W.atoms():
            if not L.leq(b, H):
                result = result - char_poly_recursive(W.contraction(b), None, memo)
    memo[W.key()] = result
    return result


# flats and loops -------------------------------------------------------------------


def is_flat(W: WeightedLattice, F) -> bool:
    """F is a flat when every cover of F inside the interval has strictly larger weight."""
    if not W.contains(F):
        raise InvalidInterval(f"{W.lattice.short(F)} is outside the interval")
    fF = W.raw(F)
    return all(W.raw(A) > fF for A in W.lattice.atoms(F, W.hi))


def flats(W: WeightedLattice) -> list:
    return [x for x in W.elements() if is_flat(W, x)]


def loops(W: WeightedLattice) -> list:
    base = W.raw(W.lo)
    return [a for a in W.atoms() if W.raw(a) == base]


# identity suite --------------------------------------------------------------------


def is_submodular(W: WeightedLattice, max_pairs: int | None = None) -> bool | None:
    """f(A join B) + f(A meet B) <= f(A) + f(B) on the interval; None when there are too many pairs."""
    L = W.lattice
    xs = W.elements()
    if max_pairs is not None and len(xs) * (len(xs) + 1) // 2 > max_pairs:
        return None
    f = W.f
    for i, a in enumerate(xs):
        fa = f(a)
        for b in xs[i + 1 :]:
            if f(L.join(a, b)) + f(L.meet(a, b)) > fa + f(b):
                return False
    return True


def _minors_nonneg(W: WeightedLattice, theta: int) -> bool:
    """Whether every minor of W has a nonnegative polynomial value at theta."""
    xs = W.elements()
    L = W.lattice
    for X in xs:
        for Y in L.elements(X, W.hi):
            if char_poly(W.minor(X, Y))(theta) < 0:
                return False
    return True


def check_identities(
    W: WeightedLattice,
    r: int | None = None,
    thetas: Sequence[int] = (),
    max_minor_scan: int = 400,
) -> Report:
    """Verify the decomposition identities for W.

    ``r`` marks W as a (q, r)-polymatroid, enabling the loop-complement and
    coloop identities.  For each theta in ``thetas`` the positivity
    propagation statements are checked; those needing every minor to be
    nonnegative are skipped when the interval has more than
    ``max_minor_scan`` elements.
    """
    L = W.lattice
    rep = Report("identities")
    P = char_poly(W)
    rep.compare("direct=recursive", "H=first", char_poly_recursive(W), P)
    if W.height >= 1:
        rep.compare("P(1)=0", "", P(1), 0)
    # P equals z^f(1) minus the contraction polynomials of all nonzero elements
    rhs = IntPoly.monomial(W.top_weight)
    for B in W.elements():
        if B != W.lo:
            rhs = rhs - char_poly(W.contraction(B))
    rep.compare("chardec", "", P, rhs)

    # the vanishing needs a weight-preserving closure, which submodularity provides
    sub = is_submodular(W, max_pairs=max_minor_scan**2)
    for x in W.elements():
        if not is_flat(W, x):
            if sub is False:
                rep.skip("nonflat-contraction-zero", L.short(x), "hypothesis not met: weighting is not submodular")
            else:
                rep.compare("nonflat-contraction-zero", L.short(x), char_poly(W.contraction(x)), ZERO)

    atoms = W.atoms()
    if W.height >= 2:
        shared: dict = {}
        for H in W.coatoms():
            hs = L.short(H)
            rep.compare("chardecomp", f"H={hs}", char_poly_recursive(W, H, shared), P)
            off = [y for y in atoms if not L.leq(y, H)]
            tail = ZERO
            for y in off:
                tail = tail + char_poly(W.contraction(y))
            PH = char_poly(W.restriction(H))
            gap = W.f(W.hi) - W.f(H)
            rep.compare("decomp123-1", f"H={hs}", IntPoly.monomial(gap) * PH - tail, P)
            if not is_flat(W, H):
                rep.compare("decomp123-2", f"H={hs}", PH - tail, P)
            else:
                rep.skip("decomp123-2", f"H={hs}", "hypothesis not met: H is a flat")
            if r is None:
                rep.skip("decomp2-1", f"H={hs}", "hypothesis not met: no polymatroid rank")
                rep.skip("decomp2-2", f"H={hs}", "hypothesis not met: no polymatroid rank")
                continue
            comps = L.complements(H, W.lo, W.hi)
            base = W.raw(W.lo)
            loop_comp = [e for e in comps if W.raw(e) == base]
            if loop_comp:
                rep.compare("decomp2-1", f"H={hs} e={L.short(loop_comp[0])}", PH, tail)
            else:
                rep.skip("decomp2-1", f"H={hs}", "hypothesis not met: no loop complement")
            if W.f(W.hi) - W.f(H) == r:
                e = comps[0]
                rhs = char_poly(W.restriction(e)) * char_poly(W.contraction(e))
                for y in off:
                    if y != e:
                        rhs = rhs - char_poly(W.contraction(y))
                rep.compare("decomp2-2", f"H={hs} e={L.short(e)}", P, rhs)
            else:
                rep.skip("decomp2-2", f"H={hs}", "hypothesis not met: H is not a coloop")

    for theta in thetas:
        _positivity_checks(W, theta, rep, max_minor_scan)
    return rep


def _positivity_checks(W: WeightedLattice, theta: int, rep: Report, max_minor_scan: int) -> None:
    L = W.lattice
    P = char_poly(W)
    # restriction to a coatom stays positive when the contractions below it are nonnegative
    for H in W.coatoms():
        name, params = "charrest", f"theta={theta} H={L.short(H)}"
        below = [b for b in W.atoms() if L.leq(b, H)]
        if P(theta) > 0 and all(char_poly(W.contraction(b))(theta) >= 0 for b in below):
            rep.expect(name, params, char_poly(W.restriction(H))(theta) > 0)
        else:
            rep.skip(name, params)
    if L.size(W.lo, W.hi) > max_minor_scan:
        rep.skip("charcontrest", f"theta={theta}", "interval too large for the all-minors scan")
        rep.skip("charpuncsho", f"theta={theta}", "interval too large for the all-minors scan")
        return
    if not _minors_nonneg(W, theta):
        rep.skip("charcontrest", f"theta={theta}", "hypothesis not met: a minor is negative")
        rep.skip("charpuncsho", f"theta={theta}", "hypothesis not met: a minor is negative")
        return
    for T in W.elements():
        if char_poly(W.contraction(T))(theta) > 0:
            for U in L.complements(T, W.lo, W.hi):
                rep.expect(
                    "charcontrest",
                    f"theta={theta} T={L.short(T)} U={L.short(U)}",
                    char_poly(W.restriction(U))(theta) > 0,
                )
    for U in W.elements():
        if char_poly(W.restriction(U))(theta) > 0:
            found = any(
                char_poly(W.contraction(T))(theta) > 0
                for V in L.complements(U, W.lo, W.hi)
                for T in L.elements(W.lo, V)
            )
            rep.expect("charpuncsho", f"theta={theta} U={L.short(U)}", found)


# text format -------------------------------------------------------------------------


def _row_token(L: Lattice, x) -> str:
    if isinstance(L, BooleanLattice):
        return "".join(str((x >> i) & 1) for i in range(L.n))
    if not x.basis:
        return "-"
    sep = "," if L.q > 10 else ""
    return ";".join(sep.join(map(str, row)) for row in x.basis)


def _parse_element(L: Lattice, token: str):
    if isinstance(L, BooleanLattice):
        if token == "-":
            return 0
        if len(token) != L.n or set(token) - {"0", "1"}:
            raise ParseError(f"bad subset indicator {token!r}")
        return sum(1 << i for i, ch in enumerate(token) if ch == "1")
    if token == "-":
        return L.bottom()
    rows = [parse_row(t, L.q) for t in token.split(";")]
    if any(len(r) != L.n for r in rows) or any(not 0 <= v < L.q for r in rows for v in r):
        raise ParseError(f"bad basis {token!r}")
    return Subspace.from_rows(L.field, rows, L.n)


def dump_wlat(W: WeightedLattice, r: int | None = None) -> str:
    L = W.lattice
    head = f"wlat {L.q} {L.n}" + (f" {r}" if r is not None else "")
    lines = [head]
    for x in L.elements():
        lines.append(f"{L.height(x)} {_row_token(L, x)} {W.raw(x)}")
    return "\n".join(lines) + "\n"


def parse_wlat(text: str, cap: int | None = None) -> tuple[WeightedLattice, int | None]:
    """Parse a weighted-lattice table; returns (W, r) where r is None unless the header names it."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty weighted-lattice file")
    head = lines[0].split()
    if head[0] != "wlat" or len(head) not in (3, 4):
        raise ParseError("header must be 'wlat q n [r]'")
    try:
        q, n = int(head[1]), int(head[2])
        r = int(head[3]) if len(head) == 4 else None
    except ValueError as exc:
        raise ParseError(f"bad header: {lines[0]!r}") from exc
    L = make_lattice(q, n) if cap is None else make_lattice(q, n, cap)
    table: dict[bytes, int] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ParseError(f"expected '<dim> <basis> <weight>': {ln!r}")
        try:
            dim, weight = int(parts[0]), int(parts[2])
        except ValueError as exc:
            raise ParseError(f"bad line {ln!r}") from exc
        x = _parse_element(L, parts[1])
        if L.height(x) != dim:
            raise ParseError(f"declared dimension {dim} but basis spans {L.height(x)}: {ln!r}")
        if weight < 0:
            raise ParseError(f"negative weight: {ln!r}")
        k = L.key(x)
        if k in table:
            raise ParseError(f"element listed twice: {ln!r}")
        table[k] = weight
    W = from_table(L, table)
    return W, r


def from_table(L: Lattice, table: Mapping[bytes, int]) -> WeightedLattice:
    """Build a weighted lattice from explicit weights, checking completeness and monotonicity."""
    elements = L.elements()
    missing = [x for x in elements if L.key(x) not in table]
    if missing:
        raise ParseError(f"{len(missing)} lattice elements have no weight, e.g. {L.short(missing[0])}")
    if table[L.key(L.bottom())] != 0:
        raise ParseError("weight of the bottom element must be 0")
    for x in elements:
        fx = table[L.key(x)]
        for y in L.atoms(x, L.top()):
            if table[L.key(y)] < fx:
                raise ParseError(f"weight decreases from {L.short(x)} to {L.short(y)}")
    return WeightedLattice(L, dict(table))


def load_wlat(path: str) -> tuple[WeightedLattice, int | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_wlat(fh.read())
