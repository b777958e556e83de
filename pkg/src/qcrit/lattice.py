"""Subspace lattices L(F_q^n) and Boolean lattices behind one interface.

Elements of a :class:`SubspaceLattice` are :class:`~qcrit.gf.Subspace`
values; elements of a :class:`BooleanLattice` are bit masks over ``range(n)``.
Enumeration is always ordered by height and then by the canonical byte key,
so every listing is reproducible.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from math import comb
from typing import Any, Iterable

from qcrit.errors import InvalidInterval, ResourceLimit
from qcrit.gf import GF, Field, Subspace

DEFAULT_CAP = 10_000_000


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n (binomial coefficient when q == 1)."""
    if k < 0 or k > n:
        return 0
    if q == 1:
        return comb(n, k)
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def galois_number(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def rref_profiles(F: Field, d: int, j: int) -> Iterable[list[list[int]]]:
    """Yield every j x d matrix in RREF with j nonzero rows, one per j-subspace of F^d."""
    q = F.order
    for pivots in itertools.combinations(range(d), j):
        pivset = set(pivots)
        free = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, d) if c not in pivset]
        for vals in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * d for _ in range(j)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(free, vals):
                rows[i][c] = v
            yield rows


class Lattice:
    """Shared interface; concrete lattices implement the element operations."""

    q: int
    n: int
    cap: int

    def bottom(self) -> Any: ...
    def top(self) -> Any: ...
    def height(self, x) -> int: ...
    def leq(self, a, b) -> bool: ...
    def join(self, a, b): ...
    def meet(self, a, b): ...
    def perp(self, a): ...
    def key(self, x) -> bytes: ...
    def render(self, x) -> str: ...
    def short(self, x) -> str: ...
    def _elements(self, lo, hi, height: int) -> tuple: ...

    def size(self, lo=None, hi=None, height: int | None = None) -> int:
        lo, hi = self._bounds(lo, hi)
        d = self.height(hi) - self.height(lo)
        if height is None:
            return galois_number(d, self.q)
        return gaussian_binomial(d, height - self.height(lo), self.q)

    def sort_key(self, x) -> tuple[int, bytes]:
        return (self.height(x), self.key(x))

    def _bounds(self, lo, hi):
        lo = self.bottom() if lo is None else lo
        hi = self.top() if hi is None else hi
        return lo, hi

    def check_interval(self, lo, hi) -> None:
        if not self.leq(lo, hi):
            raise InvalidInterval(f"{self.short(lo)} is not below {self.short(hi)}")

    def elements(self, lo=None, hi=None, height: int | None = None) -> list:
        """All x with lo <= x <= hi (of the given absolute height), in canonical order."""
        lo, hi = self._bounds(lo, hi)
        self.check_interval(lo, hi)
        total = self.size(lo, hi, height)
        if total > self.cap:
            raise ResourceLimit(f"interval has {total} elements, cap is {self.cap}")
        if height is None:
            out = []
            for h in range(self.height(lo), self.height(hi) + 1):
                out.extend(self._elements_cached(lo, hi, h))
            return out
        if not self.height(lo) <= height <= self.height(hi):
            return []
        return list(self._elements_cached(lo, hi, height))

    def mobius(self, a, b) -> int:
        if not self.leq(a, b):
            return 0
        d = self.height(b) - self.height(a)
        if self.q == 1:
            return (-1) ** d
        return (-1) ** d * self.q ** (d * (d - 1) // 2)

    def mobius_by_gap(self, d: int) -> int:
        return (-1) ** d * (1 if self.q == 1 else self.q ** (d * (d - 1) // 2))

    def atoms(self, lo=None, hi=None) -> list:
        lo, hi = self._bounds(lo, hi)
        return self.elements(lo, hi, self.height(lo) + 1)

    def coatoms(self, lo=None, hi=None) -> list:
        lo, hi = self._bounds(lo, hi)
        if lo == hi:
            return []
        return self.elements(lo, hi, self.height(hi) - 1)

    def covers_below(self, v, lo=None) -> list:
        lo, _ = self._bounds(lo, None)
        return self.coatoms(lo, v)

    def covers_above(self, a, hi=None) -> list:
        _, hi = self._bounds(None, hi)
        return self.atoms(a, hi)

    def complements(self, u, lo=None, hi=None) -> list:
        """All d in [lo, hi] with u meet d = lo and u join d = hi."""
        lo, hi = self._bounds(lo, hi)
        self.check_interval(lo, u)
        self.check_interval(u, hi)
        h = self.height(lo) + self.height(hi) - self.height(u)
        # with complementary heights, join == hi forces meet == lo by modularity
        return [d for d in self.elements(lo, hi, h) if self.join(u, d) == hi]

    def interval(self, lo=None, hi=None) -> "Interval":
        lo, hi = self._bounds(lo, hi)
        self.check_interval(lo, hi)
        return Interval(self, lo, hi)


class SubspaceLattice(Lattice):
    """The lattice of subspaces of F_q^n."""

    def __init__(self, q: int, n: int, cap: int = DEFAULT_CAP):
        self.field = GF(q)
        self.q = q
        self.n = n
        self.cap = cap
        self._elements_cached = functools.lru_cache(maxsize=8192)(self._elements)

    def __repr__(self):
        return f"SubspaceLattice(q={self.q}, n={self.n})"

    def bottom(self):
        return Subspace.zero(self.field, self.n)

    def top(self):
        return Subspace.full(self.field, self.n)

    def height(self, x: Subspace) -> int:
        return x.dim

    def leq(self, a, b):
        return a <= b

    def join(self, a, b):
        return a + b

    def meet(self, a, b):
        return a & b

    def perp(self, a):
        return a.perp()

    def key(self, x):
        return x.key

    def render(self, x):
        return x.render()

    def short(self, x):
        return x.short()

    def span(self, rows) -> Subspace:
        return Subspace.from_rows(self.field, rows, self.n)

    def _elements(self, lo: Subspace, hi: Subspace, height: int) -> tuple:
        F, n = self.field, self.n
        # rows of hi that extend a basis of lo form a complement K; lo + span(S K) is a bijection
        comp: list[tuple[int, ...]] = []
        acc = lo
        for row in hi.basis:
            if not acc.contains(row):
                comp.append(row)
                acc = acc + Subspace.from_rows(F, [row], n)
        j = height - lo.dim
        out = []
        lo_rows = list(lo.basis)
        for S in rref_profiles(F, len(comp), j):
            rows = list(lo_rows)
            for srow in S:
                v = [0] * n
                for c, krow in zip(srow, comp):
                    if c:
                        v = F.axpy(c, krow, v)
                rows.append(v)
            out.append(Subspace.from_rows(F, rows, n))
        out.sort(key=Subspace.sort_key)
        return tuple(out)


class BooleanLattice(Lattice):
    """Subsets of {0, ..., n-1} as bit masks; the q = 1 case."""

    def __init__(self, n: int, cap: int = DEFAULT_CAP):
        self.q = 1
        self.n = n
        self.cap = cap
        self._full = (1 << n) - 1
        self._elements_cached = functools.lru_cache(maxsize=8192)(self._elements)

    def __repr__(self):
        return f"BooleanLattice(n={self.n})"

    def bottom(self):
        return 0

    def top(self):
        return self._full

    def height(self, x: int) -> int:
        return bin(x).count("1")

    def leq(self, a, b):
        return a & ~b == 0

    def join(self, a, b):
        return a | b

    def meet(self, a, b):
        return a & b

    def perp(self, a):
        return self._full & ~a

    def key(self, x):
        return bytes((x >> i) & 1 for i in range(self.n))

    def render(self, x):
        return " ".join(str((x >> i) & 1) for i in range(self.n))

    def short(self, x):
        return "{" + ",".join(str(i + 1) for i in range(self.n) if x >> i & 1) + "}"

    def _elements(self, lo: int, hi: int, height: int) -> tuple:
        free = [i for i in range(self.n) if (hi & ~lo) >> i & 1]
        j = height - self.height(lo)
        out = [lo | sum(1 << i for i in chosen) for chosen in itertools.combinations(free, j)]
        out.sort(key=self.key)
        return tuple(out)


def make_lattice(q: int, n: int, cap: int = DEFAULT_CAP) -> Lattice:
    """Boolean lattice when q == 1, subspace lattice otherwise."""
    return BooleanLattice(n, cap) if q == 1 else SubspaceLattice(q, n, cap)


@dataclass(frozen=True)
class Interval:
    lattice: Lattice
    lo: Any
    hi: Any

    def elements(self, height: int | None = None) -> list:
        return self.lattice.elements(self.lo, self.hi, height)

    def atoms(self) -> list:
        return self.lattice.atoms(self.lo, self.hi)

    def coatoms(self) -> list:
        return self.lattice.coatoms(self.lo, self.hi)

    def complements(self, u) -> list:
        return self.lattice.complements(u, self.lo, self.hi)

    @property
    def height(self) -> int:
        return self.lattice.height(self.hi) - self.lattice.height(self.lo)

    def __contains__(self, x) -> bool:
        L = self.lattice
        return L.leq(self.lo, x) and L.leq(x, self.hi)
