"""Finite fields and exact linear algebra over them.

Field elements are plain ints.  In a prime field GF(p) they are residues
mod p.  In an extension of degree m over a base field of order q they are
the integers in ``range(q**m)`` whose base-q digits, least significant
first, are the coordinates in the polynomial basis 1, a, ..., a^(m-1) where
a is a root of the field's modulus.  A base-field element b is therefore
encoded by the same int b inside the extension.

Matrices are lists of rows; rows are lists (or tuples) of ints.
"""

from __future__ import annotations

import functools
import itertools
from typing import NamedTuple, Sequence

from qcrit.errors import InvalidParams

MAX_EXT_ORDER = 2**20
_TABLE_ORDER = 256


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q == p**e, or raise InvalidParams."""
    if q < 2:
        raise InvalidParams(f"field order must be a prime power >= 2, got {q}")
    p = next((d for d in range(2, int(q**0.5) + 1) if q % d == 0), q)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise InvalidParams(f"{q} is not a prime power")
    return p, e


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class Field:
    """Common interface of prime fields and extension fields."""

    order: int
    char: int
    base: "Field | None"
    degree: int
    modulus: "tuple[int, ...] | None"

    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def axpy(self, c: int, x: Sequence[int], y: Sequence[int]) -> list[int]:
        """Return the vector y + c*x."""
        add, mul = self.add, self.mul
        return [add(b, mul(c, a)) for a, b in zip(x, y)]

    def scale(self, c: int, x: Sequence[int]) -> list[int]:
        mul = self.mul
        return [mul(c, a) for a in x]

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"GF({self.order})"


class PrimeField(Field):
    def __init__(self, p: int):
        self.order = self.char = p
        self.base = None
        self.degree = 1
        self.modulus = None

    def add(self, a, b):
        return (a + b) % self.order

    def sub(self, a, b):
        return (a - b) % self.order

    def mul(self, a, b):
        return a * b % self.order

    def neg(self, a):
        return -a % self.order

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.order - 2, self.order)

    def axpy(self, c, x, y):
        p = self.order
        if c == 0:
            return list(y)
        if p == 2:
            return [a ^ b for a, b in zip(x, y)]
        return [(b + c * a) % p for a, b in zip(x, y)]

    def scale(self, c, x):
        p = self.order
        return [c * a % p for a in x]


class ExtField(Field):
    """GF(q^m) built over a base field GF(q) from a monic irreducible modulus."""

    def __init__(self, base: Field, m: int, modulus: Sequence[int] | None = None):
        if m < 1:
            raise InvalidParams("extension degree must be >= 1")
        order = base.order**m
        if order > MAX_EXT_ORDER:
            raise InvalidParams(f"extension order {order} exceeds {MAX_EXT_ORDER}")
        if modulus is None:
            modulus = smallest_irreducible(base.order, m)
        modulus = tuple(modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise InvalidParams(f"modulus must be monic of degree {m}: {modulus}")
        if not is_irreducible(base, modulus):
            raise InvalidParams(f"modulus {modulus} is reducible over {base}")
        self.base = base
        self.degree = m
        self.modulus = modulus
        self.order = order
        self.char = base.char
        self._q = base.order
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add_t = self._mul_t = None
        if order <= _TABLE_ORDER:
            self._build_tables()

    def __repr__(self):
        return f"GF({self._q}^{self.degree})"

    # digit vectors ---------------------------------------------------------

    def digits(self, a: int) -> list[int]:
        q, out = self._q, []
        for _ in range(self.degree):
            a, d = divmod(a, q)
            out.append(d)
        return out

    def from_digits(self, ds: Sequence[int]) -> int:
        q, a = self._q, 0
        for d in reversed(ds):
            a = a * q + d
        return a

    # arithmetic ------------------------------------------------------------

    def _add_raw(self, a, b):
        if self.char == 2:
            return a ^ b
        badd = self.base.add
        return self.from_digits([badd(x, y) for x, y in zip(self.digits(a), self.digits(b))])

    def _neg_raw(self, a):
        if self.char == 2:
            return a
        bneg = self.base.neg
        return self.from_digits([bneg(x) for x in self.digits(a)])

    def _polymul(self, a: int, b: int) -> int:
        """Multiply by schoolbook polynomial arithmetic modulo the modulus."""
        m = self.degree
        if self._q == 2:
            mod_int = sum(c << i for i, c in enumerate(self.modulus))
            r = 0
            while b:
                if b & 1:
                    r ^= a
                b >>= 1
                a <<= 1
                if a >> m & 1:
                    a ^= mod_int
            return r
        B = self.base
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        for d in range(2 * m - 2, m - 1, -1):
            c = prod[d]
            if c:
                for j in range(m + 1):
                    prod[d - m + j] = B.sub(prod[d - m + j], B.mul(c, self.modulus[j]))
        return self.from_digits(prod[:m])

    def _polypow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._polymul(result, a)
            a = self._polymul(a, a)
            e >>= 1
        return result

    def primitive_element(self) -> int:
        n = self.order - 1
        factors = _prime_factors(n)
        for g in range(1, self.order):
            if all(self._polypow(g, n // p) != 1 for p in factors):
                return g
        raise AssertionError("multiplicative group is cyclic")  # pragma: no cover

    def _ensure_log(self):
        if self._exp is not None:
            return
        g = self.primitive_element()
        n = self.order - 1
        exp = [1] * n
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._polymul(x, g)
        self._exp, self._log = exp, log

    def _build_tables(self):
        self._ensure_log()
        Q = self.order
        self._add_t = [[self._add_raw(a, b) for b in range(Q)] for a in range(Q)]
        exp, log, n = self._exp, self._log, Q - 1
        mt = [[0] * Q for _ in range(Q)]
        for a in range(1, Q):
            la = log[a]
            row = mt[a]
            for b in range(1, Q):
                row[b] = exp[(la + log[b]) % n]
        self._mul_t = mt
        self._neg_t = [self._neg_raw(a) for a in range(Q)]

    def add(self, a, b):
        if self._add_t is not None:
            return self._add_t[a][b]
        return self._add_raw(a, b)

    def neg(self, a):
        if self._add_t is not None:
            return self._neg_t[a]
        return self._neg_raw(a)

    def mul(self, a, b):
        if self._mul_t is not None:
            return self._mul_t[a][b]
        if a == 0 or b == 0:
            return 0
        self._ensure_log()
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        self._ensure_log()
        return self._exp[-self._log[a] % (self.order - 1)]

    def axpy(self, c, x, y):
        if c == 0:
            return list(y)
        if self._mul_t is not None:
            mc = self._mul_t[c]
            if self.char == 2:
                return [b ^ mc[a] for a, b in zip(x, y)]
            at = self._add_t
            return [at[b][mc[a]] for a, b in zip(x, y)]
        return super().axpy(c, x, y)

    def frobenius(self, a: int, times: int = 1) -> int:
        """Apply a -> a^q the given number of times."""
        return self.pow(a, self._q**times)


@functools.lru_cache(maxsize=None)
def GF(q: int, modulus: tuple[int, ...] | None = None) -> Field:
    """Return the (cached) field of order q.

    Prime powers p**e with e > 1 are built over GF(p) from ``modulus`` or,
    by default, the smallest irreducible polynomial of degree e.
    """
    p, e = factor_prime_power(q)
    if e == 1:
        if modulus is not None:
            raise InvalidParams("a prime field takes no modulus")
        return PrimeField(p)
    return ExtField(GF(p), e, modulus)


@functools.lru_cache(maxsize=None)
def ext_field(q: int, m: int, modulus: tuple[int, ...] | None = None) -> ExtField:
    """Return GF(q^m) as a degree-m extension of GF(q)."""
    return ExtField(GF(q), m, modulus)


# polynomials over a field (coefficient lists, ascending degree) ---------------


def _poly_mod_is_zero(F: Field, a: Sequence[int], b: Sequence[int]) -> bool:
    """Whether the monic polynomial b divides a."""
    r = list(a)
    db = len(b) - 1
    for d in range(len(r) - 1, db - 1, -1):
        c = r[d]
        if c:
            for j in range(db + 1):
                r[d - db + j] = F.sub(r[d - db + j], F.mul(c, b[j]))
    return not any(r[:db])


def is_irreducible(F: Field, poly: Sequence[int]) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of degree <= deg/2."""
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(F.order), repeat=d):
            if _poly_mod_is_zero(F, poly, (*low, 1)):
                return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible(q: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over GF(q) with least sum(a_i * q**i), i < m."""
    if m < 1:
        raise InvalidParams("degree must be >= 1")
    F = GF(q)
    for code in range(q**m):
        low = []
        for _ in range(m):
            code, d = divmod(code, q)
            low.append(d)
        poly = (*low, 1)
        if is_irreducible(F, poly):
            return poly
    raise AssertionError("irreducible polynomials exist in every degree")  # pragma: no cover


def format_modulus(poly: Sequence[int]) -> str:
    terms = []
    for i in range(len(poly) - 1, -1, -1):
        c = poly[i]
        if not c:
            continue
        mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
        terms.append(mono if c == 1 or i == 0 and c == 1 else (f"{c}" if i == 0 else f"{c}*{mono}"))
    return " + ".join(terms) or "0"


# linear algebra ------------------------------------------------------------------


class Echelon(NamedTuple):
    matrix: list[list[int]]
    rank: int
    pivots: list[int]


def _rref_gf2(rows: Sequence[Sequence[int]], ncols: int) -> Echelon:
    packed = []
    for r in rows:
        v = 0
        for x in r:
            v = (v << 1) | (x & 1)
        packed.append(v)
    nrows = len(packed)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        bit = 1 << (ncols - 1 - c)
        i = next((i for i in range(r, nrows) if packed[i] & bit), None)
        if i is None:
            continue
        packed[r], packed[i] = packed[i], packed[r]
        pr = packed[r]
        for j in range(nrows):
            if j != r and packed[j] & bit:
                packed[j] ^= pr
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    R = [[(v >> (ncols - 1 - c)) & 1 for c in range(ncols)] for v in packed]
    return Echelon(R, r, pivots)


def rref(F: Field, rows: Sequence[Sequence[int]], ncols: int | None = None) -> Echelon:
    """Reduced row echelon form, rank and pivot columns of a matrix."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if F.order == 2:
        return _rref_gf2(rows, ncols)
    R = [list(r) for r in rows]
    nrows = len(R)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        i = next((i for i in range(r, nrows) if R[i][c]), None)
        if i is None:
            continue
        R[r], R[i] = R[i], R[r]
        lead = R[r][c]
        if lead != 1:
            R[r] = F.scale(F.inv(lead), R[r])
        pr = R[r]
        for j in range(nrows):
            if j != r and R[j][c]:
                R[j] = F.axpy(F.neg(R[j][c]), pr, R[j])
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return Echelon(R, r, pivots)


def rank(F: Field, rows: Sequence[Sequence[int]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    if F.order == 2:
        # xor basis keyed by leading bit; no back-substitution needed for the rank
        basis: dict[int, int] = {}
        for r in rows:
            v = 0
            for x in r:
                v = (v << 1) | x
            while v:
                top = v.bit_length()
                b = basis.get(top)
                if b is None:
                    basis[top] = v
                    break
                v ^= b
        return len(basis)
    return rref(F, rows, ncols).rank


def transpose(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*rows)]


def matmul(F: Field, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Product of an a x b and a b x c matrix."""
    if ncols is None:
        ncols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * ncols
        for x, brow in zip(row, B):
            if x:
                acc = F.axpy(x, brow, acc)
        out.append(acc)
    return out


def kernel(F: Field, rows: Sequence[Sequence[int]], ncols: int) -> "Subspace":
    """Right null space {v : M v = 0} as a subspace of F^ncols."""
    R, rk, pivots = rref(F, rows, ncols) if rows else Echelon([], 0, [])
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [0] * ncols
        v[f] = 1
        for j, p in enumerate(pivots):
            if R[j][f]:
                v[p] = F.neg(R[j][f])
        basis.append(v)
    return Subspace.from_rows(F, basis, ncols)


def colspace(F: Field, rows: Sequence[Sequence[int]], nrows: int | None = None) -> "Subspace":
    """Column span of an n x m matrix as a subspace of F^n."""
    n = len(rows) if nrows is None else nrows
    return Subspace.from_rows(F, transpose(rows), n)


def gamma_expand(E: ExtField, x: Sequence[int]) -> list[list[int]]:
    """The n x m matrix over the base field whose i-th row holds the coordinates of x_i."""
    return [E.digits(v) for v in x]


def vector_rank(E: ExtField, x: Sequence[int]) -> int:
    return rank(E.base, gamma_expand(E, x), E.degree)


# subspaces -----------------------------------------------------------------------


class Subspace:
    """A subspace of F^n stored by its canonical RREF basis.

    Two instances are equal exactly when they describe the same set of
    vectors; ``key`` is a byte string usable for ordering and memoisation.
    ``<=`` is inclusion, ``+`` the sum and ``&`` the intersection.
    """

    __slots__ = ("field", "n", "basis", "pivots", "_hash", "_key")

    def __init__(self, field: Field, n: int, basis: tuple[tuple[int, ...], ...], pivots: tuple[int, ...]):
        # trusted constructor: basis must already be RREF without zero rows
        self.field = field
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self._hash = hash((field.order, n, basis))
        self._key = None

    @classmethod
    def from_rows(cls, F: Field, rows: Sequence[Sequence[int]], n: int) -> "Subspace":
        if not rows:
            return cls(F, n, (), ())
        R, rk, piv = rref(F, rows, n)
        return cls(F, n, tuple(tuple(r) for r in R[:rk]), tuple(piv))

    @classmethod
    def zero(cls, F: Field, n: int) -> "Subspace":
        return cls(F, n, (), ())

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        rows = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(F, n, rows, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def key(self) -> bytes:
        if self._key is None:
            width = max(1, ((self.field.order - 1).bit_length() + 7) // 8)
            flat = [x for row in self.basis for x in row]
            self._key = self.n.to_bytes(2, "big") + b"".join(x.to_bytes(width, "big") for x in flat)
        return self._key

    def sort_key(self) -> tuple[int, bytes]:
        return (self.dim, self.key)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis and self.field.order == other.field.order

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace({self.short()})"

    def short(self) -> str:
        if self.field.order <= 10:
            rows = ["".join(map(str, r)) for r in self.basis]
        else:
            rows = [",".join(map(str, r)) for r in self.basis]
        return "<" + ";".join(rows) + ">" if rows else "<0>"

    def render(self) -> str:
        """One basis row per line, entries separated by single spaces."""
        return "\n".join(" ".join(map(str, r)) for r in self.basis)

    def reduce(self, v: Sequence[int]) -> list[int]:
        """Remainder of v after elimination against the basis pivots."""
        F = self.field
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c:
                v = F.axpy(F.neg(c), row, v)
        return v

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __le__(self, other: "Subspace") -> bool:
        if self.dim > other.dim:
            return False
        return all(other.contains(r) for r in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def __add__(self, other: "Subspace") -> "Subspace":
        if not other.basis:
            return self
        if not self.basis:
            return other
        return Subspace.from_rows(self.field, list(self.basis) + list(other.basis), self.n)

    def __and__(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.n)
        return (self.perp() + other.perp()).perp()

    def perp(self) -> "Subspace":
        """Orthogonal complement for the standard dot product."""
        return kernel(self.field, self.basis, self.n)

    def vectors(self):
        """Iterate over every vector of the subspace."""
        F, n = self.field, self.n
        for coeffs in itertools.product(range(F.order), repeat=self.dim):
            v = [0] * n
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = F.axpy(c, row, v)
            yield tuple(v)

    def matrix(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


def orth_complement(U: Subspace) -> Subspace:
    return U.perp()


def parse_row(token: str, q: int) -> list[int]:
    """Parse '101' (single digits, q <= 10) or '1,0,12' into a vector."""
    if "," in token or " " in token.strip():
        return [int(t) for t in token.replace(",", " ").split()]
    return [int(ch) for ch in token]
