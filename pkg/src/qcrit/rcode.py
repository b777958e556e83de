"""Rank-metric codes in matrix form and in vector form.

A :class:`MatrixCode` is an F_q-linear space of n x m matrices stored by a
basis; a :class:`VectorCode` is an F_{q^m}-linear subspace of F_{q^m}^n stored
by a generator matrix.  Codewords are only ever listed by the explicit,
capped :func:`codewords` enumeration.

The support of a matrix is its column space in F_q^n; the support of a
vector x is the support of its coordinate expansion.  For a subspace U of
F_q^n the shortening C_U collects the codewords whose support lies in U^perp.
"""

from __future__ import annotations

import warnings
from dataclasses import asdict, dataclass
from math import ceil
from pathlib import Path
from typing import Iterator, Sequence

from qcrit.errors import InconsistencyError, InvalidIndexSet, InvalidParams, ParseError, ResourceLimit, SingularMatrix
from qcrit.gf import (
    GF,
    ExtField,
    Field,
    Subspace,
    colspace,
    ext_field,
    gamma_expand,
    kernel,
    matmul,
    rank,
    rref,
    smallest_irreducible,
    transpose,
)
from qcrit.lattice import SubspaceLattice

Matrix = tuple[tuple[int, ...], ...]

ENUMERATION_CAP = 2**20


def _xor_rank(vecs: Sequence[int]) -> int:
    basis: dict[int, int] = {}
    for v in vecs:
        while v:
            top = v.bit_length()
            b = basis.get(top)
            if b is None:
                basis[top] = v
                break
            v ^= b
    return len(basis)


def _flatten(X: Sequence[Sequence[int]]) -> list[int]:
    return [x for row in X for x in row]


def _reshape(v: Sequence[int], n: int, m: int) -> Matrix:
    return tuple(tuple(v[i * m : (i + 1) * m]) for i in range(n))


def _independent_subset(F: Field, vecs: list[list[int]], ncols: int) -> list[int]:
    """Indices of a greedy maximal independent subset, in input order."""
    keep: list[int] = []
    span = Subspace.zero(F, ncols)
    for i, v in enumerate(vecs):
        if not span.contains(v):
            keep.append(i)
            span = span + Subspace.from_rows(F, [v], ncols)
    return keep


class MatrixCode:
    """F_q-span of n x m generator matrices."""

    kind = "matrix"

    def __init__(self, q: int, n: int, m: int, generators: Sequence[Sequence[Sequence[int]]], *, quiet: bool = False):
        self.field = GF(q)
        self.q, self.n, self.m = q, n, m
        gens = []
        for G in generators:
            if len(G) != n or any(len(row) != m for row in G):
                raise InvalidParams(f"generator is not {n} x {m}")
            if any(not 0 <= x < q for row in G for x in row):
                raise InvalidParams("generator entry outside the field")
            gens.append(tuple(tuple(row) for row in G))
        flats = [_flatten(G) for G in gens]
        keep = _independent_subset(self.field, flats, n * m)
        if len(keep) < len(gens):
            if not quiet:
                warnings.warn(
                    f"{len(gens)} generators span only a {len(keep)}-dimensional code; re-based",
                    stacklevel=2,
                )
            gens = [gens[i] for i in keep]
        self.generators: tuple[Matrix, ...] = tuple(gens)
        self.k = len(gens)
        self._rho: dict[bytes, int] = {}
        if q == 2:
            self._packed = [[_pack_bits(row) for row in G] for G in gens]

    def __repr__(self):
        return f"MatrixCode(q={self.q}, [{self.n}x{self.m}, {self.k}])"

    @property
    def k_fq(self) -> int:
        return self.k

    def flattened(self) -> list[list[int]]:
        return [_flatten(G) for G in self.generators]

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        """Reduced row echelon form of the flattened generators; equal codes give equal values."""
        if not self.k:
            return ()
        R, rk, _ = rref(self.field, self.flattened(), self.n * self.m)
        return tuple(tuple(r) for r in R[:rk])

    def same_code(self, other: "MatrixCode") -> bool:
        return (self.q, self.n, self.m) == (other.q, other.n, other.m) and self.canonical() == other.canonical()

    def rho(self, U: Subspace) -> int:
        """k - dim C_U, the rank of the stacked products B_U G_i."""
        if U.dim == 0 or self.k == 0:
            return 0
        key = U.key
        v = self._rho.get(key)
        if v is not None:
            return v
        if self.q == 2:
            m = self.m
            masks = [_pack_bits(b) for b in U.basis]
            vecs = []
            for rows in self._packed:
                acc = 0
                n = len(rows)
                for bm in masks:
                    s = 0
                    for j in range(n):
                        if bm >> (n - 1 - j) & 1:
                            s ^= rows[j]
                    acc = (acc << m) | s
                vecs.append(acc)
            v = _xor_rank(vecs)
        else:
            v = rank(self.field, self._products(U), U.dim * self.m)
        self._rho[key] = v
        return v

    def _products(self, U: Subspace) -> list[list[int]]:
        B = U.matrix()
        return [_flatten(matmul(self.field, B, G, self.m)) for G in self.generators]

    def shorten(self, U: Subspace) -> "MatrixCode":
        """The subcode C_U of words whose column space lies in U^perp."""
        if U.dim == 0:
            return self
        if self.k == 0:
            return self
        M = self._products(U)
        coeffs = kernel(self.field, transpose(M), self.k)
        F = self.field
        gens = []
        for c in coeffs.basis:
            acc = [0] * (self.n * self.m)
            for ci, G in zip(c, self.flattened()):
                if ci:
                    acc = F.axpy(ci, G, acc)
            gens.append(_reshape(acc, self.n, self.m))
        return MatrixCode(self.q, self.n, self.m, gens)

    def shortened_dim(self, U: Subspace) -> int:
        return self.k - self.rho(U)

    def to_matrix_code(self) -> "MatrixCode":
        return self


def _pack_bits(row: Sequence[int]) -> int:
    v = 0
    for x in row:
        v = (v << 1) | x
    return v


def _alpha(E: ExtField) -> int:
    """The class of x in the polynomial basis (for m == 1 this is the root of the linear modulus)."""
    if E.degree == 1:
        return E.neg(E.modulus[0])
    return E.base.order


class VectorCode:
    """F_{q^m}-span of the rows of a k x n generator matrix."""

    kind = "vector"

    def __init__(self, ext: ExtField, n: int, G: Sequence[Sequence[int]], *, quiet: bool = False):
        self.ext = ext
        self.field = ext.base
        self.q = ext.base.order
        self.m = ext.degree
        self.n = n
        rows = []
        for r in G:
            if len(r) != n or any(not 0 <= x < ext.order for x in r):
                raise InvalidParams(f"generator row must have {n} entries in [0, {ext.order})")
            rows.append(tuple(r))
        keep = _independent_subset(ext, [list(r) for r in rows], n)
        if len(keep) < len(rows):
            if not quiet:
                warnings.warn(f"{len(rows)} rows span only dimension {len(keep)}; re-based", stacklevel=2)
            rows = [rows[i] for i in keep]
        self.G: Matrix = tuple(rows)
        self.k = len(rows)
        self._rho: dict[bytes, int] = {}

    def __repr__(self):
        return f"VectorCode(GF({self.q}^{self.m}), [{self.n}, {self.k}])"

    @property
    def k_fq(self) -> int:
        return self.k * self.m

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        if not self.k:
            return ()
        R, rk, _ = rref(self.ext, self.G, self.n)
        return tuple(tuple(r) for r in R[:rk])

    def same_code(self, other: "VectorCode") -> bool:
        return (
            self.ext.order == other.ext.order
            and self.ext.modulus == other.ext.modulus
            and self.n == other.n
            and self.canonical() == other.canonical()
        )

    def rho(self, W: Subspace) -> int:
        """Rank over F_{q^m} of G times a basis of W written as columns."""
        if W.dim == 0 or self.k == 0:
            return 0
        key = W.key
        v = self._rho.get(key)
        if v is None:
            prod = matmul(self.ext, self.G, transpose(W.matrix()), W.dim)
            v = rank(self.ext, prod, W.dim)
            self._rho[key] = v
        return v

    def to_matrix_code(self) -> MatrixCode:
        """F_q-span of the coordinate expansions of alpha^j times each generator row."""
        E = self.ext
        a = _alpha(E)
        gens = []
        for row in self.G:
            s = 1
            for _ in range(self.m):
                gens.append(gamma_expand(E, [E.mul(s, x) for x in row]))
                s = E.mul(s, a)
        return MatrixCode(self.q, self.n, self.m, gens)

    def shortened_dim(self, W: Subspace) -> int:
        return self.k - self.rho(W)


Code = MatrixCode | VectorCode


# supports ---------------------------------------------------------------------------


def supp_word(X: Sequence[Sequence[int]], q: int = 2) -> Subspace:
    """Column space of an n x m matrix over F_q."""
    return colspace(GF(q), X, len(X))


def supp_vector(E: ExtField, x: Sequence[int]) -> Subspace:
    return colspace(E.base, gamma_expand(E, x), len(x))


def supp_code(C: Code) -> Subspace:
    """Sum of the supports of a generating set."""
    F = C.field
    rows: list = []
    if isinstance(C, MatrixCode):
        for G in C.generators:
            rows.extend(transpose(G))
    else:
        for r in C.G:
            rows.extend(transpose(gamma_expand(C.ext, r)))
    return Subspace.from_rows(F, rows, C.n)


def q_system(C: VectorCode) -> Subspace:
    """F_q-span of the columns of G, each column expanded to a vector in F_q^(mk)."""
    E = C.ext
    cols = []
    for j in range(C.n):
        v: list[int] = []
        for i in range(C.k):
            v.extend(E.digits(C.G[i][j]))
        cols.append(v)
    return Subspace.from_rows(E.base, cols, C.m * C.k)


def is_nondegenerate(C: Code) -> bool:
    full = supp_code(C).dim == C.n
    if isinstance(C, VectorCode):
        by_columns = q_system(C).dim == C.n
        if by_columns != full:
            raise InconsistencyError("support sum and column-span tests disagree on non-degeneracy")
    return full


# support counts -------------------------------------------------------------------------


def count_exact_support(C: Code, V: Subspace, exhaustive: bool = False) -> int:
    """Number of codewords whose support is exactly V.

    Inclusion-exclusion over the subspaces W of V of the number
    |C_{W^perp}| = Q^(dim C_{W^perp}) of codewords supported inside W, where
    Q is q for matrix codes and q^m for vector codes.
    """
    if exhaustive:
        return sum(1 for X in codewords(C) if supp_word(X, C.q) == V)
    L = SubspaceLattice(C.q, C.n)
    Q = C.q if isinstance(C, MatrixCode) else C.q**C.m
    total = 0
    v = V.dim
    for W in L.elements(L.bottom(), V):
        total += L.mobius_by_gap(v - W.dim) * Q ** C.shortened_dim(W.perp())
    return total


# duals and puncturing ---------------------------------------------------------------------


def dual(C: Code) -> Code:
    """Trace-dual (flattened dot product) of a matrix code, dot-product dual of a vector code."""
    if isinstance(C, MatrixCode):
        nm = C.n * C.m
        K = kernel(C.field, C.flattened(), nm) if C.k else Subspace.full(C.field, nm)
        return MatrixCode(C.q, C.n, C.m, [_reshape(v, C.n, C.m) for v in K.basis])
    K = kernel(C.ext, C.G, C.n) if C.k else Subspace.full(C.ext, C.n)
    return VectorCode(C.ext, C.n, K.basis)


def puncture(C: Code, A: Sequence[Sequence[int]], I: Sequence[int]) -> Code:
    """Apply the invertible F_q-matrix A and delete the coordinates in I (0-based).

    Matrix codes: rows of A X are deleted.  Vector codes: entries of c A are
    deleted.  The result is re-based, so its dimension can drop.
    """
    n = C.n
    idx = sorted(set(I))
    if len(idx) != len(I) or not idx or len(idx) >= n or idx[0] < 0 or idx[-1] >= n:
        raise InvalidIndexSet(f"index set {list(I)} must be a proper nonempty subset of 0..{n - 1}")
    F = C.field
    if len(A) != n or any(len(r) != n for r in A) or any(not 0 <= x < F.order for r in A for x in r):
        raise SingularMatrix(f"A must be an invertible {n} x {n} matrix over GF({F.order})")
    if rank(F, A, n) != n:
        raise SingularMatrix("A is singular")
    keep = [i for i in range(n) if i not in idx]
    if isinstance(C, MatrixCode):
        gens = []
        for G in C.generators:
            AG = matmul(F, A, G, C.m)
            gens.append([AG[i] for i in keep])
        return MatrixCode(C.q, len(keep), C.m, gens, quiet=True)
    GA = matmul(C.ext, C.G, A, n)
    return VectorCode(C.ext, len(keep), [[row[j] for j in keep] for row in GA], quiet=True)


# enumeration and distances -------------------------------------------------------------------


def _trailing_digits(s: int, q: int) -> int:
    i = 0
    while s % q == 0:
        s //= q
        i += 1
    return i


def codewords(C: Code, cap: int = ENUMERATION_CAP) -> Iterator[Matrix]:
    """Every codeword as an n x m matrix, in modular Gray-code order of the coefficients."""
    M = C.to_matrix_code()
    q, k, n, m = M.q, M.k, M.n, M.m
    total = q**k
    if total > cap:
        raise ResourceLimit(f"code has {total} words, enumeration cap is {cap}")
    if q == 2:
        gens = [int("".join(map(str, _flatten(G))) or "0", 2) for G in M.generators]
        word = 0
        mask = (1 << m) - 1
        for s in range(total):
            if s:
                word ^= gens[_trailing_digits(s, 2)]
            yield _unpack(word, n, m, mask)
        return
    F = M.field
    flats = M.flattened()
    word = [0] * (n * m)
    for s in range(total):
        if s:
            word = F.axpy(1, flats[_trailing_digits(s, q)], word)
        yield _reshape(word, n, m)


def _unpack(word: int, n: int, m: int, mask: int) -> Matrix:
    rows = []
    for i in range(n):
        r = (word >> ((n - 1 - i) * m)) & mask
        rows.append(tuple((r >> (m - 1 - j)) & 1 for j in range(m)))
    return tuple(rows)


def _word_ranks(C: Code, cap: int) -> Iterator[int]:
    M = C.to_matrix_code()
    q, k, n, m = M.q, M.k, M.n, M.m
    total = q**k
    if total > cap:
        raise ResourceLimit(f"code has {total} words, enumeration cap is {cap}")
    if q == 2:
        gens = [int("".join(map(str, _flatten(G))) or "0", 2) for G in M.generators]
        mask = (1 << m) - 1
        shifts = [(n - 1 - i) * m for i in range(n)]
        word = 0
        for s in range(total):
            if s:
                word ^= gens[_trailing_digits(s, 2)]
            yield _xor_rank([(word >> sh) & mask for sh in shifts])
        return
    for X in codewords(M, cap):
        yield rank(M.field, X, m)


def weight_distribution(C: Code, cap: int = ENUMERATION_CAP) -> list[int]:
    """Counts W_0, ..., W_min(n,m) of codewords by rank."""
    W = [0] * (min(C.n, C.m) + 1)
    for r in _word_ranks(C, cap):
        W[r] += 1
    return W


def min_distance(C: Code, cap: int = ENUMERATION_CAP) -> int | None:
    """Least rank of a nonzero codeword; None for the zero code."""
    W = weight_distribution(C, cap)
    return next((i for i in range(1, len(W)) if W[i]), None)


@dataclass(frozen=True)
class Classification:
    n: int
    m: int
    k: int
    d: int | None
    d_dual: int | None
    singleton_bound: int | None
    singleton_defect: int | None
    is_MRD: bool
    is_QMRD: bool
    is_DQMRD: bool
    is_1BMD: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _is_mrd(n, m, k, d) -> bool:
    big, small = max(n, m), min(n, m)
    return d is not None and k % big == 0 and d == small - k // big + 1


def _is_qmrd(n, m, k, d) -> bool:
    big, small = max(n, m), min(n, m)
    return d is not None and k % big != 0 and d == small - ceil(k / big) + 1


def classify(C: Code, cap: int = ENUMERATION_CAP) -> Classification:
    """Singleton defect and MRD / QMRD / DQMRD / 1-BMD flags, using F_q-dimensions."""
    n, m, k = C.n, C.m, C.k_fq
    D = dual(C)
    d = min_distance(C, cap)
    dd = min_distance(D, cap)
    big, small = max(n, m), min(n, m)
    bound = big * (small - d + 1) if d is not None else None
    qmrd = _is_qmrd(n, m, k, d)
    # the zero code has no nonzero word; treat its distance as min(n, m) + 1
    d_eff = small + 1 if d is None else d
    dd_eff = small + 1 if dd is None else dd
    return Classification(
        n=n,
        m=m,
        k=k,
        d=d,
        d_dual=dd,
        singleton_bound=bound,
        singleton_defect=None if bound is None else bound - k,
        is_MRD=_is_mrd(n, m, k, d),
        is_QMRD=qmrd,
        is_DQMRD=qmrd and _is_qmrd(n, m, n * m - k, dd),
        is_1BMD=d is not None and small - d_eff < dd_eff,
    )


# generators -------------------------------------------------------------------------------


def gabidulin(q: int, m: int, n: int, k: int, modulus: Sequence[int] | None = None) -> VectorCode:
    """Vector code with G[i][j] = g_j^(q^i), g_j = alpha^j."""
    if not 1 <= n <= m:
        raise InvalidParams("Gabidulin codes need 1 <= n <= m")
    if not 1 <= k <= n:
        raise InvalidParams("Gabidulin codes need 1 <= k <= n")
    E = ext_field(q, m, None if modulus is None else tuple(modulus))
    a = _alpha(E)
    g = [E.pow(a, j) for j in range(n)]
    G = [[E.pow(x, q**i) for x in g] for i in range(k)]
    return VectorCode(E, n, G)


def simplex(q: int, m: int, k: int, modulus: Sequence[int] | None = None) -> VectorCode:
    """[mk, k] one-weight code: row i carries 1, alpha, ..., alpha^(m-1) in block i."""
    if k < 2 or m < 1:
        raise InvalidParams("simplex codes need k >= 2 and m >= 1")
    E = ext_field(q, m, None if modulus is None else tuple(modulus))
    a = _alpha(E)
    block = [E.pow(a, j) for j in range(m)]
    G = []
    for i in range(k):
        row = [0] * (m * k)
        row[i * m : (i + 1) * m] = block
        G.append(row)
    return VectorCode(E, m * k, G)


# file format -------------------------------------------------------------------------------


def dump_code(C: Code, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines += [f"# {ln}" for ln in comment.splitlines()]
    if isinstance(C, MatrixCode):
        lines += ["kind: matrix", f"q: {C.q}", f"n: {C.n}", f"m: {C.m}", f"k: {C.k}"]
        for G in C.generators:
            lines.append("generator:")
            lines += [" ".join(map(str, row)) for row in G]
    else:
        lines += [
            "kind: vector",
            f"q: {C.q}",
            f"m: {C.m}",
            "modulus: " + " ".join(map(str, C.ext.modulus)),
            f"n: {C.n}",
            f"k: {C.k}",
        ]
        lines += ["row: " + " ".join(map(str, r)) for r in C.G]
    return "\n".join(lines) + "\n"


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError as exc:
        raise ParseError(f"{what}: expected integers, got {text!r}") from exc


def parse_code(text: str, base_dir: str | Path | None = None) -> Code:
    """Parse the line-oriented code format.

    A ``dual-of:`` line with no value means the file describes the code
    whose dual is wanted; with a path value the referenced file (relative to
    ``base_dir``) is loaded and dualised instead.
    """
    header: dict[str, str] = {}
    blocks: list[list[list[int]]] = []
    rows: list[list[int]] = []
    dual_flag = False
    dual_ref: str | None = None
    current: list[list[int]] | None = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, _, val = line.partition(":")
            key, val = key.strip().lower(), val.strip()
            if key == "generator":
                current = []
                blocks.append(current)
            elif key == "row":
                rows.append(_ints(val, f"line {lineno}"))
                current = None
            elif key == "dual-of":
                if val and val.lower() not in ("true", "yes", "self"):
                    dual_ref = val
                else:
                    dual_flag = True
            elif key in ("kind", "q", "n", "m", "k", "modulus"):
                if key in header:
                    raise ParseError(f"line {lineno}: duplicate key {key!r}")
                header[key] = val
            else:
                raise ParseError(f"line {lineno}: unknown key {key!r}")
            continue
        if current is None:
            raise ParseError(f"line {lineno}: matrix row outside a generator block")
        current.append(_ints(line, f"line {lineno}"))

    if dual_ref is not None:
        if header or blocks or rows:
            raise ParseError("a 'dual-of: <path>' file must not define its own code")
        ref = Path(base_dir or ".") / dual_ref
        try:
            inner = ref.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read {ref}: {exc}") from exc
        return dual(parse_code(inner, ref.parent))

    kind = header.get("kind")
    try:
        q = int(header["q"])
        n = int(header["n"])
        m = int(header["m"])
        k = int(header["k"])
    except KeyError as exc:
        raise ParseError(f"missing header key {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ParseError(f"bad header value: {exc}") from exc
    try:
        if kind == "matrix":
            if len(blocks) != k:
                raise ParseError(f"k = {k} but {len(blocks)} generator blocks found")
            for b in blocks:
                if len(b) != n or any(len(r) != m for r in b):
                    raise ParseError(f"each generator must be {n} lines of {m} entries")
            C: Code = MatrixCode(q, n, m, blocks)
        elif kind == "vector":
            mod = tuple(_ints(header["modulus"], "modulus")) if "modulus" in header else None
            if len(rows) != k:
                raise ParseError(f"k = {k} but {len(rows)} rows found")
            E = ext_field(q, m, mod if mod != smallest_irreducible(q, m) else None)
            C = VectorCode(E, n, rows)
        else:
            raise ParseError(f"kind must be 'matrix' or 'vector', got {kind!r}")
    except InvalidParams as exc:
        raise ParseError(str(exc)) from exc
    return dual(C) if dual_flag else C


def load_code(path: str | Path) -> Code:
    p = Path(path)
    return parse_code(p.read_text(encoding="utf-8"), p.parent)
