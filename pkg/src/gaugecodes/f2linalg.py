"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are packed 64 coordinates per ``uint64`` word,
little-endian within each word (coordinate ``j`` lives in bit ``j % 64`` of
word ``j // 64``).  Row reduction always picks the leftmost pivot column and
the topmost available row, so every basis returned here is canonical.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

WORD = 64
_ONE = np.uint64(1)


def _nwords(length: int) -> int:
    return (length + WORD - 1) // WORD


def _pack(bits: np.ndarray, length: int) -> np.ndarray:
    """Pack a (..., length) 0/1 array into (..., nwords) uint64."""
    bits = np.asarray(bits, dtype=np.uint8) & 1
    nw = _nwords(length)
    pad = nw * WORD - length
    if pad:
        widths = [(0, 0)] * (bits.ndim - 1) + [(0, pad)]
        bits = np.pad(bits, widths)
    packed = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(bits.shape[:-1] + (nw,))


def _unpack(words: np.ndarray, length: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64)
    as_bytes = words.view(np.uint8).reshape(words.shape[:-1] + (words.shape[-1] * 8,))
    return np.unpackbits(as_bytes, axis=-1, count=length, bitorder="little")


def _popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


class BitVec:
    """Immutable GF(2) vector of fixed length."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        self.length = int(length)
        if words is None:
            words = np.zeros(_nwords(self.length), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64, copy=True)
            if words.shape != (_nwords(self.length),):
                raise ValueError("word array does not match length %d" % self.length)
            tail = self.length % WORD
            if tail and words.size:
                words[-1] &= np.uint64((1 << tail) - 1)
        words.setflags(write=False)
        self.words = words

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVec":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits, dtype=np.uint8)
        return cls(arr.size, _pack(arr, arr.size))

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> "BitVec":
        bits = np.zeros(length, dtype=np.uint8)
        for i in indices:
            if not 0 <= i < length:
                raise IndexError("index %d out of range for length %d" % (i, length))
            bits[i] ^= 1
        return cls(length, _pack(bits, length))

    @classmethod
    def from_string(cls, s: str) -> "BitVec":
        """Parse ``'0110'`` style strings (coordinate 0 first)."""
        return cls.from_bits(int(ch) for ch in s.strip())

    def to_bits(self) -> np.ndarray:
        return _unpack(self.words, self.length)

    def indices(self) -> list[int]:
        return np.flatnonzero(self.to_bits()).tolist()

    def weight(self) -> int:
        return int(_popcount(self.words)) if self.words.size else 0

    def is_zero(self) -> bool:
        return not self.words.any()

    def dot(self, other: "BitVec") -> int:
        self._check(other)
        return int(_popcount(self.words & other.words)) & 1 if self.words.size else 0

    def _check(self, other: "BitVec") -> None:
        if not isinstance(other, BitVec) or other.length != self.length:
            raise ValueError("length mismatch")

    def __add__(self, other: "BitVec") -> "BitVec":
        self._check(other)
        return BitVec(self.length, self.words ^ other.words)

    __xor__ = __add__
    __sub__ = __add__

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((self.words[i // WORD] >> np.uint64(i % WORD)) & _ONE)

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BitVec)
            and other.length == self.length
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def __str__(self) -> str:
        return "".join(map(str, self.to_bits()))

    def __repr__(self) -> str:
        return "BitVec('%s')" % self


class F2Matrix:
    """Immutable GF(2) matrix stored as packed rows."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        nw = _nwords(self.cols)
        if data is None:
            data = np.zeros((self.rows, nw), dtype=np.uint64)
        else:
            data = np.array(data, dtype=np.uint64, copy=True).reshape(self.rows, nw)
            tail = self.cols % WORD
            if tail and nw:
                data[:, -1] &= np.uint64((1 << tail) - 1)
        data.setflags(write=False)
        self.data = data

    @classmethod
    def from_dense(cls, array) -> "F2Matrix":
        arr = np.asarray(array, dtype=np.uint8) & 1
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls(arr.shape[0], arr.shape[1], _pack(arr, arr.shape[1]))

    @classmethod
    def from_rows(cls, rows: Sequence[BitVec], cols: int | None = None) -> "F2Matrix":
        if not rows:
            if cols is None:
                raise ValueError("cols required for an empty row list")
            return cls(0, cols)
        cols = rows[0].length if cols is None else cols
        for r in rows:
            if r.length != cols:
                raise ValueError("all rows must have length %d" % cols)
        return cls(len(rows), cols, np.stack([r.words for r in rows]))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "F2Matrix":
        return cls.from_rows([BitVec.from_string(r) for r in rows])

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols)

    def to_dense(self) -> np.ndarray:
        return _unpack(self.data, self.cols)

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.data[i])

    def row_list(self) -> list[BitVec]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "F2Matrix":
        return F2Matrix.from_dense(self.to_dense().T)

    def matvec(self, v: BitVec) -> BitVec:
        if v.length != self.cols:
            raise ValueError("vector length %d != cols %d" % (v.length, self.cols))
        if self.rows == 0:
            return BitVec(0)
        parity = _popcount(self.data & v.words) & 1 if self.data.shape[1] else np.zeros(self.rows, int)
        return BitVec.from_bits(parity.astype(np.uint8))

    def __matmul__(self, other):
        if isinstance(other, BitVec):
            return self.matvec(other)
        if not isinstance(other, F2Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        # float32 is exact for inner dimensions below 2**24
        a = self.to_dense().astype(np.float32)
        b = other.to_dense().astype(np.float32)
        prod = (a @ b).astype(np.int64) & 1
        return F2Matrix.from_dense(prod)

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return F2Matrix(self.rows, self.cols, self.data ^ other.data)

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return F2Matrix(self.rows + other.rows, self.cols, np.vstack([self.data, other.data]))

    def hstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return F2Matrix.from_dense(np.hstack([self.to_dense(), other.to_dense()]))

    def select_columns(self, columns: Sequence[int]) -> "F2Matrix":
        return F2Matrix.from_dense(self.to_dense()[:, list(columns)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.shape == other.shape
            and np.array_equal(self.data, other.data)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self) -> str:
        return "F2Matrix(%d x %d)" % self.shape

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.row_list())


class InconsistentSystem(ValueError):
    """Raised by :func:`solve` when ``M x = b`` has no solution.

    ``certificate`` is a row combination ``c`` with ``c^T M = 0`` and
    ``c . b = 1``.
    """

    def __init__(self, certificate: BitVec):
        super().__init__("system is inconsistent")
        self.certificate = certificate


class SubspaceError(ValueError):
    """Raised when a claimed subspace inclusion fails; ``vector`` is a witness."""

    def __init__(self, message: str, vector: BitVec):
        super().__init__(message)
        self.vector = vector


def _rref_data(data: np.ndarray, ncols: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(data, dtype=np.uint64, copy=True)
    nrows = A.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c // WORD
        mask = _ONE << np.uint64(c % WORD)
        below = np.flatnonzero(A[r:, w] & mask)
        if below.size == 0:
            continue
        p = r + int(below[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
        hits = np.flatnonzero(A[:, w] & mask)
        hits = hits[hits != r]
        if hits.size:
            # pivot row is zero left of column c
            A[hits, w:] ^= A[r, w:]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref(M: F2Matrix) -> tuple[F2Matrix, list[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    R, pivots = _rref_data(M.data, M.cols)
    return F2Matrix(len(pivots), M.cols, R), pivots


def rank(M: F2Matrix) -> int:
    return len(_rref_data(M.data, M.cols)[1])


def _as_matrix(vectors: Sequence[BitVec], length: int) -> F2Matrix:
    return F2Matrix.from_rows(list(vectors), cols=length)


def span_rank(vectors: Sequence[BitVec], length: int | None = None) -> int:
    if not vectors:
        return 0
    return rank(_as_matrix(vectors, vectors[0].length if length is None else length))


def row_basis(vectors: Sequence[BitVec], length: int) -> list[BitVec]:
    """Canonical (rref) basis of the span of ``vectors``."""
    if not vectors:
        return []
    return rref(_as_matrix(vectors, length))[0].row_list()


def kernel_basis(M: F2Matrix) -> list[BitVec]:
    """Basis of ``{x : M x = 0}``, one vector per free column, in column order."""
    R, pivots = rref(M)
    n = M.cols
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    if not free:
        return []
    K = np.zeros((len(free), n), dtype=np.uint8)
    K[np.arange(len(free)), free] = 1
    if pivots:
        dense = R.to_dense()
        K[:, pivots] = dense[:, free].T
    packed = _pack(K, n)
    return [BitVec(n, packed[i]) for i in range(len(free))]


def kernel_matrix(M: F2Matrix) -> F2Matrix:
    return F2Matrix.from_rows(kernel_basis(M), cols=M.cols)


def solve(M: F2Matrix, b: BitVec) -> BitVec:
    """Return one ``x`` with ``M x = b``.

    Free variables are set to zero, so the answer is canonical.  Raises
    :class:`InconsistentSystem` carrying a certificate otherwise.
    """
    if b.length != M.rows:
        raise ValueError("rhs length %d != rows %d" % (b.length, M.rows))
    aug = np.hstack([M.to_dense(), b.to_bits()[:, None]])
    R, pivots = _rref_data(_pack(aug, M.cols + 1), M.cols + 1)
    if pivots and pivots[-1] == M.cols:
        for c in kernel_basis(M.T):
            if c.dot(b):
                raise InconsistentSystem(c)
        raise AssertionError("no certificate found for an inconsistent system")
    dense = _unpack(R, M.cols + 1)
    x = np.zeros(M.cols, dtype=np.uint8)
    x[pivots] = dense[:, M.cols]
    return BitVec.from_bits(x)


def orthogonal_complement(B: Sequence[BitVec], G: F2Matrix) -> list[BitVec]:
    """Basis of ``{v : b^T G v = 0 for all b in B}``."""
    if G.rows != G.cols:
        raise ValueError("Gram matrix must be square")
    for b in B:
        if b.length != G.rows:
            raise ValueError("vector length %d != form size %d" % (b.length, G.rows))
    if not B:
        return [BitVec.from_indices(G.cols, [i]) for i in range(G.cols)]
    rows = _as_matrix(B, G.rows) @ G
    return kernel_basis(rows)


def reduce_against(R: F2Matrix, pivots: Sequence[int], v: BitVec) -> BitVec:
    """Reduce ``v`` by the rref rows ``R`` (a linear projection)."""
    if not pivots:
        return v
    bits = v.to_bits()[list(pivots)].astype(bool)
    if not bits.any():
        return v
    acc = np.bitwise_xor.reduce(R.data[bits], axis=0)
    return BitVec(v.length, v.words ^ acc)


def in_span(v: BitVec, vectors: Sequence[BitVec]) -> bool:
    if not vectors:
        return v.is_zero()
    R, pivots = rref(_as_matrix(vectors, v.length))
    return reduce_against(R, pivots, v).is_zero()


def quotient_basis(U: Sequence[BitVec], W: Sequence[BitVec]) -> list[BitVec]:
    """Representatives of ``span U / span W``.

    Each representative is a canonical rref row of ``U`` reduced modulo
    ``W`` and the previously chosen representatives.
    """
    if not U:
        for w in W:
            if not w.is_zero():
                raise SubspaceError("W is not contained in U", w)
        return []
    n = U[0].length
    RU, pu = rref(_as_matrix(U, n))
    for w in W:
        if not reduce_against(RU, pu, w).is_zero():
            raise SubspaceError("W is not contained in U", w)
    current = row_basis(list(W), n)
    reps: list[BitVec] = []
    R, piv = rref(_as_matrix(current, n)) if current else (F2Matrix(0, n), [])
    for u in RU.row_list():
        r = reduce_against(R, piv, u)
        if r.is_zero():
            continue
        reps.append(r)
        current.append(r)
        R, piv = rref(_as_matrix(current, n))
    return reps


def inverse(M: F2Matrix) -> F2Matrix:
    """Inverse of a square invertible matrix; ``ValueError`` if singular."""
    if M.rows != M.cols:
        raise ValueError("only square matrices have inverses")
    n = M.rows
    aug = np.hstack([M.to_dense(), np.eye(n, dtype=np.uint8)])
    R, pivots = _rref_data(_pack(aug, 2 * n), 2 * n)
    if n and (len(pivots) < n or pivots[n - 1] != n - 1):
        raise ValueError("matrix is singular")
    return F2Matrix.from_dense(_unpack(R, 2 * n)[:, n:])


def extend_to_basis(vectors: Sequence[BitVec], length: int) -> list[BitVec]:
    """Append unit vectors (lowest index first) until ``vectors`` span GF(2)^length.

    The input vectors must be independent; they are returned first, unchanged.
    """
    out = list(vectors)
    if span_rank(out, length) != len(out):
        raise ValueError("input vectors are dependent")
    R, piv = rref(_as_matrix(out, length)) if out else (F2Matrix(0, length), [])
    pivot_set = set(piv)
    # unit vectors on non-pivot columns complete an rref basis
    out += [BitVec.from_indices(length, [c]) for c in range(length) if c not in pivot_set]
    return out


def intersection_dim(U: Sequence[BitVec], W: Sequence[BitVec], length: int) -> int:
    return span_rank(U, length) + span_rank(W, length) - span_rank(list(U) + list(W), length)


__all__ = [
    "BitVec",
    "F2Matrix",
    "InconsistentSystem",
    "SubspaceError",
    "rref",
    "rank",
    "span_rank",
    "row_basis",
    "kernel_basis",
    "kernel_matrix",
    "solve",
    "orthogonal_complement",
    "reduce_against",
    "in_span",
    "quotient_basis",
    "intersection_dim",
    "inverse",
    "extend_to_basis",
]
