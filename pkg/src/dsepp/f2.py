"""Dense GF(2) linear algebra: bit matrices, row reduction, symplectic checks.

Matrices are stored as numpy uint8 arrays with entries in {0, 1}.  All
operations are pure; :class:`BitMatrix` values are frozen after construction
so they can be shared between threads without synchronization.  Empty
matrices (zero rows or zero columns) are legal everywhere.
"""

from __future__ import annotations

import numpy as np


class BitMatrix:
    """Immutable binary matrix over GF(2).

    Parameters
    ----------
    data : array-like
        Two-dimensional array with entries in {0, 1}.

    Notes
    -----
    The packed storage layout is an internal detail; the public contract is
    entry access plus the module-level operations.
    """

    __slots__ = ("_a",)

    def __init__(self, data):
        a = np.array(data, dtype=np.uint8)
        if a.ndim != 2:
            raise ValueError(f"BitMatrix needs a 2-D array, got ndim={a.ndim}")
        if a.size and a.max() > 1:
            raise ValueError("BitMatrix entries must be 0 or 1")
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    def __setattr__(self, name, value):
        raise AttributeError("BitMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(np.eye(n, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    def get(self, i: int, j: int) -> int:
        return int(self._a[i, j])

    def to_array(self) -> np.ndarray:
        """Read-only numpy view of the entries."""
        return self._a

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self._a.T)

    def popcount(self) -> int:
        return int(self._a.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"BitMatrix({self._a.tolist()!r})"


def matmul_f2(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """GF(2) matrix product a @ b.

    Raises
    ------
    ValueError
        If the inner dimensions disagree.
    """
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch: ({a.rows}x{a.cols}) @ ({b.rows}x{b.cols})")
    prod = (a.to_array().astype(np.int64) @ b.to_array().astype(np.int64)) & 1
    return BitMatrix(prod.astype(np.uint8))


def _rref_array(m: np.ndarray) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """In-place-free RREF over GF(2) with row-operation tracking.

    Returns (rref, row_ops, pivot_cols) with row_ops @ m == rref over GF(2).
    Pivot tie-break: the lowest-index row with a 1 in the current column.
    """
    r = m.astype(np.uint8).copy()
    rows, cols = r.shape
    ops = np.eye(rows, dtype=np.uint8)
    pivot_cols: list[int] = []
    pr = 0
    for col in range(cols):
        if pr >= rows:
            break
        sub = r[pr:, col]
        hits = np.flatnonzero(sub)
        if hits.size == 0:
            continue
        src = pr + int(hits[0])
        if src != pr:
            r[[pr, src]] = r[[src, pr]]
            ops[[pr, src]] = ops[[src, pr]]
        # Eliminate above and below the pivot.
        targets = np.flatnonzero(r[:, col])
        for t in targets:
            if t != pr:
                r[t] ^= r[pr]
                ops[t] ^= ops[pr]
        pivot_cols.append(col)
        pr += 1
    return r, ops, pivot_cols


def rref(m: BitMatrix) -> tuple[BitMatrix, BitMatrix, list[int]]:
    """Reduced row-echelon form over GF(2).

    Returns
    -------
    (result, row_ops, pivot_cols)
        ``result`` is the RREF of ``m``; ``row_ops`` is invertible with
        ``row_ops @ m == result`` over GF(2); ``pivot_cols`` lists the pivot
        columns in increasing order.  A zero matrix yields itself with an
        empty pivot list.
    """
    r, ops, piv = _rref_array(m.to_array())
    return BitMatrix(r), BitMatrix(ops), piv


def rank_f2(m: BitMatrix) -> int:
    """GF(2) rank."""
    return len(rref(m)[2])


def omega(n: int) -> BitMatrix:
    """The symplectic form [[0, I_n], [I_n, 0]] on F2^(2n)."""
    w = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    w[:n, n:] = np.eye(n, dtype=np.uint8)
    w[n:, :n] = np.eye(n, dtype=np.uint8)
    return BitMatrix(w)


def is_symplectic(c: BitMatrix) -> bool:
    """True iff C @ Omega @ C.T == Omega over GF(2).

    Raises
    ------
    ValueError
        If ``c`` is not square with an even dimension.
    """
    if c.rows != c.cols:
        raise ValueError("symplectic check needs a square matrix")
    if c.rows % 2 != 0:
        raise ValueError("symplectic matrices have even dimension")
    n = c.rows // 2
    w = omega(n)
    lhs = matmul_f2(matmul_f2(c, w), c.transpose())
    return lhs == w


def is_invertible_f2(m: BitMatrix) -> bool:
    return m.rows == m.cols and rank_f2(m) == m.rows
