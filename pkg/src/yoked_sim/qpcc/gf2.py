"""Dense GF(2) linear algebra on numpy uint8 matrices."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

BitMatrix = npt.NDArray[np.uint8]


def row_reduce(matrix: npt.ArrayLike) -> tuple[BitMatrix, list[int]]:
    """Return the reduced row echelon form (nonzero rows only) and its pivot columns."""

    work = np.array(matrix, dtype=np.uint8) % 2
    if work.ndim != 2:
        raise ValueError("row_reduce expects a 2-D matrix")
    n_rows, n_cols = work.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        candidates = np.flatnonzero(work[row:, col])
        if candidates.size == 0:
            continue
        pivot_row = row + int(candidates[0])
        if pivot_row != row:
            work[[row, pivot_row]] = work[[pivot_row, row]]
        hits = np.flatnonzero(work[:, col])
        hits = hits[hits != row]
        work[hits] ^= work[row]
        pivots.append(col)
        row += 1
    return work[:row], pivots


def rank(matrix: npt.ArrayLike) -> int:
    return len(row_reduce(matrix)[1])


def nullspace(matrix: npt.ArrayLike) -> BitMatrix:
    """Basis of the right kernel {v : M v = 0}, one basis vector per row."""

    reduced, pivots = row_reduce(matrix)
    n_cols = np.asarray(matrix).shape[1]
    free = [c for c in range(n_cols) if c not in set(pivots)]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for i, col in enumerate(free):
        basis[i, col] = 1
        for r, pivot in enumerate(pivots):
            basis[i, pivot] = reduced[r, col]
    return basis


def reduce_against(reduced: BitMatrix, pivots: list[int], vectors: npt.ArrayLike) -> BitMatrix:
    """Reduce each row of `vectors` modulo the row space given in echelon form."""

    out = np.array(vectors, dtype=np.uint8, ndmin=2) % 2
    for r, pivot in enumerate(pivots):
        hit = out[:, pivot] == 1
        if hit.any():
            out[hit] ^= reduced[r]
    return out


def pack_columns(matrix: npt.ArrayLike) -> npt.NDArray[np.uint64]:
    """Pack each column of a bit matrix into little-endian uint64 words, shape (cols, words)."""

    bits = np.asarray(matrix, dtype=np.uint8).T
    n_cols, n_rows = bits.shape
    padded = np.zeros((n_cols, max(64, -(-n_rows // 64) * 64)), dtype=np.uint8)
    padded[:, :n_rows] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64)
