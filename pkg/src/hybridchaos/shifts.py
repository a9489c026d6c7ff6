"""Pixel-position shuffles.

``ults`` rotates the entries of a square matrix along a fixed Hamiltonian
path (first row, anti-diagonal, last row, last column, then the interior
anti-diagonals).  ``fcs``/``scs`` compose it with transposes and flips and
``std3`` relocates equal-sized square blocks across three matrices.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

import numpy as np

_path_lock = threading.Lock()


@lru_cache(maxsize=64)
def _path_cached(n: int) -> tuple[np.ndarray, np.ndarray]:
    cells: list[tuple[int, int]] = []
    cells += [(0, j) for j in range(n)]                       # first row
    cells += [(i, n - 1 - i) for i in range(1, n)]            # anti-diagonal down to (n-1, 0)
    cells += [(n - 1, j) for j in range(1, n)]                # last row
    cells += [(i, n - 1) for i in range(n - 2, 0, -1)]        # last column upwards
    seen = set(cells)

    def interior(total: int, ascending: bool) -> list[tuple[int, int]]:
        # 0-based i + j == total, restricted to rows 1..n-2 and cols 0..n-2
        rows = range(1, n - 1) if ascending else range(n - 2, 0, -1)
        return [(i, total - i) for i in rows
                if 0 <= total - i <= n - 2 and (i, total - i) not in seen]

    # 1-based sums n+2 .. 2n-2, then n .. 3
    for total in range(n, 2 * n - 3):
        cells += interior(total, ascending=True)
    for total in range(n - 2, 0, -1):
        cells += interior(total, ascending=False)
    rows = np.fromiter((c[0] for c in cells), dtype=np.intp, count=len(cells))
    cols = np.fromiter((c[1] for c in cells), dtype=np.intp, count=len(cells))
    rows.setflags(write=False)
    cols.setflags(write=False)
    return rows, cols


def traversal_path(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(rows, cols) index arrays of the 0-based traversal of an n x n grid."""
    if n < 4:
        raise ValueError(f"traversal path needs n >= 4, got {n}")
    with _path_lock:
        return _path_cached(n)


def _square(A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A.shape[0]


def ults(A, k: int) -> np.ndarray:
    """Move the value at path position j to position j + k (mod n^2)."""
    A = np.asarray(A)
    n = _square(A)
    rows, cols = traversal_path(n)
    out = np.empty_like(A)
    out[rows, cols] = np.roll(A[rows, cols], int(k))
    return out


def fcs(A, n1: int, n2: int, n3: int, n4: int) -> np.ndarray:
    B = ults(A, n1)
    B = ults(B.T, n2)
    B = ults(np.fliplr(B), n3)
    return ults(np.flipud(B), n4)


def fcs_inv(B, n1: int, n2: int, n3: int, n4: int) -> np.ndarray:
    A = np.flipud(ults(B, -n4))
    A = np.fliplr(ults(A, -n3))
    A = ults(A, -n2).T
    return ults(A, -n1)


def scs(A, n1: int, n2: int, n3: int, n4: int) -> np.ndarray:
    C = ults(np.flipud(A), n1)
    C = ults(np.fliplr(C), n2)
    C = ults(C.T, n3)
    return ults(C, n4)


def scs_inv(C, n1: int, n2: int, n3: int, n4: int) -> np.ndarray:
    A = ults(C, -n4)
    A = ults(A, -n3).T
    A = np.fliplr(ults(A, -n2))
    return np.flipud(ults(A, -n1))


# --------------------------------------------------------------------------
# three-matrix block shift

def block_side(n: int, m: int) -> int:
    """Block size p for three n x n matrices cut into m blocks in total."""
    if m <= 0 or m % 3:
        raise ValueError(f"block count m={m} must be a positive multiple of 3")
    per = m // 3
    k = math.isqrt(per)
    if k * k != per:
        raise ValueError(f"m/3 = {per} is not a perfect square")
    if n % k:
        raise ValueError(f"matrix side {n} is not divisible by sqrt(m/3) = {k}")
    return n // k


def _to_blocks(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    k = n // p
    # row-major block order: (block_row, block_col)
    return A.reshape(k, p, k, p).swapaxes(1, 2).reshape(k * k, p, p)


def _from_blocks(blocks: np.ndarray, n: int) -> np.ndarray:
    p = blocks.shape[1]
    k = n // p
    return blocks.reshape(k, k, p, p).swapaxes(1, 2).reshape(n, n)


def std3(A, B, C, P) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Output block j of the concatenated block vector is input block P[j]."""
    A, B, C = (np.asarray(X) for X in (A, B, C))
    n = _square(A)
    if B.shape != A.shape or C.shape != A.shape:
        raise ValueError("A, B and C must share one square shape")
    P = np.asarray(P, dtype=np.intp)
    m = P.size
    p = block_side(n, m)
    if not np.array_equal(np.sort(P), np.arange(m)):
        raise ValueError("P is not a permutation of 0..m-1")
    V = np.concatenate([_to_blocks(X, p) for X in (A, B, C)])
    W = V[P]
    per = m // 3
    return tuple(_from_blocks(W[i * per:(i + 1) * per], n) for i in range(3))


def inverse_permutation(P) -> np.ndarray:
    P = np.asarray(P, dtype=np.intp)
    inv = np.empty_like(P)
    inv[P] = np.arange(P.size)
    return inv


def std3_inv(A, B, C, P) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    return std3(A, B, C, inverse_permutation(P))
