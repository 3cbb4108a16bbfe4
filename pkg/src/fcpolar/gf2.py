"""Dense GF(2) matrix helpers on top of numpy uint8 arrays.

Matrices are row-major numpy arrays with entries in {0, 1} and dtype uint8.
Index sets are always ascending. Serialization is a plain text format:
first line "rows cols", then one line of 0/1 characters per row.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = [
    "KERNEL",
    "kron_power",
    "mat_mul",
    "mat_mul_f32",
    "submatrix",
    "min_nonzero_row_weight",
    "gf2_rank",
    "format_matrix",
    "parse_matrix",
]

KERNEL = np.array([[1, 0], [1, 1]], dtype=np.uint8)


@lru_cache(maxsize=None)
def kron_power(n: int) -> np.ndarray:
    """n-fold Kronecker power of the 2x2 polar kernel [[1,0],[1,1]].

    Returns a read-only (2^n, 2^n) uint8 array; kron_power(0) is [[1]].
    """
    if n < 0:
        raise ValueError("kron_power needs n >= 0")
    m = np.array([[1]], dtype=np.uint8)
    for _ in range(n):
        m = np.kron(m, KERNEL)
    m.setflags(write=False)
    return m


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over GF(2)."""
    return (a.astype(np.int64) @ b.astype(np.int64) % 2).astype(np.uint8)


def mat_mul_f32(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """GF(2) product through float32 BLAS; exact while inner dim < 2^24.

    Much faster than integer matmul on the wide trial-batch operands.
    """
    prod = np.asarray(a, dtype=np.float32) @ np.asarray(b, dtype=np.float32)
    return (prod.astype(np.int64) & 1).astype(np.uint8)


def submatrix(m: np.ndarray, rows, cols) -> np.ndarray:
    """Submatrix with the given ascending row and column index sets."""
    rows = np.asarray(rows, dtype=np.intp)
    cols = np.asarray(cols, dtype=np.intp)
    return np.ascontiguousarray(m[np.ix_(rows, cols)])


def min_nonzero_row_weight(m: np.ndarray) -> int:
    """Minimum Hamming weight over the nonzero rows of m."""
    weights = m.sum(axis=1)
    weights = weights[weights > 0]
    if weights.size == 0:
        raise ValueError("matrix has no nonzero rows")
    return int(weights.min())


def gf2_rank(m: np.ndarray) -> int:
    """Rank over GF(2), by elimination on rows packed into python ints."""
    pivots: dict[int, int] = {}
    for row in np.asarray(m, dtype=np.uint8):
        cur = int.from_bytes(np.packbits(row).tobytes(), "big")
        while cur:
            high = cur.bit_length()
            if high in pivots:
                cur ^= pivots[high]
            else:
                pivots[high] = cur
                break
    return len(pivots)


def format_matrix(m: np.ndarray) -> str:
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    lines.extend("".join("1" if v else "0" for v in row) for row in m)
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    rows, cols = (int(t) for t in lines[0].split())
    if len(lines) - 1 != rows:
        raise ValueError(f"expected {rows} rows, got {len(lines) - 1}")
    out = np.zeros((rows, cols), dtype=np.uint8)
    for i, ln in enumerate(lines[1:]):
        if len(ln) != cols or set(ln) - {"0", "1"}:
            raise ValueError(f"bad row {i}: {ln!r}")
        out[i] = [c == "1" for c in ln]
    return out
