"""Vectorized erasure-symbol arithmetic on boolean planes.

A batch of symbols is held as three same-shaped boolean arrays (V, E, H):
H marks conflicts, E marks erasures, V carries the bit value where neither
flag is set. The operators reproduce box_plus / box_dot elementwise, so the
batch engines agree with the scalar reference symbol for symbol.
"""

from __future__ import annotations

import numpy as np

Planes = tuple[np.ndarray, np.ndarray, np.ndarray]


def from_symbols(symbols: np.ndarray) -> Planes:
    symbols = np.asarray(symbols)
    return symbols == 1, symbols == 2, symbols == 3


def to_symbols(p: Planes) -> np.ndarray:
    v, e, h = p
    return (v.astype(np.uint8) + 2 * e.astype(np.uint8) + 3 * h.astype(np.uint8))


def plus(a: Planes, b: Planes) -> Planes:
    av, ae, ah = a
    bv, be, bh = b
    h = ah | bh
    e = (ae | be) & ~h
    v = (av ^ bv) & ~e & ~h
    return v, e, h


def plus_bits(a: Planes, bits: np.ndarray) -> Planes:
    """box_plus with a plane of concrete bits (no erasures, no conflicts)."""
    av, ae, ah = a
    return (av ^ bits.astype(bool)) & ~ae & ~ah, ae, ah


def dot(a: Planes, b: Planes) -> Planes:
    av, ae, ah = a
    bv, be, bh = b
    clash = ~ae & ~ah & ~be & ~bh & (av ^ bv)
    h = ah | bh | clash
    e = ae & be & ~h
    v = np.where(ae, bv, av) & ~e & ~h
    return v, e, h


def copy(p: Planes) -> Planes:
    return p[0].copy(), p[1].copy(), p[2].copy()


def take(p: Planes, sel) -> Planes:
    return p[0][sel], p[1][sel], p[2][sel]


def any_conflict(p: Planes) -> np.ndarray:
    """Per-row conflict indicator (reduces all but the first axis)."""
    h = p[2]
    return h.any(axis=tuple(range(1, h.ndim)))


def update_partial_sums(ps: dict[int, np.ndarray], i: int, value: np.ndarray) -> None:
    """Fold a committed bit into the per-stage partial-sum planes.

    ps[t] holds the stage-t transform of the most recently completed left
    block, which is exactly the beta needed when the path next descends
    right at stage t. value has shape (rows,).
    """
    carry = value.astype(bool).reshape(-1, 1)
    t = 0
    while (i >> t) & 1:
        carry = np.concatenate([ps[t] ^ carry, carry], axis=1)
        t += 1
    ps[t] = carry
