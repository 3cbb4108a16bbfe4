"""Successive-cancellation list decoding on the BEC with random pruning.

Paths fork wherever the SC recursion leaves an information bit erased and
die on conflicts; when the list overflows the cap L, a uniformly random
L-subset survives (instead of giving up), using a pruning RNG substream
decoupled from the channel. The final pick among parity-consistent
survivors is uniform as well. visited_nodes sums the list size over all N
steps.

Per-path symbol planes are bit-packed into uint64 words (value, erased,
conflict), and the SC recursion only recomputes the stages whose block
actually moved at each bit, so a full decode costs about 2N stage blocks
per path instead of N log N.
"""

from __future__ import annotations

import numpy as np

from .codes import CodeSpec
from .rng import STREAM_PRUNE, keyed_array, keyed_uniform_array
from .search import DecodeOutcome

__all__ = ["decode_scl"]

_ONE = np.uint64(1)
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)

# A stage-t block holds 2^t symbols in ceil(2^t / 64) words per plane,
# little-endian within each word; unused high bits stay zero.

PackedPlanes = tuple[np.ndarray, np.ndarray, np.ndarray]


def _mask(width: int) -> np.uint64:
    return _FULL if width >= 64 else np.uint64((1 << width) - 1)


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a boolean vector into a (1, W) little-endian uint64 row."""
    width = max(64, len(bits))
    padded = np.zeros(width, dtype=np.uint64)
    padded[: len(bits)] = np.asarray(bits, dtype=np.uint64)
    shifts = np.arange(64, dtype=np.uint64)
    return np.bitwise_or.reduce(padded.reshape(-1, 64) << shifts, axis=1)[None, :]


def _split(p: PackedPlanes, t: int) -> tuple[PackedPlanes, PackedPlanes]:
    """Halve a stage-(t+1) block into its stage-t left and right children."""
    half = 1 << t
    if half >= 64:
        w = half // 64
        return (tuple(x[:, :w] for x in p), tuple(x[:, w:] for x in p))
    m = _mask(half)
    sh = np.uint64(half)
    return (tuple(x & m for x in p), tuple((x >> sh) & m for x in p))


def _plus(a: PackedPlanes, b: PackedPlanes) -> PackedPlanes:
    av, ae, ah = a
    bv, be, bh = b
    h = ah | bh
    e = (ae | be) & ~h
    return (av ^ bv) & ~e & ~h, e, h


def _plus_bits(a: PackedPlanes, bits: np.ndarray) -> PackedPlanes:
    av, ae, ah = a
    return (av ^ bits) & ~ae & ~ah, ae, ah


def _dot(a: PackedPlanes, b: PackedPlanes) -> PackedPlanes:
    av, ae, ah = a
    bv, be, bh = b
    clash = ~ae & ~ah & ~be & ~bh & (av ^ bv)
    h = ah | bh | clash
    e = ae & be & ~h
    v = ((bv & ae) | (av & ~ae)) & ~e & ~h
    return v, e, h


def _refresh(alpha: list, ps: dict[int, np.ndarray], i: int, n: int) -> None:
    """Recompute the stage blocks that moved when the leaf advanced to i."""
    top = n - 1 if i == 0 else min(_ntz(i), n - 1)
    for t in range(top, -1, -1):
        a, c = _split(alpha[t + 1], t)
        if (i >> t) & 1 == 0:
            alpha[t] = _plus(a, c)
        else:
            alpha[t] = _dot(_plus_bits(a, ps[t]), c)


def _ntz(i: int) -> int:
    return (i & -i).bit_length() - 1


def _update_partial_sums(ps: dict[int, np.ndarray], i: int,
                         value: np.ndarray) -> None:
    carry = value.astype(np.uint64).reshape(-1, 1)
    t = 0
    while (i >> t) & 1:
        half = 1 << t
        left = ps[t] ^ carry
        if half >= 64:
            carry = np.concatenate([left, carry], axis=1)
        else:
            carry = left | (carry << np.uint64(half))
        t += 1
    ps[t] = carry


def decode_scl(spec: CodeSpec, y, L: int, seed: int = 0,
               trial: int = 0) -> DecodeOutcome:
    if L < 1:
        raise ValueError("list size must be at least 1")
    y_sym = np.asarray(list(y))
    if len(y_sym) != spec.N:
        raise ValueError("y must have length N")
    n = spec.n
    alpha: list[PackedPlanes | None] = [None] * (n + 1)
    alpha[n] = (_pack_bits(y_sym == 1), _pack_bits(y_sym == 2),
                _pack_bits(y_sym == 3))
    u = np.zeros((1, spec.N), dtype=np.uint8)
    ps: dict[int, np.ndarray] = {}
    a_set = set(spec.A)
    visited = 0

    for i in range(spec.N):
        _refresh(alpha, ps, i, n)
        lv, le, lh = alpha[0]
        val = (lv[:, 0] & _ONE).astype(bool)
        erased = (le[:, 0] & _ONE).astype(bool)
        conflict = (lh[:, 0] & _ONE).astype(bool)

        if i in a_set:
            fork = erased & ~conflict
            single = ~erased & ~conflict
            keep_idx = np.concatenate([np.flatnonzero(single),
                                       np.flatnonzero(fork), np.flatnonzero(fork)])
            new_vals = np.concatenate([
                val[single].astype(np.uint8),
                np.zeros(fork.sum(), dtype=np.uint8),
                np.ones(fork.sum(), dtype=np.uint8)])
        else:
            col = spec.T[:i, i]
            if i and col.any():
                forced = ((u[:, :i].astype(np.int64) @ col.astype(np.int64)) & 1
                          ).astype(np.uint8)
            else:
                forced = np.zeros(u.shape[0], dtype=np.uint8)
            dead = conflict | (~erased & (val != forced.astype(bool)))
            keep_idx = np.flatnonzero(~dead)
            new_vals = forced[keep_idx]

        if keep_idx.size == 0:
            return DecodeOutcome(status="failure", u_hat=None,
                                 visited_nodes=visited, backjumps=0)
        if keep_idx.size > L:
            rows = keep_idx.size
            priority = keyed_uniform_array(
                seed, np.full(rows, STREAM_PRUNE), np.full(rows, trial),
                np.full(rows, i), np.arange(rows))
            keep = np.sort(np.argsort(priority)[:L])
            keep_idx = keep_idx[keep]
            new_vals = new_vals[keep]
        u = u[keep_idx]
        u[:, i] = new_vals
        for t in range(n + 1):
            p = alpha[t]
            alpha[t] = (p[0][keep_idx], p[1][keep_idx], p[2][keep_idx])
        for t in list(ps):
            ps[t] = ps[t][keep_idx]
        _update_partial_sums(ps, i, new_vals)
        visited += u.shape[0]

    ok = (u.astype(np.int64) @ spec.H_prime.astype(np.int64) % 2 == 0).all(axis=1)
    survivors = np.flatnonzero(ok)
    if survivors.size == 0:
        return DecodeOutcome(status="failure", u_hat=None,
                             visited_nodes=visited, backjumps=0)
    pick = survivors[int(keyed_array(seed, STREAM_PRUNE, trial, spec.N, 0)
                         % np.uint64(survivors.size))]
    return DecodeOutcome(status="success", u_hat=u[pick].copy(),
                         visited_nodes=visited, backjumps=0)
