"""Four-valued decoding alphabet for the erasure channel: {0, 1, erasure, conflict}.

Symbols are small ints so they can live in numpy arrays. box_plus computes the
GF(2) sum of two partially known bits; box_dot merges two estimates of the
same bit. The conflict branch of box_dot fires only when both operands are
concrete and unequal; an erasure never conflicts with anything, it just
defers to the other operand.
"""

from __future__ import annotations

ZERO = 0
ONE = 1
ERASURE = 2
CONFLICT = 3

SYMBOLS = (ZERO, ONE, ERASURE, CONFLICT)
_RENDER = ("0", "1", "e", "!")


def render(sym: int) -> str:
    return _RENDER[sym]


def box_plus(a: int, b: int) -> int:
    if a == CONFLICT or b == CONFLICT:
        return CONFLICT
    if a == ERASURE or b == ERASURE:
        return ERASURE
    return a ^ b


def box_dot(a: int, b: int) -> int:
    if a == CONFLICT or b == CONFLICT:
        return CONFLICT
    if a == ERASURE:
        return b
    if b == ERASURE:
        return a
    return a if a == b else CONFLICT


# Lookup tables indexed [a][b], for tight loops.
BOX_PLUS = tuple(tuple(box_plus(a, b) for b in SYMBOLS) for a in SYMBOLS)
BOX_DOT = tuple(tuple(box_dot(a, b) for b in SYMBOLS) for a in SYMBOLS)
