"""Code construction: rate profiles, outer CRC, and the pre-transform pair (T, H).

A code is described by the index partition of [0, N): information set A,
parity set P (dynamic frozen bits driven by the outer code), and frozen set F.
The pre-transform matrix T maps a length-N vector v with v[A] = message,
v elsewhere 0, to the polar input word u = v T; its parity columns encode
u_i = u_0^{i-1} T[0:i, i] for i in P. The companion matrix H satisfies
T H = 0 and u H = 0 exactly for valid input words; H' keeps the columns of H
indexed by the complement of A.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .gf2 import kron_power, mat_mul

NR_CRC11_TAPS = (1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1)  # D^11+D^10+D^9+D^5+1


@dataclass(frozen=True)
class OuterCode:
    """Outer systematic code appending CRC-style parity to the message."""

    kind: str
    generator_taps: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.generator_taps) - 1


@dataclass(frozen=True)
class ReliabilityProfile:
    """Sub-channel indices of one blocklength, most reliable last."""

    order: tuple[int, ...]

    def least_reliable(self, count: int) -> tuple[int, ...]:
        return tuple(sorted(self.order[:count]))

    def most_reliable(self, count: int) -> tuple[int, ...]:
        return tuple(sorted(self.order[len(self.order) - count:]))


@dataclass(frozen=True, eq=False)
class CodeSpec:
    """Everything the decoders need to know about one concatenated code."""

    n: int
    N: int
    K: int
    A: tuple[int, ...]
    P: tuple[int, ...]
    F: tuple[int, ...]
    T: np.ndarray
    H: np.ndarray
    H_prime: np.ndarray
    outer: OuterCode | None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def generator(self) -> np.ndarray:
        return kron_power(self.n)

    def code_hash(self) -> str:
        """Hash of the T and H bit patterns, for result provenance."""
        return hashlib.sha256(self.T.tobytes() + self.H.tobytes()).hexdigest()[:16]


def crc_remainder(bits, taps) -> np.ndarray:
    """Remainder of bits(D) * D^deg divided by the generator taps (MSB first)."""
    deg = len(taps) - 1
    reg = list(np.asarray(bits, dtype=np.uint8)) + [0] * deg
    for i in range(len(reg) - deg):
        if reg[i]:
            for j, t in enumerate(taps):
                reg[i + j] ^= t
    return np.array(reg[len(reg) - deg:], dtype=np.uint8) if deg else np.zeros(0, dtype=np.uint8)


@lru_cache(maxsize=1)
def load_nr_sequence() -> tuple[int, ...]:
    """Bundled 1024-entry polar reliability sequence (TS 38.212)."""
    text = resources.files("fcpolar.data").joinpath("nr_reliability_1024.txt").read_text()
    vals = []
    for line in text.splitlines():
        line = line.split("#")[0].strip()
        if line:
            vals.extend(int(t) for t in line.split())
    if sorted(vals) != list(range(1024)):
        raise ValueError("bundled reliability table is not a permutation of 0..1023")
    return tuple(vals)


def nr_profile(N: int) -> ReliabilityProfile:
    if N < 2 or N & (N - 1) or N > 1024:
        raise ValueError(f"N must be a power of two in [2, 1024], got {N}")
    return ReliabilityProfile(order=tuple(i for i in load_nr_sequence() if i < N))


def _assemble(n, N, A, P, F, T, outer) -> CodeSpec:
    """Build H from T and package the spec; shared by all constructors."""
    H = np.zeros((N, N), dtype=np.uint8)
    for i in F:
        H[i, i] = 1
    for i in P:
        H[:i, i] = T[:i, i]
        H[i, i] = 1
    not_A = sorted(set(range(N)) - set(A))
    H_prime = np.ascontiguousarray(H[:, not_A])
    return CodeSpec(n=n, N=N, K=len(A), A=tuple(A), P=tuple(P), F=tuple(F),
                    T=T, H=H, H_prime=H_prime, outer=outer)


def build_example1() -> CodeSpec:
    """The (8, 3) running example: A = {3,5,7}, one parity bit u6 = u3 + u5."""
    N, A, P, F = 8, (3, 5, 7), (6,), (0, 1, 2, 4)
    T = np.zeros((N, N), dtype=np.uint8)
    for i in A:
        T[i, i] = 1
    T[3, 6] = T[5, 6] = 1
    return _assemble(3, N, A, P, F, T, OuterCode(kind="parity", generator_taps=(1, 1)))


def build_nr_code(N: int, K: int, crc: str = "nr11") -> CodeSpec:
    """CRC-concatenated polar code on the bundled NR reliability profile.

    The K-bit message plus its CRC occupy the K+r most reliable sub-channels
    in ascending index order, so the parity bits land on the r largest
    allocated indices and T stays upper triangular.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    if crc == "nr11":
        outer = OuterCode(kind="crc", generator_taps=NR_CRC11_TAPS)
    elif crc == "none":
        outer = None
    else:
        raise ValueError(f"unknown outer code {crc!r}")
    r = outer.degree if outer else 0
    if K + r > N:
        raise ValueError(f"K + {r} parity bits exceed N = {N}")
    n = int(N).bit_length() - 1
    profile = nr_profile(N)
    allocated = profile.most_reliable(K + r)
    A, P = allocated[:K], allocated[K:]
    F = tuple(sorted(set(range(N)) - set(allocated)))

    T = np.zeros((N, N), dtype=np.uint8)
    for i in A:
        T[i, i] = 1
    if outer:
        parity_of_unit = np.stack([crc_remainder(row, outer.generator_taps)
                                   for row in np.eye(K, dtype=np.uint8)])
        for j, pj in enumerate(P):
            T[list(A), pj] = parity_of_unit[:, j]
    return _assemble(n, N, A, P, F, T, outer)


def encode(spec: CodeSpec, message) -> np.ndarray:
    """Map a K-bit message to the transmitted codeword x = u G."""
    message = np.asarray(message, dtype=np.uint8)
    if message.shape != (spec.K,):
        raise ValueError(f"message must have length {spec.K}")
    v = np.zeros(spec.N, dtype=np.uint8)
    v[list(spec.A)] = message
    u = mat_mul(v[None, :], spec.T)[0]
    return mat_mul(u[None, :], spec.generator)[0]


def input_word(spec: CodeSpec, message) -> np.ndarray:
    """The polar input word u for a message, with parity bits filled in."""
    message = np.asarray(message, dtype=np.uint8)
    v = np.zeros(spec.N, dtype=np.uint8)
    v[list(spec.A)] = message
    return mat_mul(v[None, :], spec.T)[0]
