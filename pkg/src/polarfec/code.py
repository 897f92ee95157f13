"""Code identity and the recursive Plotkin generator transform.

The generator matrix of the length-2^m code is defined by the recursion

    B(2N) = [[0,    B(N)],        B(1) = [1]
             [B(N), B(N)]]

so a length-2 message (x0, x1) encodes to (x1, x0 ^ x1).  Message indices
[0, n/2) carry the outer code that is decoded first (the degraded branch)
and [n/2, n) the branch decoded second (upgraded); applied recursively, the
bits of an index read MSB to LSB select degrade (0) / upgrade (1), and the
natural ascending index order is the successive decoding order.

Frozen message positions are fixed to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import encode_inplace

#: Info-set file format: line 1 "m=<int> k=<int>", line 2 the ascending
#: information indices separated by spaces.
INFO_SET_FORMAT = "m=<m> k=<k> header line, then space-separated ascending indices"


@dataclass(frozen=True)
class CodeSpec:
    """Identity of one code: length, dimension and information set."""

    m: int
    k: int
    info_set: np.ndarray
    info_mask: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.n
        info = np.asarray(self.info_set, dtype=np.int64)
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if info.ndim != 1 or len(info) != self.k:
            raise ValueError(f"info_set must hold exactly k={self.k} indices")
        if not 0 <= self.k <= n:
            raise ValueError(f"k must be in [0, {n}], got {self.k}")
        if len(info) > 0 and (info[0] < 0 or info[-1] >= n):
            raise ValueError("info_set indices out of range")
        if np.any(np.diff(info) <= 0):
            raise ValueError("info_set indices must be strictly increasing")
        mask = np.zeros(n, dtype=np.uint8)
        mask[info] = 1
        object.__setattr__(self, "info_set", info)
        object.__setattr__(self, "info_mask", mask)

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def rate(self) -> float:
        return self.k / self.n

    def frozen_set(self) -> np.ndarray:
        return np.flatnonzero(self.info_mask == 0)

    def message_from_data(self, data) -> np.ndarray:
        """Place k data bits on the information positions, zeros elsewhere."""
        data = np.asarray(data, dtype=np.uint8)
        if data.shape != (self.k,):
            raise ValueError(f"expected {self.k} data bits, got shape {data.shape}")
        msg = np.zeros(self.n, dtype=np.uint8)
        msg[self.info_set] = data
        return msg

    def data_from_message(self, message) -> np.ndarray:
        return np.asarray(message, dtype=np.uint8)[self.info_set]


def encode(message, spec: CodeSpec) -> np.ndarray:
    """Multiply a length-n message by the generator transform, O(n log n).

    Frozen positions of the message must be zero.
    """
    msg = np.asarray(message, dtype=np.uint8)
    if msg.shape != (spec.n,):
        raise ValueError(f"message length must be {spec.n}, got {msg.shape}")
    if np.any(msg[spec.info_mask == 0] != 0):
        raise ValueError("frozen message positions must be zero")
    out = msg.copy()
    encode_inplace(out)
    return out


def row_weight(i: int, m: int) -> int:
    """Hamming weight of generator row i, equal to 2**popcount(i)."""
    if not 0 <= i < (1 << m):
        raise ValueError(f"row index {i} out of range for m={m}")
    return 1 << int(i).bit_count()


def materialize_generator(m: int) -> np.ndarray:
    """Explicit generator matrix by the block recursion; test oracle only."""
    if m > 12:
        raise ValueError("materialize_generator is a test oracle, m <= 12 only")
    b = np.array([[1]], dtype=np.uint8)
    for _ in range(m):
        top = np.hstack([np.zeros_like(b), b])
        bot = np.hstack([b, b])
        b = np.vstack([top, bot])
    return b


def write_info_set(spec: CodeSpec, path) -> None:
    with open(path, "w", encoding="ascii") as f:
        f.write(f"m={spec.m} k={spec.k}\n")
        f.write(" ".join(str(i) for i in spec.info_set) + "\n")


def read_info_set(path) -> CodeSpec:
    with open(path, "r", encoding="ascii") as f:
        header = f.readline().split()
        indices = f.readline().split()
    try:
        fields = dict(part.split("=") for part in header)
        m, k = int(fields["m"]), int(fields["k"])
    except (ValueError, KeyError) as exc:
        raise ValueError(f"malformed info-set header {header!r}") from exc
    info = np.array([int(t) for t in indices], dtype=np.int64)
    return CodeSpec(m=m, k=k, info_set=info)
