"""Per-bit-channel reliability profiles and information-set selection.

Five methods are available:

* ``eqsnr``  — propagate equivalent SNRs through the capacity identities
  snr_u = 2*s and snr_v = C^-1(2*C(s) - C(2*s)).
* ``dega``   — density evolution under the symmetric-Gaussian LLR
  assumption, propagating mean LLRs through the phi function.
* ``bec``    — exact Bhattacharyya recursion for the erasure channel,
  Z_v = 2Z - Z^2 and Z_u = Z^2.
* ``genie``  — Monte-Carlo first-error counts from genie-aided successive
  decoding of the all-zero codeword.
* ``rm``     — generator row weights (maximizes minimum distance).

A profile's scores follow the index convention of :mod:`polarfec.code`:
reading the bits of index i from MSB to LSB applies the degrade transform
for a 0 bit and the upgrade transform for a 1 bit.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import PURPOSE_GENIE_NOISE, ChannelModel, block_stream, transmit_llr
from .code import CodeSpec, row_weight
from .decoding import Decoder
from .numerics import (
    LLR_MAX,
    SNR_MAX,
    biawgn_capacity,
    biawgn_capacity_inverse,
    phi,
    phi_inverse,
)


class Method(str, enum.Enum):
    EQSNR = "eqsnr"
    DEGA = "dega"
    BEC = "bec"
    GENIE = "genie"
    RM = "rm"


class Direction(enum.Enum):
    HIGHER_IS_BETTER = "higher"
    LOWER_IS_BETTER = "lower"


@dataclass(frozen=True)
class ReliabilityProfile:
    """Per-index reliability scores plus the direction that means better."""

    method: Method
    scores: np.ndarray
    direction: Direction

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if not np.all(np.isfinite(scores)):
            raise ValueError("profile scores must be finite")
        object.__setattr__(self, "scores", scores)

    @property
    def n(self) -> int:
        return len(self.scores)


def eqsnr_step(s: float) -> tuple[float, float]:
    """One polarization step in the equivalent-SNR domain -> (snr_u, snr_v).

    snr_v <= s holds analytically but the capacity cap can spoil it once
    C(s) saturates, so the bound is enforced; this is where the capping
    effect of the capacity functions shows up at extreme SNRs.
    """
    if s < 0.0:
        raise ValueError(f"snr must be >= 0, got {s}")
    snr_u = min(2.0 * s, SNR_MAX)
    cv = max(0.0, 2.0 * biawgn_capacity(s) - biawgn_capacity(snr_u))
    snr_v = min(biawgn_capacity_inverse(cv), s, SNR_MAX)
    return snr_u, snr_v


def dega_step(l1: float, l2: float) -> tuple[float, float]:
    """One polarization step on mean LLRs -> (l_u, l_v).

    l_u = l1 + l2 and l_v = phi^-1(1 - (1 - phi(l1)) * (1 - phi(l2))),
    both clamped to [0, LLR_MAX].
    """
    if l1 < 0.0 or l2 < 0.0:
        raise ValueError("mean LLRs must be >= 0")
    l_u = min(l1 + l2, LLR_MAX)
    y = 1.0 - (1.0 - phi(min(l1, LLR_MAX))) * (1.0 - phi(min(l2, LLR_MAX)))
    l_v = 0.0 if y >= 1.0 else min(phi_inverse(y), l1, l2, LLR_MAX)
    return l_u, l_v


def _recursive_profile(base: float, m: int, step) -> np.ndarray:
    scores = np.array([base], dtype=np.float64)
    for _ in range(m):
        nxt = np.empty(2 * scores.size, dtype=np.float64)
        for i, s in enumerate(scores):
            up, down = step(float(s))
            nxt[2 * i] = down
            nxt[2 * i + 1] = up
        scores = nxt
    return scores


def eqsnr_profile(base: float, m: int, table=None) -> ReliabilityProfile:
    """Equivalent SNRs of all 2^m bit-channels from a base-channel SNR."""
    if base < 0.0:
        raise ValueError(f"base snr must be >= 0, got {base}")
    step = eqsnr_step if table is None else _table_eqsnr_step(table)
    return ReliabilityProfile(Method.EQSNR,
                              _recursive_profile(min(base, SNR_MAX), m, step),
                              Direction.HIGHER_IS_BETTER)


def dega_profile(base: float, m: int, table=None) -> ReliabilityProfile:
    """Mean LLRs of all 2^m bit-channels from a base-channel mean LLR.

    For a BIAWGN channel with noise variance sigma2 the base mean LLR is
    2 / sigma2.
    """
    if base < 0.0:
        raise ValueError(f"base mean LLR must be >= 0, got {base}")
    if table is None:
        step = lambda l: dega_step(l, l)  # noqa: E731
    else:
        step = _table_dega_step(table)
    return ReliabilityProfile(Method.DEGA,
                              _recursive_profile(min(base, LLR_MAX), m, step),
                              Direction.HIGHER_IS_BETTER)


def _table_eqsnr_step(table):
    def step(s: float) -> tuple[float, float]:
        snr_u = min(2.0 * s, SNR_MAX)
        cv = max(0.0, 2.0 * table.forward(s) - table.forward(snr_u))
        return snr_u, min(table.inverse(cv), s, SNR_MAX)

    return step


def _table_dega_step(table):
    def step(l: float) -> tuple[float, float]:
        l_u = min(2.0 * l, LLR_MAX)
        p = table.forward(min(l, LLR_MAX))
        y = 1.0 - (1.0 - p) * (1.0 - p)
        return l_u, (0.0 if y >= 1.0 else min(table.inverse(y), l, LLR_MAX))

    return step


def _conserving_pair(z: float) -> tuple[float, float]:
    """(z_u, z_v) with z_u + z_v == 2*z exact in float64.

    Starts from the correctly rounded z*z and 2*z - z_u.  When no
    representable z_v closes the identity (a rounding-tie alignment that
    does occur in practice), z_u is moved by one ulp; every returned value
    stays within one ulp of the exact recursion.
    """
    two_z = 2.0 * z
    zu0 = z * z
    for du in (0, -1, 1, -2, 2):
        zu = zu0
        for _ in range(abs(du)):
            zu = np.nextafter(zu, -np.inf if du < 0 else np.inf)
        zv = two_z - zu
        for _ in range(4):
            err = two_z - (zu + zv)  # exact: zu + zv is within one ulp of 2z
            if err == 0.0:
                return float(zu), float(zv)
            zv = zv + err
    raise AssertionError(f"no conserving float pair found for z={z!r}")


def bec_profile(epsilon: float, m: int) -> ReliabilityProfile:
    """Bhattacharyya parameters of all 2^m bit-channels of a BEC.

    Recursion: Z_u = Z^2 (upgrade) and Z_v = 2Z - Z^2 (degrade), with the
    rounding arranged so the conservation identity Z_u + Z_v == 2Z holds
    exactly at every node.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {epsilon}")
    z = np.array([epsilon], dtype=np.float64)
    for _ in range(m):
        nxt = np.empty(2 * z.size, dtype=np.float64)
        for i, zi in enumerate(z):
            zu, zv = _conserving_pair(float(zi))
            nxt[2 * i] = zv
            nxt[2 * i + 1] = zu
        z = nxt
    return ReliabilityProfile(Method.BEC, z, Direction.LOWER_IS_BETTER)


def rm_profile(m: int) -> ReliabilityProfile:
    """Generator row weights; selecting the heaviest rows gives RM codes."""
    scores = np.array([row_weight(i, m) for i in range(1 << m)], dtype=np.float64)
    return ReliabilityProfile(Method.RM, scores, Direction.HIGHER_IS_BETTER)


def genie_profile(m: int, ch: ChannelModel, blocks: int, seed: int,
                  workers: int = 1, llr_max: float = LLR_MAX) -> ReliabilityProfile:
    """First-error counts from genie-aided decoding of all-zero codewords.

    Every index is treated as an information index, each decision is scored
    against the true zero bit and then corrected.  Deterministic in
    (seed, blocks) regardless of worker count.
    """
    if blocks < 1:
        raise ValueError(f"blocks must be >= 1, got {blocks}")
    n = 1 << m
    spec = CodeSpec(m=m, k=n, info_set=np.arange(n, dtype=np.int64))
    truth = np.zeros(n, dtype=np.uint8)
    zeros = np.zeros(n, dtype=np.uint8)

    def run_range(lo: int, hi: int) -> np.ndarray:
        dec = Decoder(spec, llr_max=llr_max)
        counts = np.zeros(n, dtype=np.int64)
        for b in range(lo, hi):
            rng = block_stream(seed, b, PURPOSE_GENIE_NOISE)
            llr = transmit_llr(zeros, ch, rng, llr_max=llr_max)
            counts += dec.decode_llr_genie(llr, truth)
        return counts

    if workers <= 1:
        total = run_range(0, blocks)
    else:
        bounds = np.linspace(0, blocks, workers + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(run_range, bounds[:-1], bounds[1:])
        total = sum(parts)
    return ReliabilityProfile(Method.GENIE, total.astype(np.float64),
                              Direction.LOWER_IS_BETTER)


def select_info_set(profile: ReliabilityProfile, k: int) -> CodeSpec:
    """Pick the k most reliable indices; ties go to the larger index."""
    n = profile.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    indices = np.arange(n, dtype=np.int64)
    if profile.direction is Direction.HIGHER_IS_BETTER:
        order = np.lexsort((indices, profile.scores))  # ascending, ties by index
        chosen = order[n - k:]
    else:
        order = np.lexsort((-indices, profile.scores))
        chosen = order[:k]
    m = n.bit_length() - 1
    return CodeSpec(m=m, k=k, info_set=np.sort(chosen))
