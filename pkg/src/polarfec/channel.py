"""BIAWGN channel model and deterministic per-block random streams.

SNR bookkeeping: for unit-energy BPSK (bit 0 -> +1, bit 1 -> -1) and noise
variance ``sigma2`` per real dimension,

    sigma2 = 1 / (2 * rate * 10**(ebn0_db / 10))
    snr    = 1 / (2 * sigma2)          (linear symbol SNR, Es/N0)
    L      = 2 * y / sigma2            (channel LLR, mean 4 * snr)

Randomness comes from counter-based Philox streams keyed by
(seed, block index, purpose), so results are bit-identical no matter how
blocks are distributed over workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import LLR_MAX

PURPOSE_DATA = 0
PURPOSE_NOISE = 1
PURPOSE_GENIE_NOISE = 2


def block_stream(seed: int, block: int, purpose: int) -> np.random.Generator:
    """Independent deterministic stream for one (seed, block, purpose)."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence((seed, block, purpose))))


@dataclass(frozen=True)
class ChannelModel:
    """Binary-input AWGN channel at a fixed operating point."""

    sigma2: float
    ebn0_db: float
    rate: float

    def __post_init__(self):
        if self.sigma2 <= 0.0:
            raise ValueError(f"sigma2 must be > 0, got {self.sigma2}")

    @classmethod
    def from_ebn0_db(cls, ebn0_db: float, rate: float) -> "ChannelModel":
        if not 0.0 < rate <= 1.0:
            raise ValueError(f"rate must be in (0, 1], got {rate}")
        sigma2 = 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))
        return cls(sigma2=sigma2, ebn0_db=ebn0_db, rate=rate)

    @property
    def snr(self) -> float:
        return 1.0 / (2.0 * self.sigma2)

    @property
    def base_mean_llr(self) -> float:
        return 2.0 / self.sigma2

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


def bpsk(bits) -> np.ndarray:
    return 1.0 - 2.0 * np.asarray(bits, dtype=np.float64)


def transmit_llr(codeword, ch: ChannelModel, rng: np.random.Generator | None,
                 llr_max: float = LLR_MAX, noiseless: bool = False) -> np.ndarray:
    """Channel LLRs only; the cheap path when the h values are not needed."""
    sym = bpsk(codeword)
    if noiseless:
        return sym * llr_max
    y = sym + ch.sigma * rng.standard_normal(sym.shape[0])
    return np.clip(2.0 * y / ch.sigma2, -llr_max, llr_max)


def transmit(codeword, ch: ChannelModel, rng: np.random.Generator | None,
             llr_max: float = LLR_MAX, noiseless: bool = False):
    """Send a codeword through the channel; return (llr, pdiff).

    LLRs are clamped to +-llr_max; pdiff = tanh(llr / 2).  In noiseless mode
    the soft values are the exact symbols (+-llr_max and +-1); tanh maps the
    clamped LLRs back to exactly +-1 there, so the two returns agree.
    """
    llr = transmit_llr(codeword, ch, rng, llr_max=llr_max, noiseless=noiseless)
    return llr, np.tanh(0.5 * llr)
