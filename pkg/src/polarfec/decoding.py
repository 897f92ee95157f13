"""Successive decoders in two equivalent soft-value domains.

``decode_llr`` is the log-likelihood-ratio decoder; ``decode_pdiff`` works
on differences of probabilities h = tanh(L/2), where h = +1 means certainly
bit 0, h = -1 certainly bit 1 and h = 0 an erasure.  Both run the same
recursion: combine for the degraded branch, decode it, re-encode, combine
for the upgraded branch with the re-encoded bits as +-1 signs, decode that.
A tie (h = 0, L = 0) decides bit 0, matching the frozen default.

A ``Decoder`` owns mutable scratch and is single-threaded; create one
instance per worker.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .code import CodeSpec
from .numerics import LLR_MAX


@dataclass(frozen=True)
class DecodeResult:
    """Decoded message plus its re-encoded codeword."""

    message: np.ndarray
    codeword: np.ndarray


class Decoder:
    """Successive decoder bound to one code; reusable across blocks."""

    def __init__(self, spec: CodeSpec, llr_max: float = LLR_MAX):
        self.spec = spec
        self.llr_max = float(llr_max)
        n = spec.n
        soft_len, bit_len = _kernels.scratch_sizes(n)
        self._soft = np.empty(soft_len, dtype=np.float64)
        self._bits = np.empty(bit_len, dtype=np.uint8)
        self.last_combine_ops = 0

    def _check(self, obs) -> np.ndarray:
        obs = np.ascontiguousarray(obs, dtype=np.float64)
        if obs.shape != (self.spec.n,):
            raise ValueError(f"observation length must be {self.spec.n}, got {obs.shape}")
        return obs

    def decode_llr(self, llr) -> DecodeResult:
        """SCD(L): successive decoding on log-likelihood ratios."""
        llr = self._check(llr)
        msg = np.empty(self.spec.n, dtype=np.uint8)
        cw = np.empty(self.spec.n, dtype=np.uint8)
        self.last_combine_ops = _kernels.decode_llr(
            llr, self.spec.info_mask, self.llr_max, msg, cw, self._soft, self._bits)
        return DecodeResult(message=msg, codeword=cw)

    def decode_pdiff(self, h) -> DecodeResult:
        """MSD(h): successive decoding on differences of probabilities."""
        h = self._check(h)
        if np.any(np.abs(h) > 1.0):
            raise ValueError("probability differences must lie in [-1, 1]")
        msg = np.empty(self.spec.n, dtype=np.uint8)
        cw = np.empty(self.spec.n, dtype=np.uint8)
        self.last_combine_ops = _kernels.decode_pdiff(
            h, self.spec.info_mask, msg, cw, self._soft, self._bits)
        return DecodeResult(message=msg, codeword=cw)

    def decode_llr_genie(self, llr, truth_message) -> np.ndarray:
        """Genie-aided LLR decoding.

        At every information index the tentative decision is compared with
        the true message bit, the mismatch recorded, and the true bit
        substituted before decoding continues.  Returns the per-index error
        flags (uint8, length n; frozen positions are always 0).
        """
        llr = self._check(llr)
        truth = np.ascontiguousarray(truth_message, dtype=np.uint8)
        if truth.shape != (self.spec.n,):
            raise ValueError(f"truth length must be {self.spec.n}")
        flags = np.zeros(self.spec.n, dtype=np.uint8)
        msg = np.empty(self.spec.n, dtype=np.uint8)
        cw = np.empty(self.spec.n, dtype=np.uint8)
        self.last_combine_ops = _kernels.decode_llr_genie(
            llr, self.spec.info_mask, truth, flags, self.llr_max,
            msg, cw, self._soft, self._bits)
        return flags


def scd_decode(llr, spec: CodeSpec, llr_max: float = LLR_MAX) -> DecodeResult:
    return Decoder(spec, llr_max=llr_max).decode_llr(llr)


def msd_decode(h, spec: CodeSpec) -> DecodeResult:
    return Decoder(spec).decode_pdiff(h)
