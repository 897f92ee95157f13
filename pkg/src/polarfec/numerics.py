"""Scalar special functions used by the reliability constructions.

Conventions
-----------
SNR values are linear (not dB) symbol SNRs for unit-energy BPSK on the
binary-input AWGN channel: a channel with noise variance ``sigma2`` per real
dimension has ``snr = 1 / (2 * sigma2)``.  Its channel LLRs are Gaussian with
mean ``2 / sigma2 = 4 * snr`` and variance equal to twice the mean, which is
the contract every mean-LLR value in this package obeys.

Saturation constants
--------------------
``LLR_MAX``   caps every LLR and mean-LLR quantity so that the reliability
              recursions cannot overflow.
``SNR_MAX``   caps equivalent SNRs for the same reason.
``CAP_EPS``   keeps capacities away from 1 so the inverse stays finite.

All integrals are evaluated with a dense trapezoid rule on a fixed grid.  The
integrands are smooth and decay to zero well inside the integration window,
so the trapezoid rule converges spectrally; the test suite pins the results
against an independent adaptive quadrature.  Optional lookup tables exist as
a fast path only and are validated against the direct quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

LLR_MAX = 100.0
SNR_MAX = 1.0e4
CAP_EPS = 1.0e-9

_LN2 = math.log(2.0)
_CAP_GRID_POINTS = 4001
_PHI_GRID_POINTS = 2001
_BISECT_WIDTH = 1.0e-8


def _half_sigmoid2(u: np.ndarray) -> np.ndarray:
    """Stable 2 / (1 + exp(u)), i.e. 1 - tanh(u/2), for any real u."""
    out = np.empty_like(u)
    pos = u >= 0.0
    e = np.exp(-u[pos])
    out[pos] = 2.0 * e / (1.0 + e)
    out[~pos] = 2.0 / (1.0 + np.exp(u[~pos]))
    return out


@lru_cache(maxsize=65536)
def _capacity_raw(snr: float) -> float:
    """Unclamped BIAWGN symmetric capacity by trapezoid quadrature."""
    if snr <= 0.0:
        return 0.0
    sigma2 = 1.0 / (2.0 * snr)
    sigma = math.sqrt(sigma2)
    y = np.linspace(-1.0 - 8.0 * sigma, 1.0 + 8.0 * sigma, _CAP_GRID_POINTS)
    pdf = np.exp(-((y - 1.0) ** 2) / (2.0 * sigma2)) / math.sqrt(2.0 * math.pi * sigma2)
    loss = np.logaddexp(0.0, -2.0 * y / sigma2) / _LN2
    return 1.0 - float(np.trapezoid(pdf * loss, y))


def biawgn_capacity(snr: float) -> float:
    """Symmetric capacity of the binary-input AWGN channel, in bits.

    Strictly increasing on [0, SNR_MAX]; the result is clamped to
    [0, 1 - CAP_EPS] so that the inverse never blows up.
    """
    if snr < 0.0 or math.isnan(snr):
        raise ValueError(f"snr must be >= 0, got {snr}")
    c = _capacity_raw(min(float(snr), SNR_MAX))
    return min(max(c, 0.0), 1.0 - CAP_EPS)


def biawgn_capacity_inverse(c: float) -> float:
    """SNR at which the BIAWGN capacity equals ``c``.

    Bisection to 1e-8 domain width; ``c >= 1 - CAP_EPS`` saturates to
    SNR_MAX.
    """
    if not 0.0 <= c < 1.0:
        raise ValueError(f"capacity must be in [0, 1), got {c}")
    if c == 0.0:
        return 0.0
    if c >= 1.0 - CAP_EPS:
        return SNR_MAX
    lo, hi = 0.0, SNR_MAX
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if biawgn_capacity(mid) < c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@lru_cache(maxsize=65536)
def _phi_raw(x: float) -> float:
    # Integrand written as (1 - tanh(u/2)) * N(u; x, 2x) so every term is
    # positive: no cancellation even when phi(x) ~ 1e-12.
    span = 10.0 * math.sqrt(2.0 * x)
    u = np.linspace(x - span, x + span, _PHI_GRID_POINTS)
    w = np.exp(-((u - x) ** 2) / (4.0 * x)) / math.sqrt(4.0 * math.pi * x)
    return float(np.trapezoid(_half_sigmoid2(u) * w, u))


def phi(x: float) -> float:
    """Mean-LLR reliability functional of the Gaussian-approximation model.

    phi(x) = 1 - (4*pi*x)^(-1/2) * integral of tanh(u/2) exp(-(u-x)^2/(4x)) du
    for x > 0, and phi(0) = 1.  Strictly decreasing with range (0, 1].
    """
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"mean LLR must be >= 0, got {x}")
    if x == 0.0:
        return 1.0
    return min(_phi_raw(float(x)), 1.0)


@lru_cache(maxsize=1)
def _phi_at_llr_max() -> float:
    return phi(LLR_MAX)


def phi_inverse(y: float) -> float:
    """Inverse of :func:`phi` on (0, 1], by bisection.

    ``y = 1`` maps to 0; anything below ``phi(LLR_MAX)`` saturates to
    LLR_MAX.
    """
    if not 0.0 < y <= 1.0:
        raise ValueError(f"phi value must be in (0, 1], got {y}")
    if y == 1.0:
        return 0.0
    if y <= _phi_at_llr_max():
        return LLR_MAX
    lo, hi = 0.0, LLR_MAX
    while hi - lo > _BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if phi(mid) > y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class _MonotoneTable:
    """Dense samples of a monotone scalar function plus linear interpolation."""

    x: np.ndarray
    y: np.ndarray
    increasing: bool

    def forward(self, x: float) -> float:
        return float(np.interp(x, self.x, self.y))

    def inverse(self, y: float) -> float:
        if self.increasing:
            return float(np.interp(y, self.y, self.x))
        return float(np.interp(y, self.y[::-1], self.x[::-1]))


def build_capacity_table(snr_hi: float = 25.0, points: int = 20001) -> _MonotoneTable:
    """Tabulate the capacity on [0, snr_hi].  Off by default everywhere."""
    xs = np.linspace(0.0, snr_hi, points)
    ys = np.array([biawgn_capacity(float(s)) for s in xs])
    return _MonotoneTable(x=xs, y=ys, increasing=True)


def build_phi_table(x_hi: float = LLR_MAX, points: int = 20001) -> _MonotoneTable:
    """Tabulate phi on [0, x_hi].  Off by default everywhere."""
    xs = np.linspace(0.0, x_hi, points)
    ys = np.array([phi(float(x)) for x in xs])
    return _MonotoneTable(x=xs, y=ys, increasing=False)
