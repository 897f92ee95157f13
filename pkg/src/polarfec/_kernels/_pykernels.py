"""Pure-Python reference kernels (numpy).

Interchangeable with the compiled extension.  The decoders run the same
explicit-stack schedule over the same preallocated scratch layout: level d
of the recursion occupies ``offset[d] : offset[d] + n >> d`` of a flat
buffer of 2n - 1 entries, and within a node the degraded half is decoded
before the upgraded half.
"""

from __future__ import annotations

import numpy as np

_DENOM_EPS = 1e-15


def scratch_sizes(n: int) -> tuple[int, int]:
    """(soft, bit) scratch lengths needed by the decoders for block size n."""
    return 2 * n - 1, 2 * n - 1


def encode_inplace(bits: np.ndarray) -> None:
    """In-place generator transform of a length-2^m uint8 message.

    The column-reversed lower-triangular kernel equals the standard
    butterfly followed by a coordinate reversal.
    """
    n = bits.shape[0]
    half = 1
    while half < n:
        view = bits.reshape(-1, 2 * half)
        view[:, :half] ^= view[:, half:]
        half *= 2
    bits[:] = bits[::-1]


def _offsets(n: int) -> list[int]:
    off = [0]
    size = n
    while size >= 1:
        off.append(off[-1] + size)
        size //= 2
    return off


def _combine_f_llr(a, b, llr_max):
    t = np.tanh(0.5 * a) * np.tanh(0.5 * b)
    sat = np.abs(t) >= 1.0
    out = 2.0 * np.arctanh(np.where(sat, 0.0, t))
    out = np.where(sat, np.sign(t) * llr_max, out)
    return np.clip(out, -llr_max, llr_max)


def _combine_g_llr(a, b, sign, llr_max):
    return np.clip(a + sign * b, -llr_max, llr_max)


def _combine_f_pdiff(a, b):
    return a * b


def _combine_g_pdiff(a, b, sign):
    num = a + sign * b
    den = 1.0 + sign * a * b
    conflict = np.abs(den) < _DENOM_EPS
    out = num / np.where(conflict, 1.0, den)
    out = np.where(conflict, 0.0, out)
    return np.clip(out, -1.0, 1.0)


def _sc_core(soft_in, info_mask, msg, cw, soft, bits, llr_max, use_llr,
             truth=None, flags=None):
    """Shared successive-decoding schedule for both soft-value domains.

    Returns the number of combine operations (one per produced soft value).
    When ``truth`` is given, every decision is recorded against it and then
    replaced by it (genie mode).
    """
    n = soft_in.shape[0]
    m = n.bit_length() - 1
    off = _offsets(n)
    soft[off[0]:off[0] + n] = soft_in
    ops = 0
    msg_pos = 0
    stack = [[0, 0]]
    while stack:
        d, phase = stack[-1]
        length = n >> d
        if length == 1:
            x = soft[off[d]]
            if info_mask[msg_pos]:
                bit = 1 if x < 0.0 else 0
                if truth is not None:
                    flags[msg_pos] = 1 if bit != truth[msg_pos] else 0
                    bit = truth[msg_pos]
            else:
                bit = 0
            msg[msg_pos] = bit
            bits[off[d]] = bit
            msg_pos += 1
            stack.pop()
            continue
        half = length >> 1
        a = off[d]
        c = off[d + 1]
        top = soft[a:a + half]
        bot = soft[a + half:a + length]
        if phase == 0:
            if use_llr:
                soft[c:c + half] = _combine_f_llr(top, bot, llr_max)
            else:
                soft[c:c + half] = _combine_f_pdiff(top, bot)
            ops += half
            stack[-1][1] = 1
            stack.append([d + 1, 0])
        elif phase == 1:
            # child holds the decoded degraded-branch codeword: save it,
            # then combine for the upgraded branch
            bits[a:a + half] = bits[c:c + half]
            sign = 1.0 - 2.0 * bits[a:a + half]
            if use_llr:
                soft[c:c + half] = _combine_g_llr(top, bot, sign, llr_max)
            else:
                soft[c:c + half] = _combine_g_pdiff(top, bot, sign)
            ops += half
            stack[-1][1] = 2
            stack.append([d + 1, 0])
        else:
            # merge child codewords: parent = (u, u ^ v)
            bits[a + half:a + length] = bits[c:c + half] ^ bits[a:a + half]
            bits[a:a + half] = bits[c:c + half]
            stack.pop()
    cw[:] = bits[0:n]
    assert msg_pos == n and ops == n * m
    return ops


def decode_llr(soft_in, info_mask, llr_max, msg, cw, soft, bits):
    return _sc_core(soft_in, info_mask, msg, cw, soft, bits, llr_max, True)


def decode_pdiff(soft_in, info_mask, msg, cw, soft, bits):
    return _sc_core(soft_in, info_mask, msg, cw, soft, bits, 0.0, False)


def decode_llr_genie(soft_in, info_mask, truth, flags, llr_max, msg, cw, soft, bits):
    return _sc_core(soft_in, info_mask, msg, cw, soft, bits, llr_max, True,
                    truth=truth, flags=flags)
