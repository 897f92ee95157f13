# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot-loop kernels.

Same entry points, scratch layout and combine semantics as ``_pykernels``;
see that module for the schedule description.  The successive-decoding core
runs without the GIL so worker threads parallelize across blocks.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atanh, fabs, tanh

cnp.import_array()

cdef double _DENOM_EPS = 1e-15


def scratch_sizes(int n):
    return 2 * n - 1, 2 * n - 1


def encode_inplace(cnp.uint8_t[::1] bits not None):
    cdef Py_ssize_t n = bits.shape[0]
    cdef Py_ssize_t half = 1
    cdef Py_ssize_t base, j
    cdef cnp.uint8_t tmp
    with nogil:
        while half < n:
            base = 0
            while base < n:
                for j in range(half):
                    bits[base + j] ^= bits[base + half + j]
                base += 2 * half
            half *= 2
        for j in range(n // 2):
            tmp = bits[j]
            bits[j] = bits[n - 1 - j]
            bits[n - 1 - j] = tmp


cdef inline double _tanh_half(double a) nogil:
    # tanh rounds to exactly +-1.0 in float64 beyond |x| ~ 19, so skipping
    # the libm call past 20 changes nothing
    if a >= 40.0:
        return 1.0
    if a <= -40.0:
        return -1.0
    return tanh(0.5 * a)


cdef inline double _f_llr(double a, double b, double llr_max) nogil:
    cdef double t = _tanh_half(a) * _tanh_half(b)
    if t >= 1.0:
        return llr_max
    if t <= -1.0:
        return -llr_max
    t = 2.0 * atanh(t)
    if t > llr_max:
        return llr_max
    if t < -llr_max:
        return -llr_max
    return t


cdef inline double _g_llr(double a, double b, double sign, double llr_max) nogil:
    cdef double t = a + sign * b
    if t > llr_max:
        return llr_max
    if t < -llr_max:
        return -llr_max
    return t


cdef inline double _g_pdiff(double a, double b, double sign) nogil:
    cdef double num = a + sign * b
    cdef double den = 1.0 + sign * a * b
    cdef double t
    if fabs(den) < _DENOM_EPS:
        return 0.0
    t = num / den
    if t > 1.0:
        return 1.0
    if t < -1.0:
        return -1.0
    return t


cdef long long _sc_core(const double[::1] soft_in,
                        const cnp.uint8_t[::1] info_mask,
                        cnp.uint8_t[::1] msg,
                        cnp.uint8_t[::1] cw,
                        double[::1] soft,
                        cnp.uint8_t[::1] bits,
                        double llr_max,
                        bint use_llr,
                        const cnp.uint8_t[::1] truth,
                        cnp.uint8_t[::1] flags) nogil:
    cdef Py_ssize_t n = soft_in.shape[0]
    cdef Py_ssize_t off[64]
    cdef int depth_stack[64]
    cdef int phase_stack[64]
    cdef int sp = 0
    cdef int d
    cdef Py_ssize_t length, half, a, c, k, size, msg_pos
    cdef long long ops = 0
    cdef double x, sgn
    cdef cnp.uint8_t bit, tentative
    cdef bint genie = truth is not None

    off[0] = 0
    size = n
    d = 0
    while size >= 1:
        off[d + 1] = off[d] + size
        size >>= 1
        d += 1

    for k in range(n):
        soft[k] = soft_in[k]

    msg_pos = 0
    depth_stack[0] = 0
    phase_stack[0] = 0
    sp = 1
    while sp > 0:
        d = depth_stack[sp - 1]
        length = n >> d
        if length == 1:
            x = soft[off[d]]
            if info_mask[msg_pos]:
                bit = 1 if x < 0.0 else 0
                if genie:
                    tentative = bit
                    bit = truth[msg_pos]
                    flags[msg_pos] = 1 if tentative != bit else 0
            else:
                bit = 0
            msg[msg_pos] = bit
            bits[off[d]] = bit
            msg_pos += 1
            sp -= 1
            continue
        half = length >> 1
        a = off[d]
        c = off[d + 1]
        if phase_stack[sp - 1] == 0:
            if use_llr:
                for k in range(half):
                    soft[c + k] = _f_llr(soft[a + k], soft[a + half + k], llr_max)
            else:
                for k in range(half):
                    soft[c + k] = soft[a + k] * soft[a + half + k]
            ops += half
            phase_stack[sp - 1] = 1
            depth_stack[sp] = d + 1
            phase_stack[sp] = 0
            sp += 1
        elif phase_stack[sp - 1] == 1:
            for k in range(half):
                bits[a + k] = bits[c + k]
            if use_llr:
                for k in range(half):
                    sgn = 1.0 - 2.0 * bits[a + k]
                    soft[c + k] = _g_llr(soft[a + k], soft[a + half + k], sgn, llr_max)
            else:
                for k in range(half):
                    sgn = 1.0 - 2.0 * bits[a + k]
                    soft[c + k] = _g_pdiff(soft[a + k], soft[a + half + k], sgn)
            ops += half
            phase_stack[sp - 1] = 2
            depth_stack[sp] = d + 1
            phase_stack[sp] = 0
            sp += 1
        else:
            for k in range(half):
                bits[a + half + k] = bits[c + k] ^ bits[a + k]
                bits[a + k] = bits[c + k]
            sp -= 1

    for k in range(n):
        cw[k] = bits[k]
    return ops


def decode_llr(const double[::1] soft_in not None,
               const cnp.uint8_t[::1] info_mask not None,
               double llr_max,
               cnp.uint8_t[::1] msg not None,
               cnp.uint8_t[::1] cw not None,
               double[::1] soft not None,
               cnp.uint8_t[::1] bits not None):
    cdef long long ops
    with nogil:
        ops = _sc_core(soft_in, info_mask, msg, cw, soft, bits, llr_max, True,
                       None, None)
    return ops


def decode_pdiff(const double[::1] soft_in not None,
                 const cnp.uint8_t[::1] info_mask not None,
                 cnp.uint8_t[::1] msg not None,
                 cnp.uint8_t[::1] cw not None,
                 double[::1] soft not None,
                 cnp.uint8_t[::1] bits not None):
    cdef long long ops
    with nogil:
        ops = _sc_core(soft_in, info_mask, msg, cw, soft, bits, 0.0, False,
                       None, None)
    return ops


def decode_llr_genie(const double[::1] soft_in not None,
                     const cnp.uint8_t[::1] info_mask not None,
                     const cnp.uint8_t[::1] truth not None,
                     cnp.uint8_t[::1] flags not None,
                     double llr_max,
                     cnp.uint8_t[::1] msg not None,
                     cnp.uint8_t[::1] cw not None,
                     double[::1] soft not None,
                     cnp.uint8_t[::1] bits not None):
    cdef long long ops
    with nogil:
        ops = _sc_core(soft_in, info_mask, msg, cw, soft, bits, llr_max, True,
                       truth, flags)
    return ops
