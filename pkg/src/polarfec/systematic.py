"""Systematic encoding by erasure decoding.

The k data bits are written onto k codeword coordinates (the output set),
every other coordinate is erased (h = 0), and the probability-difference
decoder recovers the unique consistent message under the frozen
constraints.  All soft values stay on the exact alphabet {-1, 0, +1}, where
the combine rules are algebraically exact, so the pass is deterministic.

The output set is the information set itself: the standard choice, and the
induced k x k generator submatrix is checked to be invertible at
construction (by elimination up to n = 4096, by an encode round-trip spot
check above that).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code import CodeSpec, encode, materialize_generator
from .decoding import Decoder


class SystematicEncodingError(RuntimeError):
    """The erasure-decode pass failed to reproduce the data bits."""


@dataclass(frozen=True)
class SystematicSpec:
    base: CodeSpec
    output_set: np.ndarray


def gf2_rank(mat: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2) by row elimination."""
    a = np.array(mat, dtype=np.uint8) & 1
    rows, cols = a.shape
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, rows):
            if a[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        elim = a[:, col].astype(bool)
        elim[rank] = False
        a[elim] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def choose_output_set(spec: CodeSpec) -> SystematicSpec:
    """Pick the codeword coordinates that will carry the data bits."""
    output_set = spec.info_set.copy()
    sspec = SystematicSpec(base=spec, output_set=output_set)
    if spec.n <= 4096:
        sub = materialize_generator(spec.m)[np.ix_(spec.info_set, output_set)]
        if gf2_rank(sub) != spec.k:
            raise ValueError(
                "information-set rows do not span the chosen output coordinates")
    else:
        probe = block_probe(spec.k)
        try:
            systematic_encode(probe, sspec)
        except SystematicEncodingError as exc:
            raise ValueError(
                f"systematic round-trip spot check failed: {exc}") from exc
    return sspec


def block_probe(k: int) -> np.ndarray:
    """Fixed pseudo-random data word used for the large-n spot check."""
    return (np.arange(k, dtype=np.int64) * 2654435761 >> 16).astype(np.uint8) & 1


def systematic_encode(data, sspec: SystematicSpec,
                      decoder: Decoder | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Encode k data bits so they appear verbatim on the output set.

    Returns (message, codeword) with codeword[output_set] == data and zeros
    on the frozen message positions.  Raises SystematicEncodingError if the
    erasure decode does not reproduce the data, which would mean the output
    set and the decoder disagree.
    """
    spec = sspec.base
    data = np.asarray(data, dtype=np.uint8)
    if data.shape != (spec.k,):
        raise ValueError(f"expected {spec.k} data bits, got shape {data.shape}")
    h = np.zeros(spec.n, dtype=np.float64)
    h[sspec.output_set] = 1.0 - 2.0 * data
    dec = decoder if decoder is not None else Decoder(spec)
    result = dec.decode_pdiff(h)
    if np.any(result.codeword[sspec.output_set] != data):
        raise SystematicEncodingError(
            "erasure decode did not reproduce the data bits")
    if np.any(result.message[spec.info_mask == 0] != 0):
        raise SystematicEncodingError("frozen message positions are nonzero")
    return result.message, result.codeword


def solve_systematic_gf2(data, sspec: SystematicSpec) -> np.ndarray:
    """Independent linear-algebra route to the systematic codeword.

    Solves for the message over GF(2) with the materialized generator; test
    oracle for :func:`systematic_encode` at small n.
    """
    spec = sspec.base
    data = np.asarray(data, dtype=np.uint8)
    gen = materialize_generator(spec.m)
    sub = gen[np.ix_(spec.info_set, sspec.output_set)]
    # Gauss-Jordan solve sub^T x = data over GF(2)
    a = np.concatenate([sub.T, data[:, None]], axis=1).astype(np.uint8)
    k = spec.k
    pivots = []
    rank = 0
    for col in range(k):
        pivot = None
        for r in range(rank, k):
            if a[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        elim = a[:, col].astype(bool)
        elim[rank] = False
        a[elim] ^= a[rank]
        pivots.append(col)
        rank += 1
    if rank != k:
        raise ValueError("output-set submatrix is singular")
    x = np.zeros(k, dtype=np.uint8)
    for r, col in enumerate(pivots):
        x[col] = a[r, k]
    msg = np.zeros(spec.n, dtype=np.uint8)
    msg[spec.info_set] = x
    return encode(msg, spec)
