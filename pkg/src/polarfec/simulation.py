"""Monte-Carlo BER/BLER measurement on the BIAWGN channel.

Each simulated point reconstructs the code for its operating SNR (the
design SNR of the eqsnr / dega / genie constructions is the operating SNR;
the BEC construction takes a separate design erasure probability), then
runs independent blocks: draw random data, encode (systematically or not),
transmit, decode, count information-bit and block errors.

Blocks are processed in fixed-size batches.  Per-block randomness comes
from counter-based streams keyed by (seed, block, purpose), and counts are
added associatively, so a run is bit-identical for any worker count.  The
stop-at-error-count policy is evaluated on batch boundaries only, which
keeps the consumed block count deterministic as well.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import (
    PURPOSE_DATA,
    PURPOSE_NOISE,
    ChannelModel,
    block_stream,
    transmit_llr,
)
from .code import CodeSpec, encode
from .construction import (
    Method,
    bec_profile,
    dega_profile,
    eqsnr_profile,
    genie_profile,
    rm_profile,
    select_info_set,
)
from .decoding import Decoder
from .numerics import LLR_MAX
from .systematic import SystematicSpec, choose_output_set, systematic_encode

BATCH_BLOCKS = 4096

CSV_HEADER = ("n,k,rate,construction,decoder,systematic,ebn0_db,blocks,"
              "bit_errors,block_errors,ber,bler,seed")


class ConfigError(ValueError):
    """Inconsistent simulation configuration, raised before any work."""


@dataclass(frozen=True)
class PointConfig:
    """Everything needed to measure one (code, channel, decoder) point."""

    n: int
    k: int
    method: Method
    decoder: str = "scd"            # "scd" (LLR) or "msd" (prob. difference)
    systematic: bool = False
    ebn0_db: float = 2.0
    design_eps: float = 0.5         # BEC construction only
    genie_blocks: int = 100_000     # genie construction only
    llr_max: float = LLR_MAX
    noiseless: bool = False

    def validate(self) -> None:
        n = self.n
        if n < 2 or n & (n - 1):
            raise ConfigError(f"n must be a power of two >= 2, got {n}")
        if not 1 <= self.k <= n:
            raise ConfigError(f"k must be in [1, {n}], got {self.k}")
        try:
            Method(self.method)
        except ValueError:
            raise ConfigError(f"unknown construction method {self.method!r}") from None
        if self.decoder not in ("scd", "msd"):
            raise ConfigError(f"decoder must be 'scd' or 'msd', got {self.decoder!r}")
        if not 0.0 <= self.design_eps <= 1.0:
            raise ConfigError(f"design_eps must be in [0, 1], got {self.design_eps}")
        if self.genie_blocks < 1:
            raise ConfigError("genie_blocks must be >= 1")


@dataclass(frozen=True)
class BlockPolicy:
    """Fixed block count, or stop after error_target block errors."""

    fixed: int | None = None
    error_target: int = 100
    max_blocks: int = 10_000_000

    def validate(self) -> None:
        if self.fixed is not None and self.fixed < 1:
            raise ConfigError("fixed block count must be >= 1")
        if self.fixed is None and self.error_target < 1:
            raise ConfigError("error_target must be >= 1")
        if self.max_blocks < 1:
            raise ConfigError("max_blocks must be >= 1")


@dataclass(frozen=True)
class SimRecord:
    """One measured Monte-Carlo point."""

    n: int
    k: int
    rate: float
    construction: str
    decoder: str
    systematic: bool
    ebn0_db: float
    blocks: int
    bit_errors: int
    block_errors: int
    ber: float
    bler: float
    seed: int

    def csv_row(self) -> str:
        return ",".join([
            str(self.n), str(self.k), f"{self.rate:.6g}",
            self.construction, self.decoder, str(int(self.systematic)),
            f"{self.ebn0_db:.6g}", str(self.blocks),
            str(self.bit_errors), str(self.block_errors),
            f"{self.ber:.6g}", f"{self.bler:.6g}", str(self.seed),
        ])


def construct_for_point(config: PointConfig, ch: ChannelModel, seed: int,
                        workers: int = 1) -> CodeSpec:
    """Reconstruct the code for one operating point."""
    m = config.n.bit_length() - 1
    method = Method(config.method)
    if method is Method.EQSNR:
        profile = eqsnr_profile(ch.snr, m)
    elif method is Method.DEGA:
        profile = dega_profile(ch.base_mean_llr, m)
    elif method is Method.BEC:
        profile = bec_profile(config.design_eps, m)
    elif method is Method.RM:
        profile = rm_profile(m)
    else:
        profile = genie_profile(m, ch, config.genie_blocks, seed,
                                workers=workers, llr_max=config.llr_max)
    return select_info_set(profile, config.k)


def _run_blocks(config: PointConfig, spec: CodeSpec,
                sspec: SystematicSpec | None, ch: ChannelModel,
                seed: int, lo: int, hi: int) -> tuple[int, int]:
    dec = Decoder(spec, llr_max=config.llr_max)
    bit_errors = 0
    block_errors = 0
    use_llr = config.decoder == "scd"
    for b in range(lo, hi):
        data = block_stream(seed, b, PURPOSE_DATA).integers(0, 2, size=spec.k,
                                                            dtype=np.uint8)
        if sspec is not None:
            _, cw = systematic_encode(data, sspec, decoder=dec)
        else:
            cw = encode(spec.message_from_data(data), spec)
        rng = None if config.noiseless else block_stream(seed, b, PURPOSE_NOISE)
        llr = transmit_llr(cw, ch, rng, llr_max=config.llr_max,
                           noiseless=config.noiseless)
        result = dec.decode_llr(llr) if use_llr else dec.decode_pdiff(np.tanh(0.5 * llr))
        if sspec is not None:
            errs = int(np.count_nonzero(result.codeword[sspec.output_set] != data))
        else:
            errs = int(np.count_nonzero(spec.data_from_message(result.message) != data))
        bit_errors += errs
        block_errors += errs > 0
    return bit_errors, block_errors


def run_point(config: PointConfig, policy: BlockPolicy, seed: int,
              workers: int = 1) -> SimRecord:
    """Measure one point; deterministic in (config, policy, seed)."""
    config.validate()
    policy.validate()
    ch = ChannelModel.from_ebn0_db(config.ebn0_db, config.k / config.n)
    spec = construct_for_point(config, ch, seed, workers=workers)
    sspec = choose_output_set(spec) if config.systematic else None

    target = policy.fixed if policy.fixed is not None else policy.max_blocks
    bit_errors = 0
    block_errors = 0
    done = 0
    while done < target:
        batch = min(BATCH_BLOCKS, target - done)
        if workers <= 1:
            be, blke = _run_blocks(config, spec, sspec, ch, seed, done, done + batch)
        else:
            bounds = np.linspace(done, done + batch, workers + 1, dtype=np.int64)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(
                    lambda ab: _run_blocks(config, spec, sspec, ch, seed, ab[0], ab[1]),
                    zip(bounds[:-1], bounds[1:])))
            be = sum(p[0] for p in parts)
            blke = sum(p[1] for p in parts)
        bit_errors += be
        block_errors += blke
        done += batch
        if policy.fixed is None and block_errors >= policy.error_target:
            break
    return SimRecord(
        n=config.n, k=config.k, rate=config.k / config.n,
        construction=Method(config.method).value, decoder=config.decoder,
        systematic=config.systematic, ebn0_db=config.ebn0_db, blocks=done,
        bit_errors=bit_errors, block_errors=block_errors,
        ber=bit_errors / (done * config.k), bler=block_errors / done,
        seed=seed)


def run_sweep(config: PointConfig, ebn0_db_list, policy: BlockPolicy,
              seed: int, workers: int = 1) -> list[SimRecord]:
    """One record per SNR, ascending, reconstructing the code per point."""
    records = []
    for ebn0 in sorted(float(x) for x in ebn0_db_list):
        records.append(run_point(replace(config, ebn0_db=ebn0), policy, seed,
                                 workers=workers))
    return records


def write_csv(records, out: io.TextIOBase, cmd: str | None = None) -> None:
    if cmd is not None:
        out.write(f"# cmd: {cmd}\n")
    out.write(CSV_HEADER + "\n")
    for rec in records:
        out.write(rec.csv_row() + "\n")
