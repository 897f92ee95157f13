"""Command-line frontend.

Subcommands: construct, transfer, encode, decode, simulate.  Every run is a
pure function of its flags, input files and seed; CSV outputs echo the
command line in a leading ``# cmd:`` comment.  Exit codes: 0 success,
2 configuration error, 3 internal postcondition failure.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__
from .channel import ChannelModel
from .code import encode, read_info_set
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
from .simulation import (
    BlockPolicy,
    ConfigError,
    PointConfig,
    run_sweep,
    write_csv,
)
from .systematic import SystematicEncodingError, choose_output_set, systematic_encode

DEFAULT_SEED = 20080117


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="block length, a power of two")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int, help="code dimension")
    group.add_argument("--rate", type=float, help="code rate, k = round(rate * n)")


def _resolve_k(args) -> int:
    if args.k is not None:
        return args.k
    return int(round(args.rate * args.n))


def _check_n(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise ConfigError(f"--n must be a power of two >= 2, got {n}")
    return n.bit_length() - 1


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="ascii"), True


def cmd_construct(args) -> int:
    m = _check_n(args.n)
    k = _resolve_k(args)
    if not 1 <= k <= args.n:
        raise ConfigError(f"k must be in [1, {args.n}], got {k}")
    method = Method(args.method)
    rate = k / args.n
    ch = ChannelModel.from_ebn0_db(args.ebn0_db, rate)
    if method is Method.EQSNR:
        profile = eqsnr_profile(ch.snr, m)
    elif method is Method.DEGA:
        profile = dega_profile(ch.base_mean_llr, m)
    elif method is Method.BEC:
        profile = bec_profile(args.eps, m)
    elif method is Method.RM:
        profile = rm_profile(m)
    else:
        profile = genie_profile(m, ch, args.blocks, args.seed, workers=args.workers)
    spec = select_info_set(profile, k)
    out, close = _open_out(args.out)
    try:
        out.write(f"m={spec.m} k={spec.k}\n")
        out.write(" ".join(str(i) for i in spec.info_set) + "\n")
    finally:
        if close:
            out.close()
    if args.scores_csv:
        selected = np.zeros(args.n, dtype=int)
        selected[spec.info_set] = 1
        with open(args.scores_csv, "w", encoding="ascii") as f:
            f.write(f"# cmd: {_echo(args)}\n")
            f.write("index,score,selected\n")
            for i in range(args.n):
                f.write(f"{i},{profile.scores[i]:.6g},{selected[i]}\n")
    return 0


def cmd_transfer(args) -> int:
    """Degraded-branch transfer functions of the two Gaussian constructions.

    Mean-LLR map: L = 4 * snr, i.e. L = 2 / sigma2 for unit-energy BPSK
    with snr = 1 / (2 * sigma2).
    """
    from .construction import dega_step, eqsnr_step

    grid = np.linspace(args.l0_min, args.l0_max, args.points)
    out, close = _open_out(args.out)
    try:
        out.write(f"# cmd: {_echo(args)}\n")
        out.write("# mean-LLR map: L = 4 * snr (unit-energy BPSK, snr = 1/(2*sigma2))\n")
        out.write("l0,lv_dega,lv_eqsnr_as_llr\n")
        for l0 in grid:
            lv_dega = 0.0 if l0 <= 0 else dega_step(float(l0), float(l0))[1]
            lv_eq = 0.0 if l0 <= 0 else 4.0 * eqsnr_step(float(l0) / 4.0)[1]
            out.write(f"{l0:.6g},{lv_dega:.6g},{lv_eq:.6g}\n")
    finally:
        if close:
            out.close()
    return 0


def _read_bits(path, expect: int) -> np.ndarray:
    with open(path, "r", encoding="ascii") as f:
        tokens = f.read().split()
    bits = np.array([int(t) for t in tokens], dtype=np.uint8)
    if bits.size != expect or np.any(bits > 1):
        raise ConfigError(f"expected {expect} bits (0/1) in {path}, got {bits.size}")
    return bits


def cmd_encode(args) -> int:
    spec = read_info_set(args.info_set)
    if args.random:
        rng = np.random.default_rng(args.seed)
        data = rng.integers(0, 2, size=spec.k, dtype=np.uint8)
    else:
        if args.data is None:
            raise ConfigError("encode needs --data FILE or --random")
        data = _read_bits(args.data, spec.k)
    if args.systematic:
        sspec = choose_output_set(spec)
        message, codeword = systematic_encode(data, sspec)
    else:
        message = spec.message_from_data(data)
        codeword = encode(message, spec)
    out, close = _open_out(args.out)
    try:
        out.write("\n".join(str(b) for b in codeword) + "\n")
    finally:
        if close:
            out.close()
    if args.message_out:
        with open(args.message_out, "w", encoding="ascii") as f:
            f.write("\n".join(str(b) for b in message) + "\n")
    return 0


def cmd_decode(args) -> int:
    spec = read_info_set(args.info_set)
    with open(args.infile, "r", encoding="ascii") as f:
        soft = np.array([float(t) for t in f.read().split()], dtype=np.float64)
    if soft.size != spec.n:
        raise ConfigError(f"expected {spec.n} soft values, got {soft.size}")
    dec = Decoder(spec, llr_max=args.llr_max)
    result = dec.decode_llr(soft) if args.decoder == "scd" else dec.decode_pdiff(soft)
    data = spec.data_from_message(result.message)
    out, close = _open_out(args.out)
    try:
        out.write("\n".join(str(b) for b in data) + "\n")
    finally:
        if close:
            out.close()
    if args.codeword_out:
        with open(args.codeword_out, "w", encoding="ascii") as f:
            f.write("\n".join(str(b) for b in result.codeword) + "\n")
    return 0


def cmd_simulate(args) -> int:
    k = _resolve_k(args)
    config = PointConfig(
        n=args.n, k=k, method=Method(args.method), decoder=args.decoder,
        systematic=args.systematic, design_eps=args.eps,
        genie_blocks=args.genie_blocks, llr_max=args.llr_max,
        noiseless=args.noiseless)
    if args.blocks is not None:
        policy = BlockPolicy(fixed=args.blocks)
    else:
        policy = BlockPolicy(fixed=None, error_target=args.error_target,
                             max_blocks=args.max_blocks)
    t0 = time.perf_counter()
    records = run_sweep(config, args.ebn0_db, policy, args.seed,
                        workers=args.workers)
    elapsed = time.perf_counter() - t0
    out, close = _open_out(args.out)
    try:
        write_csv(records, out, cmd=_echo(args))
    finally:
        if close:
            out.close()
    total = sum(r.blocks for r in records)
    print(f"simulated {total} blocks over {len(records)} point(s) "
          f"in {elapsed:.1f} s", file=sys.stderr)
    return 0


def _echo(args) -> str:
    return " ".join(args.argv)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarfec",
        description="Polar / recursive-Plotkin code construction, coding and simulation")
    parser.add_argument("--version", action="version", version=f"polarfec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="compute an information set")
    _add_code_args(p)
    p.add_argument("--method", choices=[m.value for m in Method], required=True)
    p.add_argument("--ebn0-db", type=float, default=2.0,
                   help="design Eb/N0 in dB (eqsnr, dega, genie)")
    p.add_argument("--eps", type=float, default=0.5,
                   help="design erasure probability (bec)")
    p.add_argument("--blocks", type=int, default=100_000,
                   help="Monte-Carlo blocks (genie)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="random seed (default %(default)s)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-", help="info-set file (default stdout)")
    p.add_argument("--scores-csv", help="also write per-index scores")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("transfer",
                       help="degraded-branch transfer function comparison CSV")
    p.add_argument("--l0-min", type=float, default=0.2)
    p.add_argument("--l0-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("encode", help="encode data bits")
    p.add_argument("--info-set", required=True, help="info-set file")
    p.add_argument("--data", help="file with k data bits")
    p.add_argument("--random", action="store_true", help="draw random data bits")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="random seed (default %(default)s)")
    p.add_argument("--systematic", action="store_true")
    p.add_argument("--out", default="-", help="codeword bits, one per line")
    p.add_argument("--message-out", help="also write the message word")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="decode soft values from a file")
    p.add_argument("--info-set", required=True)
    p.add_argument("--in", dest="infile", required=True,
                   help="soft values, one float per line (LLR for scd, h for msd)")
    p.add_argument("--decoder", choices=["scd", "msd"], default="scd")
    p.add_argument("--llr-max", type=float, default=LLR_MAX)
    p.add_argument("--out", default="-", help="decoded data bits")
    p.add_argument("--codeword-out", help="also write the re-encoded codeword")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte-Carlo BER/BLER sweep CSV")
    _add_code_args(p)
    p.add_argument("--method", choices=[m.value for m in Method], default="dega")
    p.add_argument("--decoder", choices=["scd", "msd"], default="scd")
    p.add_argument("--systematic", action="store_true")
    p.add_argument("--ebn0-db", type=float, nargs="+", required=True,
                   help="operating (and design) Eb/N0 points in dB")
    p.add_argument("--blocks", type=int, help="fixed blocks per point")
    p.add_argument("--error-target", type=int, default=100,
                   help="stop a point after this many block errors")
    p.add_argument("--max-blocks", type=int, default=10_000_000)
    p.add_argument("--eps", type=float, default=0.5,
                   help="design erasure probability (bec construction)")
    p.add_argument("--genie-blocks", type=int, default=100_000)
    p.add_argument("--llr-max", type=float, default=LLR_MAX)
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="random seed (default %(default)s)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = ["polarfec"] + argv
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystematicEncodingError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
