"""Benchmark the compiled kernels against the pure-Python fallback.

Run:  python benchmarks/compare_backends.py
"""

import time

import numpy as np

from polarfec._kernels import _pykernels

try:
    from polarfec._kernels import _ckernels
except ImportError:
    _ckernels = None


def time_fn(fn, repeats):
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats


def bench_backend(impl, n, repeats):
    rng = np.random.default_rng(1)
    info_mask = np.zeros(n, dtype=np.uint8)
    info_mask[rng.permutation(n)[: n // 2]] = 1
    llr = np.clip(rng.normal(3.2, 2.5, n) * rng.choice([-1.0, 1.0], n), -100, 100)
    h = np.tanh(llr / 2)
    soft_len, bit_len = impl.scratch_sizes(n)
    soft = np.empty(soft_len)
    bits = np.empty(bit_len, dtype=np.uint8)
    msg = np.empty(n, dtype=np.uint8)
    cw = np.empty(n, dtype=np.uint8)
    word = rng.integers(0, 2, n, dtype=np.uint8)

    res = {}
    res["encode"] = time_fn(lambda: impl.encode_inplace(word), repeats * 10)
    res["scd"] = time_fn(
        lambda: impl.decode_llr(llr, info_mask, 100.0, msg, cw, soft, bits), repeats)
    res["msd"] = time_fn(
        lambda: impl.decode_pdiff(h, info_mask, msg, cw, soft, bits), repeats)
    return res


def main():
    print(f"{'n':>7} {'kernel':>8} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for n, repeats in [(256, 50), (1024, 20), (16384, 3)]:
        py = bench_backend(_pykernels, n, repeats)
        cc = bench_backend(_ckernels, n, repeats) if _ckernels else None
        for key in ("encode", "scd", "msd"):
            pt = py[key]
            if cc is None:
                print(f"{n:>7} {key:>8} {pt * 1e6:>10.1f}us {'n/a':>12} {'n/a':>9}")
            else:
                ct = cc[key]
                print(f"{n:>7} {key:>8} {pt * 1e6:>10.1f}us {ct * 1e6:>10.1f}us "
                      f"{pt / ct:>8.1f}x")


if __name__ == "__main__":
    main()
