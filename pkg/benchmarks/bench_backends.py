#!/usr/bin/env python3
"""Compare the compiled decode kernel against the pure-numpy fallback.

Runs identical frame batches through both paths on a mid-size code and a
larger one, checks that the outputs agree, and prints per-frame timings.

    python benchmarks/bench_backends.py [--frames 50] [--snr 3.0]
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from util_codes import make_regular_code  # noqa: E402

from nbldpc._kernels import HAVE_NUMBA  # noqa: E402
from nbldpc.channel import (  # noqa: E402
    compute_llr,
    make_constellation,
    modulate,
    noise_sigma,
    transmit_awgn,
)
from nbldpc.code import decompose  # noqa: E402
from nbldpc.embed import EmbeddingKind, build_system  # noqa: E402
from nbldpc.padmm import DecoderConfig, decode  # noqa: E402


def bench_one(label, sys_, cfg, llrs):
    rows = {}
    for backend in ("numba", "numpy"):
        if backend == "numba" and not HAVE_NUMBA:
            continue
        decode(sys_, cfg, llrs[0], backend=backend)  # warm-up / JIT
        t0 = time.perf_counter()
        iters = 0
        results = []
        for lam in llrs:
            res = decode(sys_, cfg, lam, backend=backend)
            iters += res.iterations
            results.append(res)
        dt = time.perf_counter() - t0
        rows[backend] = (dt / len(llrs), iters / len(llrs), results)
    if "numba" in rows and "numpy" in rows:
        for a, b in zip(rows["numba"][2], rows["numpy"][2]):
            assert np.array_equal(a.symbols, b.symbols), "backends disagree on decoded symbols"
            assert a.iterations == b.iterations
    print(f"\n{label}")
    print(f"  {'backend':<8} {'ms/frame':>10} {'mean iters':>12}")
    for backend, (per_frame, mean_iters, _) in rows.items():
        print(f"  {backend:<8} {1e3 * per_frame:>10.3f} {mean_iters:>12.1f}")
    if "numba" in rows and "numpy" in rows:
        print(f"  speedup: {rows['numpy'][0] / rows['numba'][0]:.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, default=50)
    ap.add_argument("--snr", type=float, default=3.0)
    args = ap.parse_args()

    con = make_constellation("qpsk")
    cfg = DecoderConfig(mu=0.6)
    cases = [
        ("(3,6)-regular n=96 over GF(4), flanagan", make_regular_code(96, 48, 6, 2, seed=11), EmbeddingKind.FLANAGAN),
        ("(3,6)-regular n=96 over GF(4), constant-weight", make_regular_code(96, 48, 6, 2, seed=11), EmbeddingKind.CONSTANT_WEIGHT),
        ("(3,6)-regular n=504 over GF(4), flanagan", make_regular_code(504, 252, 6, 2, seed=22), EmbeddingKind.FLANAGAN),
    ]
    for label, mat, kind in cases:
        code = decompose(mat)
        sys_ = build_system(code, kind)
        llrs = []
        for f in range(args.frames):
            rng = np.random.default_rng((4242, f))
            rx = transmit_awgn(modulate(con, np.zeros(mat.n, dtype=np.int64)), args.snr, rng)
            llrs.append(compute_llr(con, rx, kind, noise_sigma(args.snr), code.num_aux))
        bench_one(label, sys_, cfg, llrs)


if __name__ == "__main__":
    main()
