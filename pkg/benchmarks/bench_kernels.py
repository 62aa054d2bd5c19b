#!/usr/bin/env python3
"""Benchmark the numba enhancement kernel against the numpy fallback.

Both backends run the identical per-bin recursion on the same STFT grid;
the numba one is what `mfse.enhance` normally dispatches to, the numpy
one is what you get with MFSE_DISABLE_NUMBA=1.
"""

import argparse
import time

import numpy as np

from mfse.ifc import mean_noise_ifc_grid
from mfse.stft import StftConfig, analyze
from mfse._kernels import numpy_impl

try:
    from mfse._kernels import numba_impl
except ImportError:
    numba_impl = None


def make_grid(seconds, seed):
    """Noisy speech-ish test signal: harmonics + white noise."""
    rate = 16000
    rng = np.random.default_rng(seed)
    t = np.arange(int(seconds * rate)) / rate
    x = np.zeros_like(t)
    for f in range(200, 7800, 400):
        x += np.sin(2 * np.pi * f * t + rng.uniform(0, 2 * np.pi)) / 8
    x *= 0.5 + 0.5 * np.sin(2 * np.pi * 3.0 * t) ** 2
    x += rng.standard_normal(t.size) * 0.1
    return analyze(x, StftConfig()).data


def run(impl, y, mu, init, floor):
    spp = np.zeros(y.shape)
    return impl.enhance_bins(
        y, mu, init, spp, True, False,
        0.98, 0.92, 0.04, 0.97, 10.0 ** -1.5, 1.0, 10.0 ** 1.5, floor,
    )


def bench(impl, y, mu, init, floor, repeats):
    best = np.inf
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = run(impl, y, mu, init, floor)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seconds", type=float, default=2.0, help="audio length")
    ap.add_argument("--repeats", type=int, default=3, help="timed repetitions, best wins")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    y = make_grid(args.seconds, args.seed)
    mu = np.ascontiguousarray(mean_noise_ifc_grid(StftConfig(), 18))
    power = np.abs(y) ** 2
    init = power[:, :18].mean(axis=1)
    floor = 1e-12 * float(power.mean())
    frames = y.shape[1]
    print(f"grid: {y.shape[0]} bins x {frames} frames ({args.seconds:.1f} s of audio)")

    t_np, out_np = bench(numpy_impl, y, mu, init, floor, args.repeats)
    print(f"numpy : {t_np * 1e3:8.1f} ms  ({frames / t_np:8.0f} frames/s)")

    if numba_impl is None:
        print("numba : not available (numba not installed)")
        return

    run(numba_impl, y, mu, init, floor)  # compile/cache load outside timing
    t_nb, out_nb = bench(numba_impl, y, mu, init, floor, args.repeats)
    print(f"numba : {t_nb * 1e3:8.1f} ms  ({frames / t_nb:8.0f} frames/s)")
    print(f"speedup: {t_np / t_nb:.1f}x")

    scale = np.max(np.abs(out_np[0]))
    diff = np.max(np.abs(out_nb[0] - out_np[0])) / scale
    assert diff < 1e-9, f"backends disagree: rel diff {diff:.2e}"
    assert out_nb[2] == out_np[2]
    print(f"parity : max rel diff {diff:.1e}, fallbacks {out_nb[2]} (both)")


if __name__ == "__main__":
    main()
