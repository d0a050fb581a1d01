#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the two hot paths (integrate-and-fire simulation and the
bidirectional interval sweep) on a paper-scale stream and prints a
side-by-side table. Run with --small for a quick sanity pass.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from spikecam.backend import HAS_NUMBA, set_backend
from spikecam.isi import gisi_sweep
from spikecam.scenes import generate_synthetic_scene
from spikecam.simulator import SimConfig, apply_darkening, simulate_stream
from spikecam.stream import contiguous_windows


def timed(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--small", action="store_true",
                        help="64x64 x 5 windows instead of 250x400 x 21")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if args.small:
        height, width, num_windows = 64, 64, 5
    else:
        height, width, num_windows = 250, 400, 21
    window_len = 41
    length = num_windows * window_len

    scene = generate_synthetic_scene("random-texture-flow", height, width,
                                     length, seed=7)
    scene = apply_darkening(scene, 0.08)
    cfg = SimConfig(seed=7)
    stream = simulate_stream(scene, cfg)
    windows = contiguous_windows(stream, num_windows, window_len)

    backends = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    if HAS_NUMBA:
        set_backend("numba")  # trigger JIT compilation outside the timer
        simulate_stream(scene, cfg)
        gisi_sweep(windows)

    print(f"stream {height}x{width}x{length}, {num_windows} windows of "
          f"{window_len} ticks, best of {args.repeats}")
    print(f"{'kernel':<24} " + " ".join(f"{b:>12}" for b in backends))
    rows = {
        "simulate_stream": lambda: simulate_stream(scene, cfg),
        "gisi_sweep": lambda: gisi_sweep(windows),
    }
    for name, fn in rows.items():
        cells = []
        for backend in backends:
            set_backend(backend)
            cells.append(f"{timed(fn, args.repeats) * 1e3:>10.1f}ms")
        print(f"{name:<24} " + " ".join(f"{c:>12}" for c in cells))
    set_backend("auto")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
