#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Times the three hot paths on representative workloads: single-trajectory
propagation (cached and uncached masks), the classical analog, and the
exact-channel accumulation over all 2^E realizations. The numba build is
warmed up (JIT compile excluded from timings).

Usage: python benchmarks/bench_kernels.py [--quick]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from percwalk import _kernels
from percwalk.graph import make_complete, make_ring, rng_from_seed, sample_keep_bits
from percwalk.walk import basis_state


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_cases(quick: bool):
    traj_steps = 2_000 if quick else 20_000
    ring_channel = 10 if quick else 13

    g_ring = make_ring(15)
    bits_ring = sample_keep_bits(g_ring, 0.5, rng_from_seed(0), traj_steps)
    rec_ring = np.arange(0, traj_steps + 1, 100, dtype=np.int64)
    psi_ring = basis_state(15, 0)

    g_cplt = make_complete(15)
    bits_cplt = sample_keep_bits(g_cplt, 0.3, rng_from_seed(1), traj_steps)
    psi_cplt = basis_state(15, 0)

    g_ch = make_ring(ring_channel)
    p0 = np.zeros(15)
    p0[0] = 1.0

    return [
        (
            f"trajectory ring:15 S={traj_steps} (cached masks)",
            lambda f: f(g_ring.edge_array, 15, 1.0, 0.004, bits_ring, rec_ring, psi_ring, 10_000, 1e-12),
            _kernels.trajectory_states_numba if _kernels.HAVE_NUMBA else None,
            _kernels.trajectory_states_numpy,
        ),
        (
            f"trajectory complete:15 S={traj_steps} (fresh masks)",
            lambda f: f(g_cplt.edge_array, 15, 1.0, 1e-4, bits_cplt, rec_ring, psi_cplt, 10_000, 1e-12),
            _kernels.trajectory_states_numba if _kernels.HAVE_NUMBA else None,
            _kernels.trajectory_states_numpy,
        ),
        (
            f"classical complete:15 S={traj_steps}",
            lambda f: f(g_cplt.edge_array, 15, 1.0, 1e-4, bits_cplt, rec_ring, p0),
            _kernels.classical_trajectory_numba if _kernels.HAVE_NUMBA else None,
            _kernels.classical_trajectory_numpy,
        ),
        (
            f"channel ring:{ring_channel} (2^{ring_channel} realizations)",
            lambda f: f(g_ch.edge_array, ring_channel, 1.0, 0.5, 0.004),
            _kernels.channel_accumulate_numba if _kernels.HAVE_NUMBA else None,
            _kernels.channel_accumulate_numpy,
        ),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    ap.add_argument("--repeat", type=int, default=3, help="repetitions, best-of")
    args = ap.parse_args()

    if not _kernels.HAVE_NUMBA:
        print("numba not importable; timing the numpy path only")

    print(f"{'case':<48} {'numba':>10} {'numpy':>10} {'speedup':>8}")
    for name, call, fn_nb, fn_np in bench_cases(args.quick):
        if fn_nb is not None:
            call(fn_nb)  # JIT warmup
            t_nb = _time(lambda: call(fn_nb), args.repeat)
        else:
            t_nb = float("nan")
        t_np = _time(lambda: call(fn_np), args.repeat)
        speedup = t_np / t_nb if t_nb == t_nb else float("nan")
        print(f"{name:<48} {t_nb:>9.3f}s {t_np:>9.3f}s {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
