#!/usr/bin/env python3
"""
Benchmark compiled kernels against their pure-Python sources.

Every kernel in hnaufbau.kernels exists twice: ``foo_py`` (interpreted)
and ``foo`` (numba-compiled unless HNAUFBAU_JIT disables it). This script
times matched pairs on representative workloads:

1. Shifted-QR eigenvalues of dense complex matrices
2. Sector Hamiltonian application (fermion and boson)
3. Configuration energy sweeps (the Aufbau hot loop)
4. One-body correlation matrices
5. Permanents by Ryser's formula

Usage:
    python3 benchmarks/benchmark_kernels.py
    python3 benchmarks/benchmark_kernels.py --quick
    python3 benchmarks/benchmark_kernels.py --output results.json
"""

import argparse
import json
import math
import time

import numpy as np

from hnaufbau import kernels
from hnaufbau.kernels import JIT_ENABLED, NUMBA_AVAILABLE


def timed(fn, args, repeats, reset=None):
    """Best-of-repeats wall time for fn(*args); reset() runs between laps
    untimed (used to zero accumulator arrays)."""
    best = math.inf
    for _ in range(repeats):
        if reset is not None:
            reset()
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def adaptive_repeats(fn, args, budget=0.5, reset=None):
    """Pick a repeat count so the interpreted route stays under ~budget s."""
    if reset is not None:
        reset()
    start = time.perf_counter()
    fn(*args)
    once = time.perf_counter() - start
    return max(1, min(5, int(budget / max(once, 1e-9))))


def row(results, group, label, jit_s, py_s):
    speedup = py_s / jit_s if (JIT_ENABLED and jit_s > 0) else float("nan")
    jit_txt = f"{jit_s:>12.5f}" if JIT_ENABLED else f"{'-':>12}"
    spd_txt = f"{speedup:>9.1f}x" if JIT_ENABLED else f"{'-':>10}"
    print(f"{label:<34} {jit_txt} {py_s:>12.5f} {spd_txt}")
    results.append(
        {
            "group": group,
            "case": label,
            "jit_seconds": jit_s if JIT_ENABLED else None,
            "python_seconds": py_s,
            "speedup": speedup if JIT_ENABLED else None,
        }
    )


def header(title):
    print(f"\n{title}")
    print(f"{'case':<34} {'jit (s)':>12} {'python (s)':>12} {'speedup':>10}")
    print("-" * 71)


def bench_eigenvalues(results, rng, sizes):
    header("SHIFTED-QR EIGENVALUES (dense complex, Hessenberg input)")
    for n in sizes:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = np.triu(a, -1)
        reps = adaptive_repeats(kernels.qr_eigvals_py, (h.copy(), 80, 1e-13, 10))
        jit_s = (
            timed(lambda: kernels.qr_eigvals(h.copy(), 80, 1e-13, 10), (), 3)
            if JIT_ENABLED
            else math.inf
        )
        py_s = timed(lambda: kernels.qr_eigvals_py(h.copy(), 80, 1e-13, 10), (), reps)
        row(results, "qr_eigvals", f"n={n}", jit_s, py_s)


def fermion_sector(L, N, rng):
    dim = math.comb(L, N)
    words = kernels.fermion_words(L, N, dim)
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    bi = np.arange(L, dtype=np.int64)
    bj = (np.arange(L, dtype=np.int64) + 1) % L
    amps = np.full(L, math.e**0.5, dtype=np.complex128)
    return words, vec, bi, bj, amps, dim


def boson_sector(L, N, rng):
    dim = math.comb(L + N - 1, N)
    states = kernels.boson_states(L, N, dim)
    radix = np.array([(N + 1) ** j for j in range(L)], dtype=np.int64)
    keys = states.astype(np.int64) @ radix
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    bi = np.arange(L, dtype=np.int64)
    bj = (np.arange(L, dtype=np.int64) + 1) % L
    amps = np.full(L, math.e**0.5, dtype=np.complex128)
    return states, keys, radix, vec, bi, bj, amps, dim


def bench_apply(results, rng, fermion_sizes, boson_sizes):
    header("SECTOR HAMILTONIAN APPLICATION")
    for L, N in fermion_sizes:
        words, vec, bi, bj, amps, dim = fermion_sector(L, N, rng)
        out = np.zeros(dim, dtype=np.complex128)
        args = (words, vec, bi, bj, amps, L, out)
        reset = lambda: out.fill(0)
        reps = adaptive_repeats(kernels.apply_bonds_fermion_py, args, reset=reset)
        jit_s = (
            timed(kernels.apply_bonds_fermion, args, 5, reset=reset)
            if JIT_ENABLED
            else math.inf
        )
        py_s = timed(kernels.apply_bonds_fermion_py, args, reps, reset=reset)
        row(results, "apply_fermion", f"L={L} N={N} dim={dim}", jit_s, py_s)
    for L, N in boson_sizes:
        states, keys, radix, vec, bi, bj, amps, dim = boson_sector(L, N, rng)
        out = np.zeros(dim, dtype=np.complex128)
        args = (states, keys, radix, vec, bi, bj, amps, N, out)
        reset = lambda: out.fill(0)
        reps = adaptive_repeats(kernels.apply_bonds_boson_py, args, reset=reset)
        jit_s = (
            timed(kernels.apply_bonds_boson, args, 5, reset=reset)
            if JIT_ENABLED
            else math.inf
        )
        py_s = timed(kernels.apply_bonds_boson_py, args, reps, reset=reset)
        row(results, "apply_boson", f"L={L} N={N} dim={dim}", jit_s, py_s)


def bench_config_energies(results, rng, sizes):
    header("CONFIGURATION ENERGY SWEEP (Aufbau hot loop)")
    for L, N in sizes:
        dim = math.comb(L, N)
        words = kernels.fermion_words(L, N, dim)
        eps = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        perm = rng.permutation(L).astype(np.int64)
        out = np.zeros(dim, dtype=np.complex128)
        args = (words, perm, eps, out)
        reps = adaptive_repeats(kernels.config_energies_fermion_py, args)
        jit_s = (
            timed(kernels.config_energies_fermion, args, 5)
            if JIT_ENABLED
            else math.inf
        )
        py_s = timed(kernels.config_energies_fermion_py, args, reps)
        row(results, "config_energies", f"L={L} N={N} dim={dim}", jit_s, py_s)


def bench_correlation(results, rng, sizes):
    header("ONE-BODY CORRELATION MATRIX")
    for L, N in sizes:
        dim = math.comb(L, N)
        words = kernels.fermion_words(L, N, dim)
        vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        vec /= np.linalg.norm(vec)
        args = (words, vec, L)
        reps = adaptive_repeats(kernels.correlation_fermion_py, args)
        jit_s = (
            timed(kernels.correlation_fermion, args, 5) if JIT_ENABLED else math.inf
        )
        py_s = timed(kernels.correlation_fermion_py, args, reps)
        row(results, "correlation", f"L={L} N={N} dim={dim}", jit_s, py_s)


def bench_permanent(results, rng, sizes):
    header("PERMANENT (Ryser, Gray code)")
    for n in sizes:
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        reps = adaptive_repeats(kernels.permanent_ryser_py, (a,))
        jit_s = timed(kernels.permanent_ryser, (a,), 5) if JIT_ENABLED else math.inf
        py_s = timed(kernels.permanent_ryser_py, (a,), reps)
        row(results, "permanent", f"n={n}", jit_s, py_s)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--output", help="write results to a JSON file")
    parser.add_argument("--seed", type=int, default=20260819)
    args = parser.parse_args()

    print(f"numba available: {NUMBA_AVAILABLE}, jit enabled: {JIT_ENABLED}")
    if JIT_ENABLED:
        print("warming up JIT (cached after the first run) ...")
        kernels.warmup_jit()

    rng = np.random.default_rng(args.seed)
    results = []
    if args.quick:
        bench_eigenvalues(results, rng, [40, 80])
        bench_apply(results, rng, [(12, 6)], [(8, 4)])
        bench_config_energies(results, rng, [(16, 8)])
        bench_correlation(results, rng, [(12, 6)])
        bench_permanent(results, rng, [10])
    else:
        bench_eigenvalues(results, rng, [60, 120, 200])
        bench_apply(results, rng, [(12, 6), (16, 8)], [(8, 4), (10, 5)])
        bench_config_energies(results, rng, [(16, 8), (20, 10)])
        bench_correlation(results, rng, [(12, 6), (14, 7)])
        bench_permanent(results, rng, [10, 13])

    if args.output:
        payload = {
            "numba_available": NUMBA_AVAILABLE,
            "jit_enabled": JIT_ENABLED,
            "quick": args.quick,
            "seed": args.seed,
            "results": results,
        }
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
        print(f"\nwrote {args.output}")


if __name__ == "__main__":
    main()
