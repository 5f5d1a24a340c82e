#!/usr/bin/env python3
"""Benchmark the compiled phase-sum kernel against the numpy fallback.

Times the raw coherent-sum primitive at several panel sizes and a full
two-partition iterative optimization run on the bundled scenario, once per
available backend. Run as: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from risjam import _kernels as kernels
from risjam.channel import build_channel_set
from risjam.harness import default_scenario
from risjam.optimize import an_power_at_eve, cs_power_at_bob, iterative_optimize
from risjam.ris import zero_config


def bench_primitive(n: int, repeats: int = 20000) -> float:
    """Seconds per coherent_sum call on arrays of length n."""
    rng = np.random.default_rng(1)
    amp = np.ascontiguousarray(rng.uniform(0.5, 1.5, n))
    psi = np.ascontiguousarray(rng.uniform(0.0, 2 * np.pi, n))
    theta = np.ascontiguousarray(rng.choice([0.0, np.pi], n))
    fn = kernels.coherent_sum
    fn(amp, psi, theta)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        fn(amp, psi, theta)
    return (time.perf_counter() - start) / repeats


def bench_end_to_end(sc, ch, repeats: int = 5) -> float:
    """Seconds for one full iterative optimization of both partitions."""
    base = zero_config(ch.n_elements, (ch.bob_indices, ch.eve_indices))
    cs_oracle = cs_power_at_bob(sc, ch)
    an_oracle = an_power_at_eve(sc, ch)
    start = time.perf_counter()
    for seed in range(repeats):
        cfg, _ = iterative_optimize(cs_oracle, base, "rb", seed)
        iterative_optimize(an_oracle, cfg, "re", seed + 1)
    return (time.perf_counter() - start) / repeats


def main() -> None:
    sc = default_scenario()
    ch = build_channel_set(sc)
    sizes = (16, 128, 1024)
    results = {}
    for name in kernels.available_backends():
        kernels.select_backend(name)
        micro = {n: bench_primitive(n) for n in sizes}
        full = bench_end_to_end(sc, ch)
        results[name] = (micro, full)

    print(f"{'backend':<8}" + "".join(f"  sum n={n:<5}" for n in sizes) + "  iterative run")
    for name, (micro, full) in sorted(results.items()):
        cells = "".join(f"  {micro[n] * 1e6:8.2f}us" for n in sizes)
        print(f"{name:<8}{cells}  {full * 1e3:10.2f}ms")
    if len(results) == 2:
        base = results["numpy"]
        fast = results["cython"]
        for n in sizes:
            print(f"speedup coherent_sum n={n}: {base[0][n] / fast[0][n]:.2f}x")
        print(f"speedup iterative run: {base[1] / fast[1]:.2f}x")


if __name__ == "__main__":
    main()
