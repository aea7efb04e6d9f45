#!/usr/bin/env python3
"""Benchmark the compiled SVM dual kernel against the NumPy fallback.

Solves hard-margin duals on support-vector-experiment instances
(p = 1500 spiked-spectrum mixture) for growing n and reports wall time
per solve and the speedup.  Run after building the extension:

    python benchmarks/bench_svm.py [--trials 5]
"""

import argparse
import time

import numpy as np

from gmmlab import estimators as est
from gmmlab.model import preset_model, sample_dataset


def time_backend(datasets, backend):
    best = []
    for ds in datasets:
        t0 = time.perf_counter()
        sol = est.hard_margin_svm(ds, backend=backend)
        best.append((time.perf_counter() - t0, sol.classifier.diagnostics["sweeps"]))
    times, sweeps = zip(*best)
    return sum(times) / len(times), sum(sweeps) / len(sweeps)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--eta", type=float, default=0.2)
    args = parser.parse_args()

    backends = est.solver_backends()
    if "cython" not in backends:
        print("compiled backend unavailable; only timing the fallback")

    model, _ = preset_model("fig1", eta=args.eta)
    print(f"{'n':>6} {'sweeps':>8} " + " ".join(f"{b:>12}" for b in backends) + "  speedup")
    for n in (25, 50, 100, 150):
        datasets = [sample_dataset(model, n, seed) for seed in range(args.trials)]
        rows = {}
        sweeps = 0
        for backend in backends:
            rows[backend], sweeps = time_backend(datasets, backend)
        line = f"{n:>6} {sweeps:>8.0f} " + " ".join(f"{rows[b]*1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"  {rows['fallback'] / rows['cython']:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
