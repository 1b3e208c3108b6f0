#!/usr/bin/env python3
"""Benchmark the compiled pair-scan kernel against the numpy fallback.

Builds realistic mining workloads (trial groups at several sizes, mixed
verdicts so the pruning bound stays honest), times both backends on the
identical packed-mask problem, and verifies their outputs agree before
reporting. Run:

    python benchmarks/bench_pairscan.py [--trials 600] [--repeat 3]
"""

import argparse
import importlib
import os
import statistics
import sys
import time

import numpy as np


def build_problem(n_trials: int, seed: int):
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
    from mtpipe import (
        CampaignConfig,
        builtin_catalog,
        default_profiles,
        default_registry,
        run_campaign,
        stratify,
    )
    from mtpipe.miner import _build_atoms, _GroupView, _pack_bits

    data = stratify("list-float", default_profiles(max(4, n_trials // 3)), seed)
    config = CampaignConfig(sut_ids=("sum_of_squares",), params_per_datum=3, seed=seed)
    records = run_campaign(config, default_registry(), builtin_catalog(), data).records
    group = [r for r in records if r.mr_id == "additive"]
    view = _GroupView(group)
    atoms, masks, families = _build_atoms(view)
    holds = _pack_bits(view.holds)[0]
    from mtpipe._kernels.pairscan_py import _popcount_rows

    sup = _popcount_rows(masks)
    hin = _popcount_rows(masks & holds[np.newaxis, :])
    order = np.argsort(-hin, kind="stable").astype(np.int64)
    return len(group), len(atoms), (masks, holds, families, order, sup, hin)


def load_backends():
    from mtpipe._kernels import pairscan_py

    backends = {"python": pairscan_py.scan_pairs}
    try:
        compiled = importlib.import_module("mtpipe._kernels._pairscan")
        backends["compiled"] = compiled.scan_pairs
    except ImportError:
        pass
    return backends


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=600)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--bound", type=int, default=0,
                        help="pruning bound (0 = enumerate every pair)")
    args = parser.parse_args()

    n_trials, n_atoms, problem = build_problem(args.trials, seed=7)
    backends = load_backends()
    print(f"workload: {n_trials} trials, {n_atoms} atoms, "
          f"~{n_atoms * (n_atoms - 1) // 2 / 1e6:.1f}M candidate pairs, "
          f"min_support=5 min_precision=1.0 bound={args.bound}")

    results = {}
    timings = {}
    for name, scan in backends.items():
        samples = []
        for _ in range(args.repeat):
            start = time.perf_counter()
            out = scan(*problem, 5, 1.0, args.bound)
            samples.append(time.perf_counter() - start)
        results[name] = set(zip(*(arr.tolist() for arr in out))) if out[0].size else set()
        timings[name] = samples
        print(f"  {name:9s} best {min(samples)*1e3:9.1f} ms   "
              f"median {statistics.median(samples)*1e3:9.1f} ms   "
              f"qualifying pairs {len(results[name])}")

    if len(results) == 2:
        if results["python"] != results["compiled"]:
            print("MISMATCH: backends disagree", file=sys.stderr)
            return 1
        speedup = min(timings["python"]) / min(timings["compiled"])
        print(f"backends agree; compiled speedup {speedup:.1f}x")
    else:
        print("compiled kernel not built; only the fallback was timed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
