"""Desk-scale artificial-data benchmark.

Random 30-node, 40-edge, 4-ary networks; a 10,000-row reference sample per
network and 500-row subsamples. The error is the cosine distance between the
subsample and reference estimates of P(Y | do(X)).
"""
import sys

import numpy as np

from cavs.bench import ExperimentConfig, run_experiment, run_sweep

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 2024
cfg = ExperimentConfig(seed=seed)
report = run_experiment(cfg)
print(report.table())
for net in report.networks[:: cfg.n_cpts]:
    print(f"{net['x']} -> {net['y']}: ", {m: z for m, z in net["adjustment"].items()})

# Error shrinks as the subsample grows.
sizes = (2000, 1000, 500, 250, 125)
sweep = run_sweep(ExperimentConfig(seed=seed, reference_n=20_000, n_graphs=2, n_cpts=1),
                  sizes, repetitions=3)
print("\nmean error by subsample size", sizes)
for m, errs in sweep.items():
    print(f"  {m:<16}", np.round(np.nanmean(errs, axis=0), 4))
