"""Score a feed batch by batch against a frozen baseline, then refresh it.

Running statistics can absorb accepted batches cheaply; merging partial
summaries gives the same mean and covariance as refitting from scratch.
"""
import numpy as np

from driftfield import DriftConfig, RunningStats, evaluate_batch, fit_baseline, merge

rng = np.random.default_rng(21)
train = rng.normal(size=(500, 4))
baseline = fit_baseline(train)
cfg = DriftConfig(threshold=1.0)

stats = RunningStats.from_points(train)
for i in range(6):
    drift = 0.0 if i < 3 else 0.6 * (i - 2)
    batch = rng.normal(size=(100, 4)) + [drift, 0, 0, 0]
    r = evaluate_batch(baseline, batch, cfg)
    print(f"batch {i}: d_total {r.d_total:.3f}  KL {r.kl_estimate:.3f}  {'DRIFT' if r.drifted else 'ok'}")
    if not r.drifted:
        stats = merge(stats, RunningStats.from_points(batch))

print(f"refreshed baseline from {stats.count} rows, mean {np.round(stats.mean, 3)}")
