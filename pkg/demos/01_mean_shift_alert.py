"""Patient ages creep upward: catch the shift with the composite drift index.

A clinic's model was trained when patients averaged 55 years. A new intake
averages 70. Here we weight only the mean shift and alert above 10 years.
"""
import numpy as np

from driftfield import DriftConfig, evaluate_batch, fit_baseline

rng = np.random.default_rng(7)
training_ages = rng.normal(55, 9, size=400)
new_intake = rng.normal(70, 9, size=120)

baseline = fit_baseline(training_ages)
cfg = DriftConfig(alpha=1.0, beta=0.0, threshold=10.0)
report = evaluate_batch(baseline, new_intake, cfg)

print(f"baseline mean age   {baseline.mean[0]:.1f}")
print(f"intake mean age     {new_intake.mean():.1f}")
print(f"mean shift d_mu     {report.d_mu:.2f}")
print(f"average pull D      {report.average_displacement:.2f}")
print(f"drift index         {report.d_total:.2f}  (threshold {cfg.threshold})")
print("ALERT: retrain or investigate" if report.drifted else "no drift")
