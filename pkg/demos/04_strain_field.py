"""Where is the data moving? Sample the displacement and strain field.

The displacement at x is the difference of KDE density gradients (new minus
old). Its Jacobian splits into per-axis stretch (diagonal), shear (symmetric
off-diagonal) and volumetric change (trace).
"""
import numpy as np

from driftfield import model_from_cloud, strain_at, strain_summary

rng = np.random.default_rng(5)
old_pts = rng.normal(size=(300, 2))
new_pts = old_pts * [2.0, 1.0]

old, new = model_from_cloud(old_pts), model_from_cloud(new_pts)
for q in ([0.0, 0.0], [1.5, 0.0], [0.0, 1.5]):
    s = strain_at(old, new, q)
    print(f"x={q}: v={np.round(s.displacement, 4)}  normal={np.round(s.normal, 4)}  volumetric={s.volumetric:+.4f}")

summary = strain_summary(old, new)
print("mean |normal strain| per axis", np.round(summary.mean_abs_normal, 4))
print("mean |shear| (0, 1)         ", round(summary.shear_value(0, 1), 5))
