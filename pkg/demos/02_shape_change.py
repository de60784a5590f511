"""Same centre, different shape: stretch and rotation of principal axes.

The mean barely moves in either scenario, so a mean-only monitor stays quiet.
Eigenvalue ratios expose the stretch, eigenvector angles expose the twist.
"""
import numpy as np

from driftfield import compare_shapes, fit_baseline

rng = np.random.default_rng(11)
base = rng.normal(size=(1000, 2)) * [4.0, 1.0]
old = fit_baseline(base)

stretched = base * [1.0, 2.5]
theta = np.radians(35)
rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
rotated = base @ rot.T

for name, cloud in (("stretched y by 2.5", stretched), ("rotated 35 deg", rotated)):
    shape = compare_shapes(old, fit_baseline(cloud))
    print(name)
    print(f"  mean shift      {shape.d_mu:.4f}")
    print(f"  eigen ratios    {np.round(shape.stretch_ratios, 3)}")
    print(f"  axis angles deg {np.round(np.degrees(shape.rotation_angles_rad), 2)}")
    print(f"  covariance dist {shape.d_sigma:.3f}")
