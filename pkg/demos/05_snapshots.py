"""Animate a deformation as a sequence of 2-D frames.

Each frame is the baseline moved a fraction t of the way along the
displacement field, with hulls of the baseline and of the new data
for reference. Frames are plain dicts, ready for JSON or a plotting tool.

One display scale is fitted so the centre of the moved baseline tracks the
shift in means. The field is a density gradient, not a point matching, so
spread in the frames shows the direction of change, not its exact size.
"""
import numpy as np

from driftfield import hull_area, snapshot_series

rng = np.random.default_rng(9)
base = rng.normal(size=(200, 3)) * [2.0, 1.0, 0.2]
new = base * [1.0, 1.8, 1.0] + [1.0, 0.0, 0.0]

series = snapshot_series(base, new)
print(f"display scale {series.scale:.3f}, projection degenerate: {series.projection.degenerate}")
for frame in series.frames:
    centre = frame.points.mean(axis=0)
    print(f"t={frame.t:.2f}  centre {np.round(centre, 3)}  baseline hull area {hull_area(frame.hull_baseline):.2f}  "
          f"new hull area {hull_area(frame.hull_new):.2f}")
