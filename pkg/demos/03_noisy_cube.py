"""
Edges of a noisy cube
=====================

At a sharp edge of a cube the order-2 maximum direction (where g_2 is
largest) runs along the edge. Here we add positional noise and compare
least-squares (l2) and L1 fits on a subsample of the edge points.
"""
import numpy as np

from wavedirs import FitConfig, Kind, estimate_at, principal_directions, synthetic
from wavedirs.spatial import build

surf = synthetic.cube(50000, seed=1)
edge = np.flatnonzero(surf.tags == synthetic.EDGE)[::6]
truth = surf.truth["edge_direction"]

for noise in (0.01, 0.05, 0.1):
    cloud = synthetic.add_noise(surf.cloud, noise, seed=2)
    index = build(cloud)
    for norm in ("l2", "l1"):
        cfg = FitConfig(radius=0.1, norm=norm)
        errors = []
        for i in edge:
            frame, coeffs = estimate_at(cloud, i, cfg, index)
            maxima = [d for d in principal_directions(coeffs, 2, frame) if d.kind is Kind.MAXIMUM]
            cosines = [abs(d.direction3d @ truth[i]) for d in maxima]
            errors.append(np.degrees(np.arccos(min(1.0, max(cosines, default=0.0)))))
        errors = np.array(errors)
        print(f"noise {noise:4.2f}%  {norm}: {100 * np.mean(errors < 10):5.1f}% of {edge.size} edge points "
              f"within 10 deg, median error {np.median(errors):.2f} deg")
