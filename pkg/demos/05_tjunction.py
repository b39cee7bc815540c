"""
From a ridge to a T-junction
============================

A Gaussian crest along x is joined by a second crest along +y, faded in by
the morph parameter t. Order 2 sees the straight ridge; the junction shows
up in the order-3 coefficients, which grow with t. No order-3 output can
hold two maxima pi apart, so the straight bar of the T is never captured
exactly at order 3.
"""
import numpy as np

from wavedirs import FitConfig, Kind, estimate_at, principal_directions, synthetic

cfg = FitConfig(radius=0.5, max_order=10)
for t in (0.0, 0.25, 0.5, 0.75, 1.0):
    surf = synthetic.ridge_to_tjunction(t, n=20000, seed=0)
    frame, coeffs = estimate_at(surf.cloud, 0, cfg)
    amp = {k: np.abs(coeffs.row(k)).max() for k in (2, 3)}
    maxima = [d for d in principal_directions(coeffs, 3, frame) if d.kind is Kind.MAXIMUM]
    angles = np.round([np.degrees(np.arctan2(d.direction3d[1], d.direction3d[0])) % 360 for d in maxima], 2)
    print(f"t = {t:4.2f}: |phi_2| {amp[2]:.4f}, |phi_3| {amp[3]:.4f}, order-3 maxima at {angles} deg")
