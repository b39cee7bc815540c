"""
When does an order-3 row give a 3-RoSy?
=======================================

A 3-RoSy field has three maxima 120 degrees apart. Asking g_3' to vanish at
three given angles (and at their antipodes) is a linear system of six
equations in the four real unknowns of an order-3 row. The antipodal
equations repeat the others with a sign flip, so the rank is at most 3 and
a nonzero row always exists. What changes with the angles is which of the
six roots end up as maxima. Kinds alternate around the circle, so the three
requested angles share a kind exactly when they interleave with their
antipodes, that is when no half-circle contains all three.
"""
import numpy as np

from wavedirs import classify_and_build, find_roots, rosy_feasibility

for label, angles in (
    ("evenly spread", [0.0, 2 * np.pi / 3, 4 * np.pi / 3]),
    ("rotated grid", [0.4, 0.4 + 2 * np.pi / 3, 0.4 + 4 * np.pi / 3]),
    ("perturbed", [0.0, 2.0, 4.3]),
    ("half-circle", [0.0, 1.0, 2.0]),
    ("T shape", [0.0, np.pi / 2, np.pi]),
):
    res = rosy_feasibility(angles)
    print(f"{label:14s} rank {res.rank}, null space dimension {len(res.solution_basis)}")
    for row in res.solution_basis:
        dirs = classify_and_build(row, find_roots(row))
        print("   maxima at", np.round([np.degrees(d.angle) for d in dirs if d.kind.value == "max"], 6), "deg")
        print("   minima at", np.round([np.degrees(d.angle) for d in dirs if d.kind.value == "min"], 6), "deg")

# the sign of a basis row is arbitrary: flipping it swaps maxima and minima.
# The T shape asks for maxima at both 0 and pi, which no odd order can give,
# because g_3(t + pi) = -g_3(t) turns every maximum's antipode into a minimum.
