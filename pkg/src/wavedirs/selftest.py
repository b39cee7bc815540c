"""Built-in invariant checks, run by ``wavedirs selftest``.

A quick, self-contained subset of the test suite: random symmetric tensors
and coefficient rows, then the synthetic saddles through the whole pipeline.
Each check prints one ``PASS`` / ``FAIL`` line.
"""
from __future__ import annotations

import sys
import time
from math import factorial

import numpy as np

from . import synthetic
from .directions import Kind, classify_and_build, eigen_residual, find_roots, principal_directions, rosy_feasibility
from .regression import FitConfig, estimate_at
from .tensor import SymTensor2, apply_full, tensor_gradient, tensor_to_wavejet_row, wavejet_row_to_tensor
from .wavejets import row_g

__all__ = ["run_selftest", "random_row"]

ORDERS = range(2, 11)


def random_row(rng, k):
    row = np.zeros(k + 1, dtype=complex)
    for n in range(k % 2, k + 1, 2):
        row[n] = complex(rng.uniform(-1, 1), 0.0 if n == 0 else rng.uniform(-1, 1))
    return row


def _circ(a, b):
    d = np.abs(a - b) % (2 * np.pi)
    return np.minimum(d, 2 * np.pi - d)


def _structure_ok(dirs, k):
    if not dirs:
        return True
    kinds = [d.kind for d in dirs]
    if any(kinds[i] is kinds[(i + 1) % len(kinds)] for i in range(len(kinds))):
        return False
    angles = np.array([d.angle for d in dirs])
    for d in dirs:
        j = int(np.argmin(_circ(angles, d.angle + np.pi)))
        if _circ(angles[j], d.angle + np.pi) > 1e-9 or ((k % 2 == 0) != (dirs[j].kind is d.kind)):
            return False
    return len(dirs) <= 2 * k


def _check_round_trip(rng, rows):
    worst = 0.0
    for k in ORDERS:
        for _ in range(rows):
            row = random_row(rng, k)
            worst = max(worst, np.abs(tensor_to_wavejet_row(wavejet_row_to_tensor(row)) - row).max())
    return worst < 1e-12, f"max round-trip error {worst:.2e}"


def _check_gradient(rng, rows):
    worst = 0.0
    for k in ORDERS:
        for _ in range(max(1, rows // 4)):
            T = SymTensor2(k, rng.uniform(-1, 1, k + 1))
            v = rng.normal(size=2)
            v /= np.linalg.norm(v)
            h = 1e-5
            fd = np.array([(apply_full(T, v + h * e) - apply_full(T, v - h * e)) / (2 * h) for e in np.eye(2)])
            g = tensor_gradient(T, v)
            worst = max(worst, np.linalg.norm(g - fd) / max(np.linalg.norm(g), 1e-300))
    return worst < 1e-6, f"max relative error {worst:.2e}"


def _check_rows(rng, rows):
    bad = 0
    worst = 0.0
    grid = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    missed = 0
    for k in ORDERS:
        for _ in range(rows):
            row = random_row(rng, k)
            dirs = classify_and_build(row, find_roots(row))
            bad += not _structure_ok(dirs, k)
            T = wavejet_row_to_tensor(row)
            for d in dirs:
                lam = d.eigenvalue
                worst = max(worst, eigen_residual(d, T) / max(1.0, abs(lam)))
            # every grid maximum of g lies near a reported maximum
            g = row_g(row, grid)
            peaks = grid[(g > np.roll(g, 1)) & (g > np.roll(g, -1))]
            found = np.array([d.angle for d in dirs if d.kind is Kind.MAXIMUM])
            if peaks.size != found.size or (found.size and np.max(_circ(peaks[:, None], found[None]).min(1)) > 5e-3):
                missed += 1
    ok = bad == 0 and worst < 1e-9 and missed == 0
    return ok, f"{bad} structural, {missed} grid mismatches, eigen residual {worst:.1e}"


def _check_monkey():
    start = time.perf_counter()
    surf = synthetic.monkey_saddle(n=10000, seed=0)
    frame, c = estimate_at(surf.cloud, 0, FitConfig(radius=0.5, max_order=10))
    dirs = principal_directions(c, 3, frame)
    maxima = [d for d in dirs if d.kind is Kind.MAXIMUM]
    # directions in 3D against the x axis rotated by multiples of 120 degrees
    truth = [np.array([np.cos(a), np.sin(a), 0.0]) for a in 2 * np.pi / 3 * np.arange(3)]
    errs = [min(np.degrees(np.arccos(np.clip(d.direction3d @ t, -1, 1))) for d in maxima) for t in truth] if maxima else [180]
    lam = max((abs(abs(d.eigenvalue) / 6.0 - 1) for d in dirs), default=1.0)
    elapsed = time.perf_counter() - start
    ok = len(maxima) == 3 and max(errs) < 1.0 and lam < 0.02
    return ok, f"max angle error {max(errs):.3f} deg, eigenvalue error {100 * lam:.2f}%, {elapsed:.2f} s"


def _check_rosy():
    angles = np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])
    res = rosy_feasibility(angles)
    errs = []
    for row in res.solution_basis:
        found = np.array(find_roots(row))
        errs.append(max(_circ(found[:, None], angles[None]).min(0)) if found.size else np.inf)
    worst = min(errs, default=np.inf)
    return worst < 1e-8, f"rank {res.rank}, angle error {worst:.1e}"


def _check_saddle8():
    surf = synthetic.octopus_saddle(n=10000, seed=0)
    frame, c = estimate_at(surf.cloud, 0, FitConfig(radius=0.5, max_order=10))
    dirs = [d for d in principal_directions(c, 8, frame) if d.kind is Kind.MAXIMUM]
    maxima = np.array([np.arctan2(d.direction3d[1], d.direction3d[0]) for d in dirs])
    truth = np.pi / 4 * np.arange(8)
    if maxima.size != 8:
        return False, f"{maxima.size} maxima"
    err = np.degrees(_circ(maxima[:, None], truth[None]).min(0).max())
    lam = max(abs(d.eigenvalue / factorial(8) - 1) for d in dirs)
    return err < 2.0 and lam < 0.02, f"max angle error {err:.3f} deg, eigenvalue error {100 * lam:.2f}%"


def run_selftest(seed=0, rows=200, out=None):
    """Run all checks, print one line each, return True when all pass."""
    out = out or sys.stdout
    rng = np.random.default_rng(seed)
    checks = [
        ("tensor/row round trip", lambda: _check_round_trip(rng, rows)),
        ("gradient identity", lambda: _check_gradient(rng, rows)),
        ("direction structure", lambda: _check_rows(rng, rows)),
        ("monkey saddle", _check_monkey),
        ("octopus saddle", _check_saddle8),
        ("order-3 feasibility", _check_rosy),
    ]
    all_ok = True
    for name, check in checks:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}", file=out)
    return all_ok
