"""Principal directions of order ``k`` from a wavejet coefficient row.

Directions are the extrema of ``g_k``. Zeros of ``g_k'`` are bracketed by a
uniform scan, then polished with a bracket-guarded Newton iteration. Because
``g_k'`` only carries frequencies of the parity of ``k``, its zero set is
``pi``-periodic; roots are searched on ``[0, pi)`` and mirrored, so the
parity properties of the output hold by construction.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import factorial

import numpy as np
import scipy.linalg

from .errors import InvalidArgumentError
from .regression import LocalFrame
from .tensor import SymTensor2, check_row, contract, wavejet_row_to_tensor
from .wavejets import WavejetCoeffs, row_d2g, row_dg, row_g

__all__ = [
    "Kind",
    "PrincipalDirection",
    "RosyFeasibility",
    "find_roots",
    "classify_and_build",
    "principal_directions",
    "rosy_feasibility",
    "eigen_residual",
    "EPS_UMBILIC",
    "EPS_DEGEN",
]

EPS_UMBILIC = 1e-10
# below this |g''| / sum(n^2 |phi|) a root is numerically degenerate
EPS_DEGEN = 1e-8
MERGE_TOL = 1e-8

TWO_PI = 2.0 * np.pi


class Kind(str, enum.Enum):
    MAXIMUM = "max"
    MINIMUM = "min"

    def flipped(self):
        return Kind.MINIMUM if self is Kind.MAXIMUM else Kind.MAXIMUM


@dataclass(frozen=True)
class PrincipalDirection:
    order: int
    angle: float
    direction3d: np.ndarray
    eigenvalue: float
    kind: Kind

    @property
    def tangent2d(self):
        return np.array([np.cos(self.angle), np.sin(self.angle)])


def _amplitude(row, power):
    # bound on |d^power g / dtheta^power| / 2; homogeneous in the row, so
    # tolerances built from it hold for rows of any magnitude
    n = np.arange(row.size, dtype=float)
    return max(float(np.sum(n**power * np.abs(row))), np.finfo(float).tiny)


def _polish(row, lo, hi, flo, tol, max_iter=100):
    """Roots of ``g'`` in the brackets ``[lo, hi]`` (vectorized).

    ``flo`` is ``g'(lo)``; ``g'(hi)`` must have the opposite sign. Newton
    steps that leave the bracket are replaced by bisection.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    sign = np.where(np.asarray(flo) > 0, -1.0, 1.0)  # orient so that g'(lo) < 0
    x = 0.5 * (lo + hi)
    active = np.ones(x.shape, dtype=bool)
    for _ in range(max_iter):
        xa = x[active]
        f = sign[active] * row_dg(row, xa)
        df = sign[active] * row_d2g(row, xa)
        done = np.abs(f) <= tol
        lo_a = np.where(f < 0, xa, lo[active])
        hi_a = np.where(f < 0, hi[active], xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - f / df
        ok = np.isfinite(xn) & (xn > lo_a) & (xn < hi_a)
        xn = np.where(ok, xn, 0.5 * (lo_a + hi_a))
        done |= hi_a - lo_a < 4e-16 * np.maximum(1.0, np.abs(xa))
        x[active] = np.where(done, xa, xn)
        lo[active], hi[active] = lo_a, hi_a
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    return x


def _extremum_of_deriv(row, a, b, d2a, iters=60):
    """Bisect ``g''`` on ``[a, b]`` (sign change assumed) to locate an extremum of ``g'``."""
    for _ in range(iters):
        m = 0.5 * (a + b)
        d2m = row_d2g(row, m)
        if (d2m > 0) == (d2a > 0):
            a, d2a = m, d2m
        else:
            b = m
    return 0.5 * (a + b)


def _dedupe(angles, period, tol=MERGE_TOL):
    if not angles:
        return []
    angles = sorted(a % period for a in angles)
    kept = [angles[0]]
    for a in angles[1:]:
        if a - kept[-1] >= tol:
            kept.append(a)
    if len(kept) > 1 and kept[0] + period - kept[-1] < tol:
        kept.pop()
    return kept


def _is_umbilic(row, reference):
    if reference is None:
        reference = float(np.abs(row).max())
    return float(np.abs(row[1:]).max(initial=0.0)) <= EPS_UMBILIC * reference


def _half_period_roots(row):
    k = row.size - 1
    samples = max(16 * k, 64)
    theta = np.linspace(0.0, np.pi, samples + 1)
    d = row_dg(row, theta)
    d2 = row_d2g(row, theta)
    # the value at pi is fixed by parity; evaluating it separately could put a
    # root sitting on the seam at the same rounded sign on both sides
    parity = -1.0 if k % 2 else 1.0
    d[-1] = parity * d[0]
    d2[-1] = parity * d2[0]
    tol = 1e-13 * _amplitude(row, 1)
    da, db = d[:-1], d[1:]
    roots = list(theta[:-1][da == 0.0])
    lo, hi, flo = [theta[:-1][da * db < 0]], [theta[1:][da * db < 0]], [da[da * db < 0]]
    # two roots closer than the scan spacing: split the bin at the extremum of g'.
    # g'' vanishes there, so g' differs from its end values by at most |g'''|max h^2 / 2.
    h = theta[1] - theta[0]
    reach = _amplitude(row, 3) * h * h
    close = (da * db > 0) & (d2[:-1] * d2[1:] < 0) & (np.minimum(np.abs(da), np.abs(db)) <= reach)
    for i in np.flatnonzero(close):
        m = _extremum_of_deriv(row, theta[i], theta[i + 1], d2[i])
        dm = row_dg(row, m)
        if dm == 0.0:
            roots.append(m)
        elif dm * da[i] < 0:
            lo.append([theta[i], m])
            hi.append([m, theta[i + 1]])
            flo.append([da[i], dm])
    lo, hi, flo = np.concatenate(lo), np.concatenate(hi), np.concatenate(flo)
    if lo.size:
        roots.extend(_polish(row, lo, hi, flo, tol))
    return _dedupe([float(t) for t in roots], np.pi)


def find_roots(row, reference=None):
    """All zeros of ``g_k'`` on ``[0, 2 pi)``, sorted.

    Parameters
    ----------
    row : array_like of complex
        Coefficients ``phi_{k,n}``, ``n = 0..k``.
    reference : float, optional
        Magnitude the umbilic test is relative to; defaults to the largest
        coefficient of ``row``. Pass the largest coefficient of the whole
        expansion to compare orders against each other.

    Returns
    -------
    list of float
        Empty when every ``n >= 1`` coefficient is negligible (``g_k`` is
        angularly constant).
    """
    row = check_row(row, atol=1e-12)
    if row.size < 2:
        raise InvalidArgumentError("roots of g_k' need order k >= 1")
    if _is_umbilic(row, reference):
        return []
    half = _half_period_roots(row)
    return half + [a + np.pi for a in half]


def _interval_signs(row, half):
    """Sign of ``g'`` after each root of ``half`` (up to the next root, mirrored at +pi)."""
    nxt = np.append(half[1:], half[0] + np.pi)
    return np.sign(row_dg(row, 0.5 * (half + nxt)))


def _default_frame():
    return LocalFrame(np.zeros(3), np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]))


def classify_and_build(row, roots, frame: LocalFrame | None = None, scale=1.0):
    """Turn roots of ``g_k'`` into :class:`PrincipalDirection` objects.

    A root is a maximum when ``g_k'`` goes from positive to negative across
    it, a minimum for the reverse; roots where the sign does not change
    (inflections) are dropped. Since every kept root flips the sign, maxima
    and minima alternate. ``row`` may be radius-normalized: eigenvalues are
    reported for ``row / scale**k``.
    """
    row = check_row(row, atol=1e-12)
    k = row.size - 1
    frame = frame or _default_frame()
    half = np.array(_dedupe([float(t) for t in roots], np.pi))
    if half.size == 0:
        return []
    after = _interval_signs(row, half)
    parity = -1.0 if k % 2 else 1.0
    before = np.roll(after, 1)
    before[0] *= parity
    to_physical = factorial(k) / scale**k
    out = []
    for shift, sign in ((0.0, 1.0), (np.pi, parity)):
        for theta, b, a in zip(half + shift, sign * before, sign * after):
            if b > 0 and a < 0:
                kind = Kind.MAXIMUM
            elif b < 0 and a > 0:
                kind = Kind.MINIMUM
            else:
                continue
            value = row_g(row, theta)
            direction = np.cos(theta) * frame.e1 + np.sin(theta) * frame.e2
            out.append(PrincipalDirection(k, float(theta), direction, float(to_physical * value), kind))
    out.sort(key=lambda d: d.angle)
    return out


def principal_directions(c: WavejetCoeffs, k, frame: LocalFrame | None = None):
    """Principal directions of order ``k`` (``2 <= k <= max_order``)."""
    if not 2 <= k <= c.max_order:
        raise InvalidArgumentError(f"order {k} outside 2..{c.max_order}")
    row = c.row(k)
    roots = find_roots(row, reference=c.max_abs(min_order=1))
    return classify_and_build(row, roots, frame, c.scale)


def eigen_residual(direction: PrincipalDirection, row_unnormalized):
    """``|T v^(k-1) - lambda v|_inf`` for the tensor of an unnormalized row.

    ``row_unnormalized`` may also be the :class:`SymTensor2` itself.
    """
    T = row_unnormalized if isinstance(row_unnormalized, SymTensor2) else wavejet_row_to_tensor(row_unnormalized)
    v = direction.tangent2d
    S = T
    for _ in range(T.order - 1):
        S = contract(S, v)
    return float(np.abs(S.as_vector() - direction.eigenvalue * v).max())


@dataclass(frozen=True)
class RosyFeasibility:
    rank: int
    solution_basis: list
    singular_values: np.ndarray


def rosy_feasibility(angles, tol=1e-10):
    """Order-3 coefficient rows whose ``g_3'`` vanishes at the given angles.

    Each angle ``t`` contributes the equations ``g_3'(t) = 0`` and
    ``g_3'(t + pi) = 0`` in the unknowns
    ``(Re phi_31, Im phi_31, Re phi_33, Im phi_33)``. The returned basis
    spans the null space of that 6x4 system, as order-3 rows.
    """
    angles = np.asarray(angles, dtype=float).reshape(-1)
    if angles.size != 3:
        raise InvalidArgumentError("exactly three angles are required")
    wrapped = np.sort(angles % TWO_PI)
    gaps = np.diff(np.append(wrapped, wrapped[0] + TWO_PI))
    if np.any(gaps < MERGE_TOL):
        raise InvalidArgumentError("angles must be distinct")
    t = np.concatenate([angles, angles + np.pi])
    # g_3' / -2 = sum_n n (Re phi sin nt + Im phi cos nt)
    system = np.column_stack([np.sin(t), np.cos(t), 3 * np.sin(3 * t), 3 * np.cos(3 * t)])
    sv = scipy.linalg.svdvals(system)
    rank = int(np.sum(sv > tol * max(1.0, sv[0])))
    null = scipy.linalg.null_space(system, rcond=tol)
    basis = []
    for vec in null.T:
        row = np.zeros(4, dtype=complex)
        row[1] = complex(vec[0], vec[1])
        row[3] = complex(vec[2], vec[3])
        basis.append(row)
    return RosyFeasibility(rank, basis, sv)
