"""Local wavejet regression around a point of a point cloud.

Pipeline for a query point: radius neighborhood, Gaussian-weighted PCA
frame, polar coordinates in the tangent plane, then a weighted least-squares
(L2) or iteratively reweighted (L1) fit of the height field in the real
wavejet basis ``{rho^k, rho^k cos(n theta), rho^k sin(n theta)}`` with
``rho = r / radius``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    FrameUndefinedError,
    IllConditionedError,
    InsufficientNeighborsError,
    InvalidArgumentError,
)
from .wavejets import DEFAULT_MAX_ORDER, WavejetCoeffs, parity_indices

__all__ = [
    "LocalFrame",
    "Neighborhood",
    "FitConfig",
    "FitResult",
    "n_unknowns",
    "build_frame",
    "polar_coords",
    "design_matrix",
    "fit",
    "fit_details",
    "estimate_at",
    "gaussian_weights",
]

MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class LocalFrame:
    origin: np.ndarray
    normal: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    def rotated(self, alpha):
        """Same frame with the tangent basis turned by ``alpha`` about the normal."""
        c, s = np.cos(alpha), np.sin(alpha)
        return LocalFrame(self.origin, self.normal, c * self.e1 + s * self.e2, -s * self.e1 + c * self.e2)

    def to_local(self, points):
        d = np.asarray(points, dtype=float) - self.origin
        return d @ np.column_stack([self.e1, self.e2, self.normal])


@dataclass(frozen=True, eq=False)
class Neighborhood:
    indices: np.ndarray
    polar: np.ndarray  # columns r, theta, z
    weights: np.ndarray

    def __len__(self):
        return self.polar.shape[0]


@dataclass(frozen=True)
class FitConfig:
    radius: float
    max_order: int = DEFAULT_MAX_ORDER
    norm: str = "l2"
    irls_iters: int = 20
    irls_eps: float | None = None
    min_neighbors: int | None = None
    robust_pca: bool = False

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidArgumentError(f"radius must be positive, got {self.radius}")
        if self.max_order < 2:
            raise InvalidArgumentError(f"max_order must be at least 2, got {self.max_order}")
        if self.norm not in ("l1", "l2"):
            raise InvalidArgumentError(f"norm must be 'l1' or 'l2', got {self.norm!r}")
        if self.irls_iters < 0:
            raise InvalidArgumentError("irls_iters must be non-negative")

    @property
    def eps(self):
        return self.irls_eps if self.irls_eps is not None else 1e-6 * self.radius

    @property
    def required_neighbors(self):
        d = n_unknowns(self.max_order)
        return max(d, self.min_neighbors if self.min_neighbors is not None else 2 * d)


def n_unknowns(max_order):
    """Real degrees of freedom of an order-``K`` expansion, ``(K+1)(K+2)/2``."""
    return (max_order + 1) * (max_order + 2) // 2


def gaussian_weights(center, points, radius):
    sigma = radius / 3.0
    d = np.asarray(points, dtype=float) - np.asarray(center, dtype=float)
    return np.exp(-np.einsum("ij,ij->i", d, d) / (2.0 * sigma**2))


def _weighted_covariance(points, w):
    c = (w[:, None] * points).sum(axis=0) / w.sum()
    d = points - c
    return c, (w[:, None] * d).T @ d / w.sum()


def build_frame(query, neighbors, radius, normal_hint=None, robust=False) -> LocalFrame:
    """Tangent frame at ``query`` from Gaussian-weighted PCA of ``neighbors``.

    The normal is the eigenvector of smallest eigenvalue. With ``robust``,
    one extra pass down-weights points far from the first plane (Welsch
    weights on the plane distance). ``normal_hint`` only fixes the sign.
    """
    query = np.asarray(query, dtype=float).reshape(3)
    pts = np.asarray(neighbors, dtype=float).reshape(-1, 3)
    if pts.shape[0] < 3:
        raise FrameUndefinedError(f"{pts.shape[0]} points cannot define a tangent plane")
    w = gaussian_weights(query, pts, radius)
    centroid, cov = _weighted_covariance(pts, w)
    vals, vecs = np.linalg.eigh(cov)
    if vals[2] <= 0 or vals[1] <= 1e-12 * vals[2]:
        raise FrameUndefinedError("neighborhood is degenerate (collinear or coincident points)")
    normal = vecs[:, 0]
    if robust:
        dist = (pts - centroid) @ normal
        mad = 1.4826 * np.median(np.abs(dist - np.median(dist)))
        if mad > 0:
            w = w * np.exp(-((dist / (2.9846 * mad)) ** 2))
            centroid, cov = _weighted_covariance(pts, w)
            vals, vecs = np.linalg.eigh(cov)
            if vals[1] > 1e-12 * vals[2]:
                normal = vecs[:, 0]
    if normal_hint is not None:
        if normal @ np.asarray(normal_hint, dtype=float) < 0:
            normal = -normal
    elif normal[np.argmax(np.abs(normal))] < 0:
        normal = -normal
    normal = normal / np.linalg.norm(normal)
    axis = np.zeros(3)
    axis[np.argmin(np.abs(normal))] = 1.0
    e1 = axis - (axis @ normal) * normal
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(normal, e1)
    return LocalFrame(query, normal, e1, e2)


def polar_coords(frame: LocalFrame, points, radius, indices=None) -> Neighborhood:
    """Polar coordinates ``(r, theta, z)`` and Gaussian weights (``sigma = radius / 3``)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    local = frame.to_local(pts)
    r = np.hypot(local[:, 0], local[:, 1])
    theta = np.arctan2(local[:, 1], local[:, 0]) % (2.0 * np.pi)
    if indices is None:
        indices = np.arange(pts.shape[0])
    w = gaussian_weights(frame.origin, pts, radius)
    return Neighborhood(np.asarray(indices), np.column_stack([r, theta, local[:, 2]]), w)


def design_matrix(rho, theta, max_order):
    """Real wavejet basis columns, ordered by ``k``, then ``n``, cosine before sine."""
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    cols = []
    for k in range(max_order + 1):
        rk = rho**k
        for n in parity_indices(k):
            if n == 0:
                cols.append(rk)
            else:
                cols.append(rk * np.cos(n * theta))
                cols.append(rk * np.sin(n * theta))
    return np.column_stack(cols)


def coeffs_from_vector(x, max_order, scale=1.0) -> WavejetCoeffs:
    rows = []
    i = 0
    for k in range(max_order + 1):
        row = np.zeros(k + 1, dtype=complex)
        for n in parity_indices(k):
            if n == 0:
                row[0] = x[i]
                i += 1
            else:
                # model term is 2 (Re phi cos - Im phi sin)
                row[n] = complex(x[i] / 2.0, -x[i + 1] / 2.0)
                i += 2
        rows.append(row)
    return WavejetCoeffs(max_order, tuple(rows), scale)


def vector_from_coeffs(c: WavejetCoeffs):
    out = []
    for k in range(c.max_order + 1):
        for n in parity_indices(k):
            phi = c.rows[k][n]
            if n == 0:
                out.append(phi.real)
            else:
                out.extend((2.0 * phi.real, -2.0 * phi.imag))
    return np.array(out)


def _weighted_lstsq(A, z, w):
    sw = np.sqrt(w)
    Q, R, perm = scipy.linalg.qr(A * sw[:, None], mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    condition = diag[0] / diag[-1] if diag[-1] > 0 else np.inf
    if condition > MAX_CONDITION:
        raise IllConditionedError(condition)
    x = np.empty(A.shape[1])
    x[perm] = scipy.linalg.solve_triangular(R, Q.T @ (z * sw))
    return x, condition


def _l1_objective(A, z, w, x):
    return float(np.sum(w * np.abs(z - A @ x)))


def irls_l1(A, z, w, x0, iters, eps, tol=1e-10):
    """Minimize ``sum w_i |z_i - (A x)_i|`` from ``x0``.

    Each step solves a weighted least-squares problem with weights
    ``w_i / max(|res_i|, eps)``. A step that would increase the objective is
    halved until it does not; if that fails the iteration stops.
    """
    x = x0
    history = [_l1_objective(A, z, w, x)]
    for _ in range(iters):
        res = np.abs(z - A @ x)
        try:
            x_new, _ = _weighted_lstsq(A, z, w / np.maximum(res, eps))
        except IllConditionedError:
            break
        step = x_new - x
        obj = _l1_objective(A, z, w, x_new)
        for _ in range(30):
            if obj <= history[-1]:
                break
            step = 0.5 * step
            x_new = x + step
            obj = _l1_objective(A, z, w, x_new)
        else:
            break
        x = x_new
        history.append(obj)
        if np.max(np.abs(step)) < tol:
            break
    return x, history


@dataclass(frozen=True, eq=False)
class FitResult:
    coeffs: WavejetCoeffs
    condition: float
    objective_history: list = field(default_factory=list)
    design: np.ndarray | None = field(default=None, repr=False)
    residual: np.ndarray | None = field(default=None, repr=False)


def fit_details(neigh: Neighborhood, config: FitConfig) -> FitResult:
    required = config.required_neighbors
    if len(neigh) < required:
        raise InsufficientNeighborsError(len(neigh), required)
    K = config.max_order
    r, theta, z = neigh.polar.T
    A = design_matrix(r / config.radius, theta, K)
    w = neigh.weights
    x, condition = _weighted_lstsq(A, z, w)
    history = []
    if config.norm == "l1":
        x, history = irls_l1(A, z, w, x, config.irls_iters, config.eps)
    return FitResult(coeffs_from_vector(x, K, config.radius), condition, history, A, z - A @ x)


def fit(neigh: Neighborhood, config: FitConfig) -> WavejetCoeffs:
    """Wavejet coefficients of the neighborhood's height field (radius-normalized)."""
    return fit_details(neigh, config).coeffs


def estimate_at(cloud, query_index, config: FitConfig, index=None):
    """Frame and coefficients at one point of ``cloud``; returns ``(frame, coeffs)``."""
    from . import spatial

    n = len(cloud)
    if not 0 <= query_index < n:
        raise InvalidArgumentError(f"query index {query_index} out of range for {n} points")
    if index is None:
        index = spatial.build(cloud)
    q = cloud.positions[query_index]
    ids = spatial.radius_query(index, q, config.radius)
    if ids.size < config.required_neighbors:
        raise InsufficientNeighborsError(int(ids.size), config.required_neighbors)
    pts = cloud.positions[ids]
    hint = None if cloud.normals is None else cloud.normals[query_index]
    frame = build_frame(q, pts, config.radius, normal_hint=hint, robust=config.robust_pca)
    neigh = polar_coords(frame, pts, config.radius, ids)
    return frame, fit(neigh, config)
