"""Synthetic test surfaces with known (or qualitatively known) directions.

Every generator is deterministic for a given ``seed`` and returns a
:class:`SyntheticSurface`; point 0 is the surface point above the origin
for the height-field generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .spatial import PointCloud
from .wavejets import WavejetCoeffs, evaluate

__all__ = [
    "SyntheticSurface",
    "FACE",
    "EDGE",
    "CORNER",
    "disk_samples",
    "from_wavejets",
    "monkey_saddle",
    "octopus_saddle",
    "cube",
    "intersecting_planes",
    "ridge_to_tjunction",
    "add_noise",
    "GENERATORS",
]

FACE, EDGE, CORNER = 0, 1, 2


@dataclass(frozen=True, eq=False)
class SyntheticSurface:
    cloud: PointCloud
    truth: dict = field(default_factory=dict)
    tags: np.ndarray | None = None
    center_index: int = 0


def disk_samples(n, radius=1.0, seed=0, include_center=True):
    """``n`` uniform samples ``(r, theta)`` of a disk; the first is the center if requested."""
    rng = np.random.default_rng(seed)
    m = n - 1 if include_center else n
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, m))
    theta = rng.uniform(0.0, 2.0 * np.pi, m)
    if include_center:
        r = np.concatenate([[0.0], r])
        theta = np.concatenate([[0.0], theta])
    return r, theta


def _height_field(r, theta, z):
    return PointCloud(np.column_stack([r * np.cos(theta), r * np.sin(theta), z]))


def from_wavejets(coeffs: WavejetCoeffs, n=10000, radius=1.0, seed=0):
    """Samples ``(r cos t, r sin t, f(r, t))`` of the surface with the given coefficients."""
    r, theta = disk_samples(n, radius, seed)
    return _height_field(r, theta, evaluate(coeffs, r, theta))


def _saddle(order, n, radius, seed):
    coeffs = WavejetCoeffs.from_dict({(order, order): 0.5}, max_order=max(order, 2))
    step = 2.0 * np.pi / order
    maxima = step * np.arange(order)
    truth = {
        "coeffs": coeffs,
        "directions": {order: {"max": maxima, "min": maxima + step / 2.0}},
        "eigenvalue": float(np.prod(np.arange(1, order + 1))),
    }
    return SyntheticSurface(from_wavejets(coeffs, n, radius, seed), truth)


def monkey_saddle(n=10000, radius=1.0, seed=0):
    """``z = x^3 - 3 x y^2 = r^3 cos 3t``; order-3 maxima at ``0, 2pi/3, 4pi/3``."""
    return _saddle(3, n, radius, seed)


def octopus_saddle(n=10000, radius=1.0, seed=0):
    """``z = r^8 cos 8t``; order-8 maxima at multiples of ``pi/4``."""
    return _saddle(8, n, radius, seed)


def cube(n=50000, edge_len=1.0, seed=0, edge_points=None, stratified=True):
    """Surface samples of an axis-aligned cube centered at the origin.

    Faces are sampled uniformly: by default stratified, one jittered point
    per cell of a square grid (so slightly fewer than ``n`` points in total),
    otherwise i.i.d. Edges get ``edge_points`` evenly spaced samples in
    total (default: matched to the face sample spacing) and the 8 corners
    are included. ``tags`` marks FACE / EDGE / CORNER,
    ``truth["edge_direction"]`` holds the unit edge direction of edge
    points. Normals are outward (averaged on edges and corners).
    """
    rng = np.random.default_rng(seed)
    h = edge_len / 2.0
    if edge_points is None:
        spacing = np.sqrt(6.0 * edge_len**2 / n)
        edge_points = 12 * max(1, int(edge_len / spacing) - 1)
    per_edge = max(1, edge_points // 12)
    n_face = n - 12 * per_edge - 8
    if n_face < 6:
        raise InvalidArgumentError(f"n={n} too small for the requested edge sampling")

    if stratified:
        # one jittered sample per cell of an m x m grid on every face
        m = int(np.sqrt(n_face / 6))
        face_id = np.repeat(np.arange(6), m * m)
        cells = np.stack(np.meshgrid(np.arange(m), np.arange(m), indexing="ij"), -1).reshape(-1, 2)
        uv = (np.tile(cells, (6, 1)) + rng.uniform(0, 1, (6 * m * m, 2))) / m * edge_len - h
        n_face = face_id.size
    else:
        face_id = rng.integers(0, 6, n_face)
        uv = rng.uniform(-h, h, (n_face, 2))
    axis = face_id // 2
    side = np.where(face_id % 2 == 0, -1.0, 1.0)
    face_pts = np.empty((n_face, 3))
    face_nrm = np.zeros((n_face, 3))
    for a in range(3):
        sel = axis == a
        others = [b for b in range(3) if b != a]
        face_pts[sel, a] = side[sel] * h
        face_pts[sel, others[0]] = uv[sel, 0]
        face_pts[sel, others[1]] = uv[sel, 1]
        face_nrm[sel, a] = side[sel]

    t = h * ((np.arange(per_edge) + 0.5) / per_edge * 2.0 - 1.0)
    edge_pts, edge_nrm, edge_dir = [], [], []
    for a in range(3):
        others = [b for b in range(3) if b != a]
        for s0 in (-1.0, 1.0):
            for s1 in (-1.0, 1.0):
                p = np.zeros((per_edge, 3))
                p[:, a] = t
                p[:, others[0]] = s0 * h
                p[:, others[1]] = s1 * h
                nrm = np.zeros(3)
                nrm[others[0]], nrm[others[1]] = s0, s1
                d = np.zeros(3)
                d[a] = 1.0
                edge_pts.append(p)
                edge_nrm.append(np.tile(nrm / np.sqrt(2.0), (per_edge, 1)))
                edge_dir.append(np.tile(d, (per_edge, 1)))
    signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float)
    corner_pts = signs * h
    corner_nrm = signs / np.sqrt(3.0)

    positions = np.vstack([face_pts, *edge_pts, corner_pts])
    normals = np.vstack([face_nrm, *edge_nrm, corner_nrm])
    n_edge = 12 * per_edge
    tags = np.concatenate([np.full(n_face, FACE), np.full(n_edge, EDGE), np.full(8, CORNER)])
    directions = np.vstack([np.zeros((n_face, 3)), *edge_dir, np.zeros((8, 3))])
    truth = {"edge_direction": directions, "edge_len": edge_len}
    return SyntheticSurface(PointCloud(positions, normals), truth, tags, center_index=n_face)


def _sector_gradients(angles, slope):
    """Gradients of the planar pieces of a pyramid whose creases descend at ``slope``."""
    m = angles.size
    grads = []
    for i in range(m):
        a0, a1 = angles[i], angles[(i + 1) % m]
        width = (a1 - a0) % (2.0 * np.pi)
        if width >= np.pi - 1e-12:
            raise InvalidArgumentError("every sector between creases must be narrower than pi")
        bis = a0 + width / 2.0
        grads.append(-slope / np.cos(width / 2.0) * np.array([np.cos(bis), np.sin(bis)]))
    return np.array(grads)


def intersecting_planes(n=20000, angles=None, n_planes=5, slope=0.5, radius=1.0, seed=0):
    """Pyramid of ``n_planes`` planes through the origin, creases at ``angles``.

    The creases are ridges descending at ``slope``; each face is the plane
    through two neighbouring creases. With two planes the surface is a roof
    ``z = -slope |y'|`` with its ridge along ``angles[0]``.
    """
    if angles is None:
        angles = 2.0 * np.pi * np.arange(n_planes) / n_planes
    angles = np.sort(np.asarray(angles, dtype=float) % (2.0 * np.pi))
    r, theta = disk_samples(n, radius, seed)
    xy = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    if angles.size == 2:
        if abs((angles[1] - angles[0]) - np.pi) > 1e-12:
            raise InvalidArgumentError("two planes must meet along a straight ridge")
        across = np.array([-np.sin(angles[0]), np.cos(angles[0])])
        z = -slope * np.abs(xy @ across)
    elif angles.size >= 3:
        grads = _sector_gradients(angles, slope)
        sector = np.searchsorted(angles, theta, side="right") - 1
        z = np.einsum("ij,ij->i", grads[sector % angles.size], xy)
    else:
        raise InvalidArgumentError("need at least two planes")
    truth = {"crease_angles": angles, "slope": slope}
    return SyntheticSurface(PointCloud(np.column_stack([xy, z])), truth)


def _tjunction_height(x, y, t, width, height):
    # bar along x, plus a stem along +y faded in by t
    bar = np.exp(-(y**2) / (2.0 * width**2))
    stem = np.exp(-(x**2) / (2.0 * width**2)) * 0.5 * (1.0 + np.tanh(y / width))
    return height * (bar + t * stem)


def ridge_to_tjunction(t, n=20000, radius=1.0, width=0.15, height=0.2, seed=0):
    """Smooth ridge (``t = 0``) morphing into a smooth T-junction (``t = 1``).

    ``z = height * (exp(-y^2/2w^2) + t exp(-x^2/2w^2) (1 + tanh(y/w)) / 2)``:
    a Gaussian crest along the x axis, plus a crest along +y whose onset is a
    tanh step at the origin.
    """
    if not 0.0 <= t <= 1.0:
        raise InvalidArgumentError(f"morph parameter must lie in [0, 1], got {t}")
    r, theta = disk_samples(n, radius, seed)
    x, y = r * np.cos(theta), r * np.sin(theta)
    z = _tjunction_height(x, y, t, width, height)
    truth = {"arms": np.array([0.0, np.pi / 2.0, np.pi]) if t > 0 else np.array([0.0, np.pi]), "t": t}
    return SyntheticSurface(PointCloud(np.column_stack([x, y, z])), truth)


def add_noise(cloud, sigma_pct, seed=0):
    """Gaussian displacement with standard deviation ``sigma_pct`` % of the bounding diagonal."""
    if isinstance(cloud, SyntheticSurface):
        cloud = cloud.cloud
    if sigma_pct < 0:
        raise InvalidArgumentError("noise level must be non-negative")
    if sigma_pct == 0:
        return cloud
    sigma = sigma_pct / 100.0 * cloud.bounding_diagonal
    rng = np.random.default_rng(seed)
    moved = cloud.positions + rng.normal(0.0, sigma, cloud.positions.shape)
    return PointCloud(moved, cloud.normals)


GENERATORS = {
    "monkey": monkey_saddle,
    "octopus": octopus_saddle,
    "cube": cube,
    "planes": intersecting_planes,
    "tjunction": ridge_to_tjunction,
}
