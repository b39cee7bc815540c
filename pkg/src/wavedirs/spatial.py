"""Point clouds and a static kd-tree for exact radius queries."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidArgumentError

__all__ = ["PointCloud", "SpatialIndex", "build", "radius_query", "brute_force_radius_query"]

LEAF_SIZE = 16


@dataclass(frozen=True, eq=False)
class PointCloud:
    """3-D samples with optional unit normals."""

    positions: np.ndarray
    normals: np.ndarray | None = None

    def __post_init__(self):
        pos = np.ascontiguousarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3:
            raise InvalidArgumentError(f"positions must have shape (N, 3), got {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise InvalidArgumentError("positions must be finite")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        if self.normals is not None:
            nrm = np.ascontiguousarray(self.normals, dtype=float)
            if nrm.shape != pos.shape:
                raise InvalidArgumentError("normals must match positions in shape")
            lengths = np.linalg.norm(nrm, axis=1)
            if np.any(np.abs(lengths - 1.0) > 1e-6):
                raise InvalidArgumentError("normals must have unit length")
            nrm.setflags(write=False)
            object.__setattr__(self, "normals", nrm)

    def __len__(self):
        return self.positions.shape[0]

    @cached_property
    def bounding_diagonal(self):
        if len(self) == 0:
            return 0.0
        return float(np.linalg.norm(self.positions.max(axis=0) - self.positions.min(axis=0)))


@dataclass(frozen=True, eq=False)
class SpatialIndex:
    """Median-split kd-tree stored as flat node arrays.

    Node ``i`` covers ``order[start[i]:end[i]]``; internal nodes have
    children ``left[i]`` and ``right[i]``, leaves have ``left[i] == -1``.
    """

    points: np.ndarray
    order: np.ndarray
    start: np.ndarray
    end: np.ndarray
    left: np.ndarray
    right: np.ndarray
    lower: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)

    def query(self, center, radius):
        return radius_query(self, center, radius)


def build(cloud, leaf_size=LEAF_SIZE) -> SpatialIndex:
    points = cloud.positions if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=float)
    n = points.shape[0]
    if n == 0:
        raise InvalidArgumentError("cannot index an empty point cloud")
    order = np.arange(n)
    start, end, left, right, lower, upper = [], [], [], [], [], []

    def new_node(lo, hi):
        idx = order[lo:hi]
        start.append(lo)
        end.append(hi)
        left.append(-1)
        right.append(-1)
        lower.append(points[idx].min(axis=0))
        upper.append(points[idx].max(axis=0))
        return len(start) - 1

    root = new_node(0, n)
    stack = [root]
    while stack:
        node = stack.pop()
        lo, hi = start[node], end[node]
        if hi - lo <= leaf_size:
            continue
        axis = int(np.argmax(upper[node] - lower[node]))
        idx = order[lo:hi]
        mid = (hi - lo) // 2
        # stable sort keeps the build deterministic for ties
        order[lo:hi] = idx[np.argsort(points[idx, axis], kind="stable")]
        left[node] = new_node(lo, lo + mid)
        right[node] = new_node(lo + mid, hi)
        stack.extend((right[node], left[node]))

    return SpatialIndex(
        points,
        order,
        np.array(start),
        np.array(end),
        np.array(left),
        np.array(right),
        np.array(lower),
        np.array(upper),
    )


def radius_query(index: SpatialIndex, center, radius) -> np.ndarray:
    """Indices of all points with ``|p - center| <= radius`` (closed ball)."""
    if not radius > 0:
        raise InvalidArgumentError(f"radius must be positive, got {radius}")
    q = np.asarray(center, dtype=float).reshape(3)
    r2 = float(radius) ** 2
    slack = r2 * (1 + 1e-12)
    found = []
    stack = [0]
    while stack:
        node = stack.pop()
        gap = np.maximum(index.lower[node] - q, 0.0) + np.maximum(q - index.upper[node], 0.0)
        if gap @ gap > slack:
            continue
        if index.left[node] < 0:
            idx = index.order[index.start[node]:index.end[node]]
            d = index.points[idx] - q
            found.append(idx[np.einsum("ij,ij->i", d, d) <= r2])
        else:
            stack.append(index.left[node])
            stack.append(index.right[node])
    if not found:
        return np.empty(0, dtype=int)
    return np.concatenate(found)


def brute_force_radius_query(points, center, radius):
    d = np.asarray(points, dtype=float) - np.asarray(center, dtype=float)
    return np.flatnonzero(np.einsum("ij,ij->i", d, d) <= float(radius) ** 2)
