"""Arbitrary-order principal directions on point sets.

A local height field is fitted in the wavejet basis around each sample; the
order-``k`` directions are the extrema of the angular function ``g_k``,
equivalently the E-eigenvectors of the order-``k`` symmetric derivative
tensor.

>>> from wavedirs import synthetic, FitConfig, estimate_at, principal_directions
>>> surf = synthetic.monkey_saddle(n=10000)
>>> frame, coeffs = estimate_at(surf.cloud, 0, FitConfig(radius=0.5))
>>> [d.kind.value for d in principal_directions(coeffs, 3, frame)]
['max', 'min', 'max', 'min', 'max', 'min']
"""
from .directions import (
    Kind,
    PrincipalDirection,
    classify_and_build,
    eigen_residual,
    find_roots,
    principal_directions,
    rosy_feasibility,
)
from .errors import (
    FrameUndefinedError,
    IllConditionedError,
    InsufficientNeighborsError,
    InvalidArgumentError,
    ParseError,
    WavedirsError,
)
from .regression import FitConfig, LocalFrame, build_frame, estimate_at, fit, polar_coords
from .spatial import PointCloud, SpatialIndex, radius_query
from .tensor import SymTensor2, apply_full, contract, tensor_gradient, tensor_to_wavejet_row, wavejet_row_to_tensor
from .wavejets import WavejetCoeffs, evaluate, g_k, g_k_deriv

__version__ = "0.1.0"

__all__ = [
    "Kind",
    "PrincipalDirection",
    "classify_and_build",
    "eigen_residual",
    "find_roots",
    "principal_directions",
    "rosy_feasibility",
    "FrameUndefinedError",
    "IllConditionedError",
    "InsufficientNeighborsError",
    "InvalidArgumentError",
    "ParseError",
    "WavedirsError",
    "FitConfig",
    "LocalFrame",
    "build_frame",
    "estimate_at",
    "fit",
    "polar_coords",
    "PointCloud",
    "SpatialIndex",
    "radius_query",
    "SymTensor2",
    "apply_full",
    "contract",
    "tensor_gradient",
    "tensor_to_wavejet_row",
    "wavejet_row_to_tensor",
    "WavejetCoeffs",
    "evaluate",
    "g_k",
    "g_k_deriv",
]
