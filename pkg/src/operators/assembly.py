"""Dense Nyström discretizations of the NP and single layer operators on a sampled curve."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal
import logging

import numpy as np
from scipy.linalg import toeplitz

from src.geometry.curves import BoundaryCurve, CurveDescriptor
from src.operators.kernels import INV_2PI, log_distance_matrix, np_kernel_diagonal, np_kernel_matrix

logger = logging.getLogger(__name__)

ROW_BLOCK = 512


@dataclass(frozen=True)
class OperatorMatrix:
    """Discrete operator acting on nodal samples: (A φ)_i = Σ_j entries[i, j] φ_j.

    ``entries`` already contain the source quadrature weight of column j.
    """

    entries: np.ndarray
    weights: np.ndarray
    kind: Literal["np_kernel", "single_layer"]
    curve_descriptor: CurveDescriptor

    def __post_init__(self):
        n = self.weights.shape[0]
        if self.entries.shape != (n, n):
            raise ValueError(f"entries shape {self.entries.shape} does not match {n} weights")

    @property
    def n_nodes(self) -> int:
        return int(self.weights.shape[0])

    def symmetrized(self) -> np.ndarray:
        """Bilinear-form matrix W·A, with W the diagonal of quadrature weights."""
        return self.weights[:, None] * self.entries

    def apply(self, density: np.ndarray) -> np.ndarray:
        return self.entries @ density


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def assemble_np(curve: BoundaryCurve) -> OperatorMatrix:
    """Nyström matrix of the NP operator with the trapezoid rule and the κ/(4π) diagonal limit."""
    n = curve.n_nodes
    weights = curve.weights
    entries = np.empty((n, n))
    for start in range(0, n, ROW_BLOCK):
        stop = min(start + ROW_BLOCK, n)
        block = np_kernel_matrix(curve.points[start:stop], curve.points, curve.normals)
        rows = np.arange(start, stop)
        block[rows - start, rows] = 0.0
        if not np.all(np.isfinite(block)):
            raise ValueError(f"Degenerate curve {curve.descriptor.label()}: coincident nodes")
        block[rows - start, rows] = np_kernel_diagonal(1.0) * curve.curvatures[rows]
        entries[start:stop] = block * weights[None, :]
    logger.debug(f"Assembled NP matrix for {curve.descriptor.label()} ({n} nodes)")
    return OperatorMatrix(entries=_readonly(entries), weights=_readonly(weights.copy()),
                          kind="np_kernel", curve_descriptor=curve.descriptor)


def kress_log_weights(n_nodes: int) -> np.ndarray:
    """First row of the Toeplitz matrix R with ∫₀^{2π} log(4 sin²((t−τ)/2)) f(τ) dτ ≈ Σ_j R_ij f(t_j)."""
    m = n_nodes // 2
    d = np.arange(n_nodes)
    harmonics = np.arange(1, m)
    angles = np.outer(d, harmonics) * (np.pi / m)
    return -(2.0 * np.pi / m) * (np.cos(angles) @ (1.0 / harmonics)) - (np.pi / m ** 2) * np.cos(d * np.pi)


def assemble_single_layer(curve: BoundaryCurve) -> OperatorMatrix:
    """Nyström matrix of the single layer −(1/2π)∫log|x − y| φ(y) ds(y).

    The logarithm is split into log(4 sin²((t−τ)/2)) / 2, integrated with exact
    trigonometric weights, plus a smooth remainder on the trapezoid rule whose
    diagonal limit is log|x'(t)|.
    """
    if curve.diameter >= 1.0:
        raise ValueError(
            f"Curve {curve.descriptor.label()} has diameter {curve.diameter:.3g} >= 1; "
            "rescale it below 1 so the single layer is positive definite"
        )
    n = curve.n_nodes
    h = curve.spacing
    d = np.arange(n)
    log_sin = np.zeros(n)
    log_sin[1:] = np.log(4.0 * np.sin(d[1:] * np.pi / n) ** 2)

    remainder = log_distance_matrix(curve.points) - 0.5 * toeplitz(log_sin)
    np.fill_diagonal(remainder, np.log(curve.speeds))

    kernel = -INV_2PI * (0.5 * toeplitz(kress_log_weights(n)) / h + remainder)
    kernel = 0.5 * (kernel + kernel.T)
    weights = curve.weights
    logger.debug(f"Assembled single layer matrix for {curve.descriptor.label()} ({n} nodes)")
    return OperatorMatrix(entries=_readonly(kernel * weights[None, :]), weights=_readonly(weights.copy()),
                          kind="single_layer", curve_descriptor=curve.descriptor)
