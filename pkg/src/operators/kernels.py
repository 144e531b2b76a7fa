"""Pointwise kernels of the Neumann–Poincaré (double layer) and single layer operators."""
import numpy as np
from scipy.spatial.distance import cdist

INV_2PI = 1.0 / (2.0 * np.pi)


def np_kernel_value(x, y, normal_y) -> float:
    """(1/2π)⟨y − x, ν_y⟩ / |x − y|² for distinct points x, y."""
    diff = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    dist2 = float(diff @ diff)
    if dist2 == 0.0:
        raise ValueError("np_kernel_value is singular at x = y; use np_kernel_diagonal")
    return INV_2PI * float(diff @ np.asarray(normal_y, dtype=float)) / dist2


def np_kernel_diagonal(curvature: float) -> float:
    """Limit of the NP kernel at coincident points of a C² curve: κ/(4π)."""
    return float(curvature) / (4.0 * np.pi)


def np_kernel_matrix(targets: np.ndarray, sources: np.ndarray, source_normals: np.ndarray) -> np.ndarray:
    """Vectorized NP kernel, shape (n_targets, n_sources); coincident pairs are left as nan."""
    diff = sources[None, :, :] - targets[:, None, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    numerator = np.einsum("ijk,jk->ij", diff, source_normals)
    with np.errstate(divide="ignore", invalid="ignore"):
        return INV_2PI * numerator / dist2


def log_distance_matrix(points: np.ndarray) -> np.ndarray:
    """log|x_i − x_j| with zeros on the diagonal."""
    dist = cdist(points, points)
    np.fill_diagonal(dist, 1.0)
    return np.log(dist)
