"""The quasimode f_R(x) = e^{2πiξ₀x}(χψ)(x/R) and the Poisson-kernel calculus acting on it."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, Optional
import logging

import numpy as np
from scipy.signal import fftconvolve

from src.fourier.bumps import profile, xi0_of_lambda
from src.fourier.grid import LineGrid

logger = logging.getLogger(__name__)

RESIDUAL_POISSON_T = 2.0
MIN_RESIDUAL_RADIUS = 4.0
TARGET_BLOCK = 256
POISSON_QUAD_NODES = 2 ** 14


@lru_cache(maxsize=32)
def _envelope(grid: LineGrid, R: float) -> np.ndarray:
    """(χψ)(x/R) on the grid nodes; ψ has no closed form, so this is cached per (grid, R)."""
    values = profile(grid.x / R)
    values.setflags(write=False)
    logger.debug(f"Sampled envelope for R={R} on {grid.n_samples} nodes")
    return values


@dataclass(frozen=True)
class QuasiMode:
    """Sampled f_R together with its discrete Fourier transform."""

    lam: float
    xi0: float
    R: float
    grid: LineGrid
    samples: np.ndarray
    spectrum_samples: np.ndarray

    def evaluate(self, x) -> np.ndarray:
        """f_R at arbitrary abscissae, from the closed-form envelope rather than the grid."""
        x = np.asarray(x, dtype=float)
        return np.exp(2j * np.pi * self.xi0 * x) * profile(x / self.R)


def build_quasimode(lam: float, R: float, grid: Optional[LineGrid] = None) -> QuasiMode:
    """Sample f_R = e^{2πiξ₀x}(χψ)(x/R) with ξ₀ from λ = ½e^{−4πξ₀}.

    f_R is supported in [−R/2, R/2]; the grid must leave a margin of R/2 on
    either side, i.e. L ≥ R.
    """
    xi0 = xi0_of_lambda(lam)
    if R < 1:
        raise ValueError(f"R must be at least 1, got {R}")
    grid = grid or LineGrid.for_radius(R)
    if grid.half_width < R:
        raise ValueError(
            f"Grid half-width {grid.half_width} too small for R={R}: "
            f"the support [−{R / 2}, {R / 2}] needs a margin of R/2 inside [−L, L]"
        )
    samples = np.exp(2j * np.pi * xi0 * grid.x) * _envelope(grid, float(R))
    samples.setflags(write=False)
    spectrum_samples = grid.forward(samples)
    spectrum_samples.setflags(write=False)
    return QuasiMode(lam=float(lam), xi0=xi0, R=float(R), grid=grid,
                     samples=samples, spectrum_samples=spectrum_samples)


def poisson_kernel(x, t: float):
    """P_t(x) = (1/π)·t/(x² + t²)."""
    x = np.asarray(x, dtype=float)
    return t / (np.pi * (x ** 2 + t ** 2))


def poisson_convolve(values: np.ndarray, grid: LineGrid, t: float,
                     method: Literal["multiplier", "direct"] = "multiplier") -> np.ndarray:
    """P_t ∗ f on the grid nodes.

    ``multiplier`` multiplies the discrete transform by e^{−2πt|ξ|}, which is the
    convolution with the 2L-periodized kernel. ``direct`` is the trapezoid
    quadrature of the linear convolution, evaluated with a zero-padded FFT.
    Real input gives real output.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    values = np.asarray(values)
    if method == "multiplier":
        out = grid.inverse(grid.forward(values) * np.exp(-2.0 * np.pi * t * np.abs(grid.frequencies)))
    elif method == "direct":
        n = grid.n_samples
        kernel = poisson_kernel(np.arange(-(n - 1), n) * grid.spacing, t)
        out = grid.spacing * fftconvolve(values, kernel, mode="full")[n - 1:2 * n - 1]
    else:
        raise ValueError(f"Unknown convolution method: {method}")
    return out.real if np.isrealobj(values) else out


def poisson_at(qm: QuasiMode, targets, t: float, quad_nodes: int = POISSON_QUAD_NODES) -> np.ndarray:
    """(P_t ∗ f_R)(x) at arbitrary abscissae by a fine trapezoid rule over the support [−R/2, R/2].

    f_R is evaluated in closed form, so the result does not depend on the quasimode's grid.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    nodes = np.linspace(-qm.R / 2, qm.R / 2, quad_nodes + 1)
    # f_R and all its derivatives vanish at ±R/2, so the end weights do not matter
    weighted = qm.evaluate(nodes) * (qm.R / quad_nodes)
    out = np.empty(targets.shape[0], dtype=complex)
    for start in range(0, targets.shape[0], TARGET_BLOCK):
        block = targets[start:start + TARGET_BLOCK]
        out[start:start + TARGET_BLOCK] = poisson_kernel(block[:, None] - nodes[None, :], t) @ weighted
    return out


def periodization_bound(values: np.ndarray, grid: LineGrid, t: float) -> float:
    """Upper bound tπ‖f‖₁/(4L²) on |multiplier − direct| at targets within L of the support of f."""
    l1 = grid.spacing * float(np.sum(np.abs(values)))
    return t * np.pi * l1 / (4.0 * grid.half_width ** 2)


def sobolev_half_norm(values: np.ndarray, grid: LineGrid) -> float:
    """(Σ (1 + |ξ_k|)·|f̂(ξ_k)|²·Δξ)^{1/2} over the discrete frequencies."""
    spectrum = grid.forward(values)
    weights = 1.0 + np.abs(grid.frequencies)
    return float(np.sqrt(grid.dxi * np.sum(weights * np.abs(spectrum) ** 2)))


def residual_ratio(lam: float, R: float) -> float:
    """‖λf_R − ½P₂∗f_R‖_{1/2} / ‖f_R‖_{1/2} on the default grid for R."""
    if R < MIN_RESIDUAL_RADIUS:
        raise ValueError(f"R must be at least {MIN_RESIDUAL_RADIUS}, got {R}")
    try:
        grid = LineGrid.for_radius(R)
        qm = build_quasimode(lam, R, grid)
    except ValueError as e:
        logger.error(f"Could not set up the quasimode for lambda={lam}, R={R}: {e}")
        raise
    residual = lam * qm.samples - 0.5 * poisson_convolve(qm.samples, grid, RESIDUAL_POISSON_T)
    ratio = sobolev_half_norm(residual, grid) / sobolev_half_norm(qm.samples, grid)
    logger.debug(f"Fourier residual ratio lambda={lam}, R={R}: {ratio:.6e}")
    return ratio
