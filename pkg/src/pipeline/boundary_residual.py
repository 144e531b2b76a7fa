"""Quasimodes lifted to the stadium boundary and their H^{1/2} residual under the NP operator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional
import logging

import numpy as np
from scipy.spatial.distance import cdist

from src.config import settings
from src.fourier.quasimode import QuasiMode, build_quasimode, poisson_at
from src.geometry.curves import BoundaryCurve, CurveDescriptor, CurvePart, build_stadium
from src.operators.assembly import OperatorMatrix, assemble_np

logger = logging.getLogger(__name__)

ROW_BLOCK = 512
FLATS_POISSON_T = 2.0
FLATS = (CurvePart.TOP, CurvePart.BOTTOM)


@dataclass(frozen=True)
class BoundaryDensity:
    """Complex nodal values of a density on a sampled curve."""

    values: np.ndarray
    curve_descriptor: CurveDescriptor

    def scaled(self, factor: complex) -> "BoundaryDensity":
        return BoundaryDensity(values=self.values * factor, curve_descriptor=self.curve_descriptor)


def default_boundary_nodes(R: float) -> int:
    """64 nodes per unit of R + 1, rounded to an even count."""
    return 2 * int(round(settings.nodes_per_unit * (R + 1) / 2))


def lift_to_boundary(qm: QuasiMode, curve: BoundaryCurve) -> BoundaryDensity:
    """φ_R = f_R(x₁) on both flats and 0 on the caps, with x₁ taken before the rescale."""
    if curve.descriptor.shape != "stadium":
        raise ValueError(f"Quasimodes lift onto stadium boundaries only, got {curve.descriptor.label()}")
    curve_R = curve.descriptor.params["R"]
    if not np.isclose(curve_R, qm.R):
        raise ValueError(f"Quasimode R={qm.R} does not match curve R={curve_R}")

    values = np.zeros(curve.n_nodes, dtype=complex)
    on_flats = np.isin(curve.parts, FLATS)
    values[on_flats] = qm.evaluate(curve.reference_points[on_flats, 0])
    values.setflags(write=False)
    return BoundaryDensity(values=values, curve_descriptor=curve.descriptor)


def gagliardo_half_norm(density: BoundaryDensity, curve: BoundaryCurve) -> float:
    """Discrete ‖h‖² = Σ wᵢ|hᵢ|² + Σ_{i≠j} wᵢwⱼ|hᵢ − hⱼ|²/|xᵢ − xⱼ|², square-rooted."""
    h = np.asarray(density.values)
    if h.shape != (curve.n_nodes,):
        raise ValueError(f"Density has {h.shape[0]} values, curve has {curve.n_nodes} nodes")
    w = curve.weights
    l2 = float(np.sum(w * np.abs(h) ** 2))

    seminorm = 0.0
    for start in range(0, curve.n_nodes, ROW_BLOCK):
        stop = min(start + ROW_BLOCK, curve.n_nodes)
        dist2 = cdist(curve.points[start:stop], curve.points, "sqeuclidean")
        rows = np.arange(start, stop)
        dist2[rows - start, rows] = np.inf
        jumps = np.abs(h[start:stop, None] - h[None, :]) ** 2
        seminorm += float(w[start:stop] @ (jumps / dist2) @ w)
    return float(np.sqrt(l2 + seminorm))


def operator_residual_ratio(lam: float, density: BoundaryDensity, curve: BoundaryCurve,
                            K: Optional[OperatorMatrix] = None) -> float:
    """‖(λI − K)φ‖_{1/2} / ‖φ‖_{1/2} in the discrete Gagliardo norm."""
    K = K or assemble_np(curve)
    denominator = gagliardo_half_norm(density, curve)
    if denominator == 0.0:
        raise ValueError("Residual ratio is undefined for the zero density")
    residual = BoundaryDensity(values=lam * density.values - K.apply(density.values),
                               curve_descriptor=density.curve_descriptor)
    return gagliardo_half_norm(residual, curve) / denominator


def boundary_residual_ratio(lam: float, R: float, n_nodes: Optional[int] = None) -> float:
    """Residual ratio of the lifted quasimode φ_R on the stadium of half-length R."""
    if R < 2:
        raise ValueError(f"R must be at least 2, got {R}")
    n_nodes = n_nodes or default_boundary_nodes(R)
    logger.info(f"Boundary residual for lambda={lam}, R={R} with {n_nodes} nodes")

    try:
        # Step 1: Boundary and operator
        curve = build_stadium(R, n_nodes)
        K = assemble_np(curve)

        # Step 2: Lift the quasimode onto the flats
        density = lift_to_boundary(build_quasimode(lam, R), curve)

        # Step 3: Ratio of Gagliardo norms
        ratio = operator_residual_ratio(lam, density, curve, K)
    except ValueError as e:
        logger.error(f"Boundary residual failed for lambda={lam}, R={R}: {e}")
        raise

    logger.info(f"Boundary residual ratio lambda={lam}, R={R}: {ratio:.6e}")
    return ratio


def flats_poisson_deviation(lam: float, R: float, n_nodes: Optional[int] = None) -> float:
    """max |(Kφ_R)(x) − ½(P₂ ∗ f_R)(x₁)| over top-flat nodes with |x₁| ≤ R/2.

    On the flats the other flat sits at distance 2 and the own flat contributes
    nothing, so Kφ_R reduces to the half Poisson convolution; the deviation is
    the Nyström quadrature error.
    """
    n_nodes = n_nodes or default_boundary_nodes(R)
    curve = build_stadium(R, n_nodes)
    qm = build_quasimode(lam, R)
    density = lift_to_boundary(qm, curve)
    applied = assemble_np(curve).apply(density.values)

    x1 = curve.reference_points[:, 0]
    mid_top = (curve.parts == CurvePart.TOP) & (np.abs(x1) <= R / 2)
    reference = 0.5 * poisson_at(qm, x1[mid_top], FLATS_POISSON_T)
    deviation = float(np.max(np.abs(applied[mid_top] - reference)))
    logger.debug(f"Flats deviation lambda={lam}, R={R}, n={n_nodes}: {deviation:.3e}")
    return deviation
