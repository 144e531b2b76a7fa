"""Sampled closed boundary curves: stadium-shaped thin domains, ellipses and circles."""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Literal, Optional
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

DEFAULT_DIAMETER = 0.5
MIN_NODES = 32
UNIT_NORMAL_TOL = 1e-12
# Below this many node spacings a junction node's part label is set by rounding
JUNCTION_CLEARANCE_TOL = 1e-9


class CurvePart(IntEnum):
    """Which piece of the boundary a node lies on."""
    SMOOTH = -1
    BOTTOM = 0
    RIGHT_CAP = 1
    TOP = 2
    LEFT_CAP = 3


class CurveDescriptor(BaseModel):
    """Provenance of a curve: its shape family, shape parameters and the scale applied."""
    model_config = ConfigDict(frozen=True)

    shape: Literal["stadium", "ellipse", "circle"]
    params: Dict[str, float]
    scale: float = Field(default=1.0, gt=0)

    @property
    def reference_diameter(self) -> float:
        """Diameter before any rescale."""
        if self.shape == "stadium":
            return 2.0 * self.params["R"] + 2.0
        return 2.0 * self.params["a"]

    @property
    def diameter(self) -> float:
        return self.reference_diameter * self.scale

    def label(self) -> str:
        """Short filename-safe tag such as ``stadium-R4`` or ``ellipse-a2-b1``."""
        parts = [self.shape] + [f"{key}{value:g}" for key, value in sorted(self.params.items())]
        return "-".join(parts)

    def rescaled(self, factor: float) -> "CurveDescriptor":
        return self.model_copy(update={"scale": self.scale * factor})


def _frozen(array: np.ndarray, dtype=float) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class BoundaryCurve:
    """Closed curve sampled at ``n_nodes`` equispaced parameter values t_k = 2πk/n.

    Attributes
    ----------
    t : np.ndarray, shape (n,)
        Parameter values in [0, 2π).
    points : np.ndarray, shape (n, 2)
        Node coordinates.
    normals : np.ndarray, shape (n, 2)
        Unit outward normals.
    speeds : np.ndarray, shape (n,)
        |x'(t)| at each node.
    curvatures : np.ndarray, shape (n,)
        Signed curvature (positive on convex arcs of a counter-clockwise curve).
    parts : np.ndarray, shape (n,)
        ``CurvePart`` label per node.
    descriptor : CurveDescriptor
        Shape tag and accumulated scale factor.
    """

    t: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    speeds: np.ndarray
    curvatures: np.ndarray
    parts: np.ndarray
    descriptor: CurveDescriptor

    def __post_init__(self):
        n = self.t.shape[0]
        if n % 2:
            raise ValueError(f"n_nodes must be even, got {n}")
        for name, expected in (("points", (n, 2)), ("normals", (n, 2)), ("speeds", (n,)),
                               ("curvatures", (n,)), ("parts", (n,))):
            shape = getattr(self, name).shape
            if shape != expected:
                raise ValueError(f"{name} shape {shape} != {expected}")
        deviation = np.max(np.abs(np.linalg.norm(self.normals, axis=1) - 1.0))
        if deviation > UNIT_NORMAL_TOL:
            raise ValueError(f"Normal vectors not unit: max deviation {deviation:.2e}")
        if np.any(self.speeds <= 0):
            raise ValueError("Non-positive speeds detected")

    @property
    def n_nodes(self) -> int:
        return int(self.t.shape[0])

    @property
    def spacing(self) -> float:
        """Parameter step 2π/n."""
        return 2.0 * np.pi / self.n_nodes

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights: speed times parameter step."""
        return self.speeds * self.spacing

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.weights))

    @property
    def diameter(self) -> float:
        return self.descriptor.diameter

    @property
    def reference_points(self) -> np.ndarray:
        """Node coordinates with the accumulated scale undone."""
        return self.points / self.descriptor.scale


def _validate_nodes(n_nodes: int) -> None:
    if int(n_nodes) != n_nodes or n_nodes % 2:
        raise ValueError(f"n_nodes must be an even integer, got {n_nodes}")
    if n_nodes < MIN_NODES:
        raise ValueError(f"n_nodes must be at least {MIN_NODES}, got {n_nodes}")


def _fit_diameter(curve: BoundaryCurve, diameter: Optional[float]) -> BoundaryCurve:
    if diameter is None:
        return curve
    if diameter <= 0:
        raise ValueError(f"diameter must be positive, got {diameter}")
    return rescale(curve, diameter / curve.diameter)


def junction_clearance(R: float, n_nodes: int) -> float:
    """Smallest arc-length gap between a stadium node and a flat/cap junction, in node spacings.

    The junctions sit at arc lengths R, L/2 − R, L/2 + R and L − R with L = 4R + 2π, and
    nodes at k·L/n with n even, so all four share the gap dist(n·R/L, ℤ).
    """
    q = n_nodes * R / (4.0 * R + 2.0 * np.pi)
    return float(abs(q - round(q)))


def build_stadium(R: float, n_nodes: int, diameter: Optional[float] = DEFAULT_DIAMETER) -> BoundaryCurve:
    """Boundary of [−R, R] × [−1, 1] with unit semicircular caps centred at (±R, 0).

    Nodes are uniform in arc length starting at the bottom midpoint (0, −1) and run
    counter-clockwise, so both flats carry a node at x₁ = 0. The junctions sit at
    arc lengths R, R+π, 3R+π and 3R+2π; their distance to the nearest node is
    ``junction_clearance(R, n_nodes)`` spacings. Points and normals are continuous
    across a junction, so a node within rounding of one differs only in its part
    label and curvature. The curve is then rescaled to ``diameter`` (pass ``None``
    to keep R-units).
    """
    if R < 1:
        raise ValueError(f"R must be at least 1, got {R}")
    _validate_nodes(n_nodes)
    clearance = junction_clearance(R, n_nodes)
    if clearance < JUNCTION_CLEARANCE_TOL:
        logger.warning(f"Stadium R={R} with {n_nodes} nodes puts a node on a flat/cap junction "
                       f"(clearance {clearance:.1e} spacings); its part label is set by rounding")

    length = 4.0 * R + 2.0 * np.pi
    s = np.arange(n_nodes) * (length / n_nodes)
    junctions = np.array([R, R + np.pi, 3.0 * R + np.pi, 3.0 * R + 2.0 * np.pi])
    parts = np.select(
        [s < junctions[0], s < junctions[1], s < junctions[2], s < junctions[3]],
        [CurvePart.BOTTOM, CurvePart.RIGHT_CAP, CurvePart.TOP, CurvePart.LEFT_CAP],
        default=CurvePart.BOTTOM,
    )

    points = np.empty((n_nodes, 2))
    normals = np.empty((n_nodes, 2))
    curvatures = np.zeros(n_nodes)

    bottom = parts == CurvePart.BOTTOM
    # The left half of the bottom flat wraps around past s = 3R + 2π
    x_bottom = np.where(s < junctions[0], s, s - length)
    points[bottom] = np.column_stack([x_bottom[bottom], -np.ones(bottom.sum())])
    normals[bottom] = (0.0, -1.0)

    top = parts == CurvePart.TOP
    points[top] = np.column_stack([R - (s[top] - junctions[1]), np.ones(top.sum())])
    normals[top] = (0.0, 1.0)

    for part, start, centre, phase in ((CurvePart.RIGHT_CAP, junctions[0], R, -0.5 * np.pi),
                                       (CurvePart.LEFT_CAP, junctions[2], -R, 0.5 * np.pi)):
        mask = parts == part
        phi = phase + (s[mask] - start)
        normals[mask] = np.column_stack([np.cos(phi), np.sin(phi)])
        points[mask] = np.column_stack([centre + np.cos(phi), np.sin(phi)])
        curvatures[mask] = 1.0

    curve = BoundaryCurve(
        t=_frozen(2.0 * np.pi * s / length),
        points=_frozen(points),
        normals=_frozen(normals),
        speeds=_frozen(np.full(n_nodes, length / (2.0 * np.pi))),
        curvatures=_frozen(curvatures),
        parts=_frozen(parts, dtype=int),
        descriptor=CurveDescriptor(shape="stadium", params={"R": float(R)}),
    )
    logger.debug(f"Built stadium R={R} with {n_nodes} nodes")
    return _fit_diameter(curve, diameter)


def _ellipse(a: float, b: float, n_nodes: int, descriptor: CurveDescriptor) -> BoundaryCurve:
    t = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    cos_t, sin_t = np.cos(t), np.sin(t)
    speeds = np.sqrt((a * sin_t) ** 2 + (b * cos_t) ** 2)
    return BoundaryCurve(
        t=_frozen(t),
        points=_frozen(np.column_stack([a * cos_t, b * sin_t])),
        normals=_frozen(np.column_stack([b * cos_t, a * sin_t]) / speeds[:, None]),
        speeds=_frozen(speeds),
        curvatures=_frozen(a * b / speeds ** 3),
        parts=_frozen(np.full(n_nodes, int(CurvePart.SMOOTH)), dtype=int),
        descriptor=descriptor,
    )


def build_ellipse(a: float, b: float, n_nodes: int, diameter: Optional[float] = DEFAULT_DIAMETER) -> BoundaryCurve:
    """Ellipse (a cos θ, b sin θ) with analytic normals and curvature; requires a ≥ b > 0."""
    if b <= 0:
        raise ValueError(f"semi-axes must be positive, got a={a}, b={b}")
    if a < b:
        raise ValueError(f"semi-axes must satisfy a >= b, got a={a}, b={b}")
    _validate_nodes(n_nodes)
    descriptor = CurveDescriptor(shape="ellipse", params={"a": float(a), "b": float(b)})
    return _fit_diameter(_ellipse(a, b, n_nodes, descriptor), diameter)


def build_circle(a: float, n_nodes: int, diameter: Optional[float] = DEFAULT_DIAMETER) -> BoundaryCurve:
    """Circle of radius ``a`` centred at the origin."""
    if a <= 0:
        raise ValueError(f"radius must be positive, got {a}")
    _validate_nodes(n_nodes)
    descriptor = CurveDescriptor(shape="circle", params={"a": float(a)})
    return _fit_diameter(_ellipse(a, a, n_nodes, descriptor), diameter)


def rescale(curve: BoundaryCurve, factor: float) -> BoundaryCurve:
    """Dilate ``curve`` about the origin; normals are unchanged, curvatures divide by ``factor``."""
    if factor <= 0:
        raise ValueError(f"rescale factor must be positive, got {factor}")
    return BoundaryCurve(
        t=curve.t,
        points=_frozen(curve.points * factor),
        normals=curve.normals,
        speeds=_frozen(curve.speeds * factor),
        curvatures=_frozen(curve.curvatures / factor),
        parts=curve.parts,
        descriptor=curve.descriptor.rescaled(factor),
    )
