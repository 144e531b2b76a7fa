import logging

import numpy as np
import pytest
from scipy.special import ellipe

from src.geometry.curves import (DEFAULT_DIAMETER, CurvePart, build_circle, build_ellipse,
                                 build_stadium, junction_clearance, rescale)

logger = logging.getLogger(__name__)


# {{{ stadium

@pytest.mark.parametrize("R", [1, 2, 4.5, 8])
def test_stadium_layout(R):
    n = 2 * int(round(64 * (R + 1) / 2))
    curve = build_stadium(R, n)

    assert curve.n_nodes == n
    assert curve.diameter == pytest.approx(DEFAULT_DIAMETER)
    scale = curve.descriptor.scale
    assert scale == pytest.approx(DEFAULT_DIAMETER / (2 * R + 2))

    # first node is the bottom midpoint
    assert np.allclose(curve.points[0], (0.0, -scale), atol=1e-15)
    assert curve.parts[0] == CurvePart.BOTTOM

    # arc-length parametrization: constant speed, exact perimeter
    assert np.allclose(curve.speeds, curve.speeds[0])
    assert curve.perimeter == pytest.approx((4 * R + 2 * np.pi) * scale, rel=1e-12)

    x1 = curve.reference_points[:, 0]
    for part in (CurvePart.TOP, CurvePart.BOTTOM):
        on_flat = curve.parts == part
        assert np.all(np.abs(x1[on_flat]) < R)
        assert np.all(curve.curvatures[on_flat] == 0)
        # both flats carry a node at x₁ = 0
        assert np.min(np.abs(x1[on_flat])) < 1e-12

    caps = np.isin(curve.parts, [CurvePart.LEFT_CAP, CurvePart.RIGHT_CAP])
    assert np.all(np.abs(x1[caps]) >= R - 1e-12)
    assert np.allclose(curve.curvatures[caps], 1.0 / scale)

    extent = np.max(np.abs(curve.reference_points[:, 0]))
    assert extent <= R + 1 + 1e-12


def test_stadium_normals_point_outward(small_stadium):
    curve = small_stadium
    assert np.allclose(np.linalg.norm(curve.normals, axis=1), 1.0, atol=1e-12)
    # the stadium is convex and centred at the origin
    assert np.all(np.einsum("ij,ij->i", curve.points, curve.normals) > 0)


def test_stadium_keeps_reference_units():
    curve = build_stadium(3.0, 256, diameter=None)
    assert curve.descriptor.scale == 1.0
    assert curve.diameter == pytest.approx(8.0)
    assert np.allclose(curve.reference_points, curve.points)


@pytest.mark.parametrize("R, n", [(1, 128), (2, 192), (3, 256), (2, 1024), (4.5, 352)])
def test_junction_clearance_matches_nodes(R, n):
    length = 4 * R + 2 * np.pi
    s = np.arange(n) * length / n
    junctions = np.array([R, R + np.pi, 3 * R + np.pi, 3 * R + 2 * np.pi])
    nearest = np.min(np.abs(s[:, None] - junctions[None, :])) / (length / n)
    assert junction_clearance(R, n) == pytest.approx(nearest, abs=1e-9)


def test_policy_node_counts_clear_the_junctions():
    clearances = {R: junction_clearance(R, 64 * (R + 1)) for R in range(1, 17)}
    logger.info(f"junction clearances: {clearances}")
    assert min(clearances.values()) > 1e-3


@pytest.mark.parametrize("R, n", [(1, 128), (2, 192), (8, 576)])
def test_stadium_is_continuous_across_junctions(R, n):
    # consecutive nodes are one arc-length spacing apart and normals turn by at most
    # the arc they span, whichever part each node is labelled with
    curve = build_stadium(R, n)
    ds = (4 * R + 2 * np.pi) / n
    steps = np.linalg.norm(np.roll(curve.reference_points, -1, axis=0) - curve.reference_points, axis=1)
    turns = np.linalg.norm(np.roll(curve.normals, -1, axis=0) - curve.normals, axis=1)
    assert np.all(steps <= ds + 1e-12)
    assert np.all(steps >= 0.999 * ds)
    assert np.all(turns <= ds + 1e-12)


def _fd_unit_tangents(points):
    # fourth-order periodic central difference
    d = (-np.roll(points, -2, axis=0) + 8 * np.roll(points, -1, axis=0)
         - 8 * np.roll(points, 1, axis=0) + np.roll(points, 2, axis=0)) / 12
    return d / np.linalg.norm(d, axis=1)[:, None]


def _tangent_errors(curve):
    tangents = np.column_stack([-curve.normals[:, 1], curve.normals[:, 0]])
    return np.linalg.norm(_fd_unit_tangents(curve.points) - tangents, axis=1)


@pytest.mark.parametrize("builder", [lambda: build_ellipse(2.0, 1.0, 512),
                                     lambda: build_ellipse(5.0, 1.0, 1024),
                                     lambda: build_circle(1.0, 512)])
def test_fd_tangents_match_normals_on_smooth_curves(builder):
    assert np.max(_tangent_errors(builder())) <= 1e-6


def test_fd_tangents_match_normals_on_the_stadium():
    R, n = 2.0, 512
    curve = build_stadium(R, n)
    errors = _tangent_errors(curve)
    ds = (4 * R + 2 * np.pi) / n

    s = curve.t * (4 * R + 2 * np.pi) / (2 * np.pi)
    junctions = np.array([R, R + np.pi, 3 * R + np.pi, 3 * R + 2 * np.pi])
    # nodes whose stencil lies on a single flat or cap
    clear = np.min(np.abs(s[:, None] - junctions[None, :]), axis=1) > 2 * ds
    logger.info(f"stadium tangents: {np.max(errors[clear]):.2e} away from junctions, "
                f"{np.max(errors[~clear]):.2e} next to them")
    assert np.max(errors[clear]) <= 1e-6
    # a stencil straddling a curvature jump is first order in the spacing
    assert np.max(errors[~clear]) <= ds / 2

@pytest.mark.parametrize("R, n", [(0.5, 128), (2, 63), (2, 30), (2, 64.5)])
def test_stadium_rejects_bad_input(R, n):
    with pytest.raises(ValueError):
        build_stadium(R, n)

# }}}


# {{{ ellipse and circle

@pytest.mark.parametrize("a, b", [(2.0, 1.0), (5.0, 1.0), (1.5, 1.0)])
def test_ellipse_perimeter(a, b):
    curve = build_ellipse(a, b, 256)
    scale = DEFAULT_DIAMETER / (2 * a)
    exact = 4 * a * ellipe(1 - (b / a) ** 2) * scale
    assert curve.perimeter == pytest.approx(exact, rel=1e-12)


def test_ellipse_geometry(ellipse):
    assert ellipse.descriptor.label() == "ellipse-a2-b1"
    assert np.allclose(np.linalg.norm(ellipse.normals, axis=1), 1.0, atol=1e-12)
    # curvature extremes sit at the vertices: a/b² at t = 0 and b/a² at t = π/2, before rescale
    scale = ellipse.descriptor.scale
    assert ellipse.curvatures[0] * scale == pytest.approx(2.0)
    assert ellipse.curvatures[64] * scale == pytest.approx(0.25)
    assert np.all(ellipse.parts == CurvePart.SMOOTH)


def test_circle_geometry(circle):
    radius = DEFAULT_DIAMETER / 2
    assert np.allclose(np.linalg.norm(circle.points, axis=1), radius)
    assert np.allclose(circle.curvatures, 1.0 / radius)
    assert circle.perimeter == pytest.approx(2 * np.pi * radius, rel=1e-13)


@pytest.mark.parametrize("a, b", [(1.0, 2.0), (1.0, 0.0), (1.0, -1.0)])
def test_ellipse_rejects_bad_axes(a, b):
    with pytest.raises(ValueError):
        build_ellipse(a, b, 64)

# }}}


def test_rescale(ellipse):
    scaled = rescale(ellipse, 0.5)
    assert np.allclose(scaled.points, 0.5 * ellipse.points)
    assert np.array_equal(scaled.normals, ellipse.normals)
    assert np.allclose(scaled.curvatures, 2.0 * ellipse.curvatures)
    assert scaled.diameter == pytest.approx(0.5 * ellipse.diameter)
    assert np.allclose(scaled.reference_points, ellipse.reference_points)

    with pytest.raises(ValueError):
        rescale(ellipse, 0.0)


def test_curve_arrays_are_read_only(circle):
    with pytest.raises(ValueError):
        circle.points[0, 0] = 1.0
