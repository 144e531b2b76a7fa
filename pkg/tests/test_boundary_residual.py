import logging

import numpy as np
import pytest
from scipy.linalg import eig

from src.fourier.bumps import psi
from src.fourier.quasimode import build_quasimode
from src.geometry.curves import CurvePart, build_ellipse, build_stadium
from src.operators.assembly import assemble_np
from src.pipeline.boundary_residual import (BoundaryDensity, boundary_residual_ratio, default_boundary_nodes,
                                            flats_poisson_deviation, gagliardo_half_norm, lift_to_boundary,
                                            operator_residual_ratio)

logger = logging.getLogger(__name__)


@pytest.fixture(scope="module")
def stadium_r4():
    return build_stadium(4.0, default_boundary_nodes(4.0))


def test_default_boundary_nodes():
    assert default_boundary_nodes(4.0) == 320
    assert default_boundary_nodes(2.0) == 192
    assert default_boundary_nodes(8.0) % 2 == 0


# {{{ lifting

def test_lift_vanishes_on_the_caps(stadium_r4):
    density = lift_to_boundary(build_quasimode(0.3, 4.0), stadium_r4)
    caps = np.isin(stadium_r4.parts, [CurvePart.LEFT_CAP, CurvePart.RIGHT_CAP])
    assert density.values.shape == (stadium_r4.n_nodes,)
    assert np.all(density.values[caps] == 0)
    assert np.any(density.values[~caps] != 0)


def test_lift_at_the_flat_midpoint(stadium_r4):
    density = lift_to_boundary(build_quasimode(0.3, 4.0), stadium_r4)
    x1 = stadium_r4.reference_points[:, 0]
    top = np.flatnonzero(stadium_r4.parts == CurvePart.TOP)
    middle = top[np.argmin(np.abs(x1[top]))]
    assert abs(density.values[middle]) == pytest.approx(psi(0.0), abs=1e-12)
    assert density.values[0] == pytest.approx(psi(0.0), abs=1e-12)


def test_lift_agrees_on_both_flats(stadium_r4):
    density = lift_to_boundary(build_quasimode(0.25, 4.0), stadium_r4)
    x1 = stadium_r4.reference_points[:, 0]
    top = np.flatnonzero(stadium_r4.parts == CurvePart.TOP)
    bottom = np.flatnonzero(stadium_r4.parts == CurvePart.BOTTOM)
    for i in bottom:
        j = top[np.argmin(np.abs(x1[top] - x1[i]))]
        assert abs(x1[j] - x1[i]) < 1e-9
        assert density.values[j] == pytest.approx(density.values[i], abs=1e-10)


def test_lift_rejects_mismatched_curves(stadium_r4):
    with pytest.raises(ValueError):
        lift_to_boundary(build_quasimode(0.3, 8.0), stadium_r4)
    with pytest.raises(ValueError):
        lift_to_boundary(build_quasimode(0.3, 4.0), build_ellipse(2.0, 1.0, 64))

# }}}


# {{{ discrete H^{1/2} norm

def test_gagliardo_norm_of_constants(stadium_r4):
    zero = BoundaryDensity(values=np.zeros(stadium_r4.n_nodes), curve_descriptor=stadium_r4.descriptor)
    assert gagliardo_half_norm(zero, stadium_r4) == 0.0
    ones = BoundaryDensity(values=np.ones(stadium_r4.n_nodes), curve_descriptor=stadium_r4.descriptor)
    assert gagliardo_half_norm(ones, stadium_r4) == pytest.approx(np.sqrt(stadium_r4.perimeter), rel=1e-12)


def test_gagliardo_norm_is_homogeneous(stadium_r4):
    density = lift_to_boundary(build_quasimode(0.3, 4.0), stadium_r4)
    norm = gagliardo_half_norm(density, stadium_r4)
    assert gagliardo_half_norm(density.scaled(2 - 3j), stadium_r4) == pytest.approx(abs(2 - 3j) * norm, rel=1e-12)


def test_gagliardo_norm_checks_sizes(stadium_r4):
    density = BoundaryDensity(values=np.ones(10), curve_descriptor=stadium_r4.descriptor)
    with pytest.raises(ValueError):
        gagliardo_half_norm(density, stadium_r4)

# }}}


# {{{ residual ratios

def test_residual_ratio_is_scale_invariant(stadium_r4):
    density = lift_to_boundary(build_quasimode(0.3, 4.0), stadium_r4)
    K = assemble_np(stadium_r4)
    ratio = operator_residual_ratio(0.3, density, stadium_r4, K)
    assert operator_residual_ratio(0.3, density.scaled(-4j), stadium_r4, K) == pytest.approx(ratio, rel=1e-12)


def test_residual_ratio_rejects_zero_density(stadium_r4):
    zero = BoundaryDensity(values=np.zeros(stadium_r4.n_nodes), curve_descriptor=stadium_r4.descriptor)
    with pytest.raises(ValueError):
        operator_residual_ratio(0.3, zero, stadium_r4)


def test_eigenvector_has_vanishing_residual(small_stadium):
    K = assemble_np(small_stadium)
    values, vectors = eig(K.entries)
    second = np.argsort(-values.real)[1]
    density = BoundaryDensity(values=vectors[:, second], curve_descriptor=small_stadium.descriptor)
    ratio = operator_residual_ratio(values[second], density, small_stadium, K)
    assert ratio < 1e-8


def test_boundary_residual_rejects_short_stadium():
    with pytest.raises(ValueError):
        boundary_residual_ratio(0.3, 1.5)


@pytest.mark.slow
@pytest.mark.parametrize("lam", [0.3, 0.5])
def test_boundary_residual_decreases(lam):
    ratios = [boundary_residual_ratio(lam, R) for R in (4.0, 8.0, 16.0)]
    logger.info(f"lambda={lam}: boundary residual ratios {ratios}")
    assert ratios[1] < ratios[0]
    assert ratios[2] < ratios[1]


def test_flats_reduce_to_the_poisson_convolution():
    coarse = flats_poisson_deviation(0.3, 8.0, 576)
    fine = flats_poisson_deviation(0.3, 8.0, 1152)
    logger.info(f"flats deviation: {coarse:.2e} at 576 nodes, {fine:.2e} at 1152")
    assert coarse < 1e-3
    assert fine < coarse

# }}}
