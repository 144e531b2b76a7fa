import logging

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import wofz

from src.fourier.bumps import bump_mass, bump_psi_hat, cutoff_chi, profile, psi, xi0_of_lambda
from src.fourier.grid import LineGrid
from src.fourier.quasimode import (build_quasimode, periodization_bound, poisson_at, poisson_convolve,
                                   poisson_kernel, residual_ratio, sobolev_half_norm)

logger = logging.getLogger(__name__)


# {{{ dispersion relation and bumps

def test_xi0_examples():
    assert xi0_of_lambda(0.5) == 0.0
    assert xi0_of_lambda(0.25) == pytest.approx(np.log(2) / (4 * np.pi), abs=1e-12)


def test_xi0_inverts_the_dispersion_relation():
    rng = np.random.default_rng(7)
    for lam in rng.uniform(1e-6, 0.5, size=100):
        assert 0.5 * np.exp(-4 * np.pi * xi0_of_lambda(lam)) == pytest.approx(lam, rel=1e-12)


@pytest.mark.parametrize("lam", [0.0, -0.1, 0.6])
def test_xi0_rejects_out_of_range(lam):
    with pytest.raises(ValueError):
        xi0_of_lambda(lam)


def test_psi_hat():
    assert bump_psi_hat(0.0) == pytest.approx(np.exp(-1) / bump_mass(), rel=1e-14)
    assert bump_psi_hat(1.0) == 0.0
    assert bump_psi_hat(-1.5) == 0.0
    values = bump_psi_hat(np.linspace(-1.2, 1.2, 241))
    assert values.shape == (241,)
    assert np.all(values >= 0)

    total, _ = quad(bump_psi_hat, -1, 1, epsabs=1e-14, epsrel=1e-13, limit=200)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_cutoff_chi():
    assert cutoff_chi(0.0) == 1.0
    assert cutoff_chi(0.2) == 1.0
    assert cutoff_chi(0.25) == 1.0
    assert cutoff_chi(0.5) == 0.0
    assert cutoff_chi(-0.6) == 0.0
    assert cutoff_chi(0.375) == pytest.approx(0.5, abs=1e-14)

    ramp = np.linspace(0.25, 0.5, 201)
    values = cutoff_chi(ramp)
    assert np.all(np.diff(values) <= 1e-15)
    assert np.all((values >= 0) & (values <= 1))
    assert np.allclose(cutoff_chi(-ramp), values, atol=0)


def test_psi_is_even_with_unit_value_at_zero():
    assert psi(0.0) == pytest.approx(1.0, abs=1e-10)
    u = np.linspace(0, 2, 41)
    assert np.allclose(psi(u), psi(-u), atol=1e-15)


def test_profile_support():
    assert profile(0.0) == pytest.approx(psi(0.0), abs=1e-15)
    assert np.all(profile(np.array([0.5, -0.5, 0.7, 3.0])) == 0.0)

# }}}


# {{{ line grid

def test_line_grid_layout():
    grid = LineGrid.for_radius(16)
    assert grid.half_width == 32
    assert grid.n_samples == 1024
    assert grid.x[0] == -32
    assert grid.x[grid.n_samples // 2] == 0.0
    assert grid.dxi == pytest.approx(1 / 64)
    assert grid.frequencies[grid.n_samples // 2] == 0.0
    assert LineGrid.for_radius(3).n_samples == 256


@pytest.mark.parametrize("half_width, n", [(0.0, 64), (-1.0, 64), (4.0, 1000), (4.0, 1)])
def test_line_grid_rejects_bad_input(half_width, n):
    with pytest.raises(ValueError):
        LineGrid(half_width, n)


def test_forward_transform_of_gaussian():
    # e^{−πx²} is its own transform under ∫ f e^{−2πiξx} dx
    grid = LineGrid(8.0, 256)
    values = np.exp(-np.pi * grid.x ** 2)
    transform = grid.forward(values)
    assert np.max(np.abs(transform - np.exp(-np.pi * grid.frequencies ** 2))) < 1e-10
    assert np.max(np.abs(grid.inverse(transform) - values)) < 1e-12


def test_transform_of_shifted_gaussian_has_the_expected_phase():
    grid = LineGrid(8.0, 256)
    transform = grid.forward(np.exp(-np.pi * (grid.x - 1.0) ** 2))
    expected = np.exp(-np.pi * grid.frequencies ** 2) * np.exp(-2j * np.pi * grid.frequencies)
    assert np.max(np.abs(transform - expected)) < 1e-10


def test_parseval():
    qm = build_quasimode(0.25, 8.0)
    grid = qm.grid
    lhs = grid.l2_norm(qm.samples) ** 2
    rhs = grid.dxi * np.sum(np.abs(qm.spectrum_samples) ** 2)
    assert lhs == pytest.approx(rhs, rel=1e-10)

# }}}


# {{{ quasimode

def test_quasimode_is_real_for_lambda_one_half():
    qm = build_quasimode(0.5, 8.0)
    assert qm.xi0 == 0.0
    assert np.max(np.abs(qm.samples.imag)) == 0.0


@pytest.mark.parametrize("lam, R", [(0.5, 8.0), (0.25, 8.0), (0.1, 16.0)])
def test_quasimode_modulus_is_the_envelope(lam, R):
    qm = build_quasimode(lam, R)
    x = qm.grid.x
    centre = qm.grid.n_samples // 2
    assert abs(qm.samples[centre]) == pytest.approx(psi(0.0), abs=1e-14)
    assert np.allclose(np.abs(qm.samples), np.abs(profile(x / R)), atol=1e-14)
    assert np.all(qm.samples[np.abs(x) >= R / 2] == 0)
    assert np.allclose(qm.evaluate(x), qm.samples, atol=1e-14)


def test_quasimode_spectrum_peaks_at_the_carrier():
    qm = build_quasimode(0.25, 16.0)
    freqs = qm.grid.frequencies
    assert qm.grid.dxi == pytest.approx(1 / 64)
    peak = freqs[np.argmax(np.abs(qm.spectrum_samples))]
    assert peak == pytest.approx(4 / 64)
    assert peak == freqs[np.argmin(np.abs(freqs - qm.xi0))]


def test_quasimode_needs_a_margin():
    with pytest.raises(ValueError):
        build_quasimode(0.25, 8.0, LineGrid(4.0, 256))
    with pytest.raises(ValueError):
        build_quasimode(0.7, 8.0)


def test_quasimode_spectrum_decays_fast():
    # (1 + η)⁴·|(χψ)^(η)| must already be falling off over η ∈ [256, 512]
    R = 2.0
    qm = build_quasimode(0.5, R, LineGrid(4.0, 8192))
    eta = R * np.abs(qm.grid.frequencies)
    weighted = (1 + eta) ** 4 * np.abs(qm.spectrum_samples) / R
    low = weighted[eta < 256].max()
    high = weighted[(eta >= 256) & (eta <= 512)].max()
    logger.info(f"weighted transform: max {low:.3e} below 256, {high:.3e} on [256, 512]")
    assert high <= 0.5 * low

# }}}


# {{{ Poisson kernel

def test_poisson_kernel():
    assert poisson_kernel(0.0, 2.0) == pytest.approx(1 / (2 * np.pi))
    total, _ = quad(lambda x: poisson_kernel(x, 0.5), -np.inf, np.inf)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_poisson_convolve_rejects_bad_input():
    grid = LineGrid(8.0, 256)
    with pytest.raises(ValueError):
        poisson_convolve(np.zeros(256), grid, 0.0)
    with pytest.raises(ValueError):
        poisson_convolve(np.zeros(256), grid, 1.0, method="spline")


def test_poisson_near_identity_for_small_t():
    grid = LineGrid(8.0, 256)
    values = np.exp(-grid.x ** 2)
    assert np.max(np.abs(poisson_convolve(values, grid, 1e-6) - values)) < 1e-4


def test_poisson_semigroup():
    grid = LineGrid(256.0, 2 ** 14)
    out = poisson_convolve(poisson_kernel(grid.x, 1.0), grid, 1.0)
    window = np.abs(grid.x) <= 8
    error = np.max(np.abs(out[window] - poisson_kernel(grid.x[window], 2.0)))
    logger.info(f"P_1 * P_1 against P_2: {error:.2e}")
    assert error < 1e-4


def test_poisson_keeps_plateaus():
    grid = LineGrid(256.0, 2 ** 14)
    values = cutoff_chi(grid.x / 400.0)
    out = poisson_convolve(values, grid, 0.5)
    assert out[grid.n_samples // 2] == pytest.approx(1.0, abs=1e-2)


def test_poisson_preserves_real_even_input():
    grid = LineGrid(16.0, 512)
    values = np.exp(-grid.x ** 2)
    for method in ("multiplier", "direct"):
        out = poisson_convolve(values, grid, 1.0, method=method)
        assert np.isrealobj(out)
        # x_k and x_{n−k} mirror each other
        assert np.max(np.abs(out[1:] - out[1:][::-1])) < 1e-12
        complex_out = poisson_convolve(values + 0j, grid, 1.0, method=method)
        assert np.max(np.abs(complex_out.imag)) < 1e-12


def test_direct_convolution_against_closed_form():
    # P_t ∗ e^{−x²} = Re w(x + it), with w the Faddeeva function
    grid = LineGrid(16.0, 512)
    values = np.exp(-grid.x ** 2)
    window = np.abs(grid.x) <= 4
    exact = wofz(grid.x[window] + 1j).real

    direct = poisson_convolve(values, grid, 1.0, method="direct")
    assert np.max(np.abs(direct[window] - exact)) < 1e-8

    multiplier = poisson_convolve(values, grid, 1.0)
    assert np.max(np.abs(multiplier[window] - exact)) <= periodization_bound(values, grid, 1.0)


def test_multiplier_and_direct_within_periodization_bound():
    qm = build_quasimode(0.25, 8.0)
    grid = qm.grid
    multiplier = poisson_convolve(qm.samples, grid, 2.0)
    direct = poisson_convolve(qm.samples, grid, 2.0, method="direct")
    window = np.abs(grid.x) <= qm.R / 2
    gap = np.max(np.abs(multiplier[window] - direct[window]))
    bound = periodization_bound(qm.samples, grid, 2.0)
    logger.info(f"multiplier vs direct: {gap:.2e}, bound {bound:.2e}")
    assert gap <= bound


def test_poisson_at_matches_direct_convolution():
    qm = build_quasimode(0.25, 8.0)
    grid = qm.grid
    window = np.abs(grid.x) <= qm.R / 2
    direct = poisson_convolve(qm.samples, grid, 2.0, method="direct")
    pointwise = poisson_at(qm, grid.x[window], 2.0)
    assert np.max(np.abs(pointwise - direct[window])) < 1e-4

# }}}


# {{{ norms and residuals

def test_sobolev_half_norm_invariances():
    qm = build_quasimode(0.25, 8.0)
    grid = qm.grid
    norm = sobolev_half_norm(qm.samples, grid)
    assert sobolev_half_norm(np.zeros(grid.n_samples), grid) == 0.0
    assert sobolev_half_norm(np.roll(qm.samples, 37), grid) == pytest.approx(norm, rel=1e-12)
    assert sobolev_half_norm((2 - 3j) * qm.samples, grid) == pytest.approx(abs(2 - 3j) * norm, rel=1e-12)
    assert norm > grid.l2_norm(qm.samples)


def test_norm_grows_like_sqrt_R():
    ratios = []
    for R in (8.0, 16.0, 32.0, 64.0, 128.0):
        qm = build_quasimode(0.25, R)
        ratios.append(sobolev_half_norm(qm.samples, qm.grid) / np.sqrt(R))
    logger.info(f"‖f_R‖/√R: {ratios}")
    assert max(ratios) / min(ratios) <= 2.0


@pytest.mark.parametrize("lam", [0.1, 0.25, 0.5])
def test_residual_ratio_halves_with_R(lam):
    R_values = [8.0, 16.0, 32.0, 64.0]
    ratios = [residual_ratio(lam, R) for R in R_values]
    logger.info(f"lambda={lam}: residual ratios {ratios}")
    for before, after in zip(ratios, ratios[1:]):
        assert after <= 0.75 * before


def test_residual_ratio_slope():
    R_values = [8.0, 16.0, 32.0, 64.0, 128.0]
    ratios = [residual_ratio(0.25, R) for R in R_values]
    slope = np.polyfit(np.log(R_values), np.log(ratios), 1)[0]
    logger.info(f"log-log slope {slope:.3f}")
    assert slope <= -0.7


def test_residual_ratio_needs_R_at_least_four():
    with pytest.raises(ValueError):
        residual_ratio(0.25, 2.0)

# }}}
