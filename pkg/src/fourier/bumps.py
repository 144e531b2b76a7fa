"""Dispersion relation, the Fourier-side bump ψ̂, its inverse transform ψ and the cut-off χ."""
from functools import lru_cache
import logging

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

logger = logging.getLogger(__name__)

CDF_ORDER = 64
PSI_AUX_INTERVALS = 1024
PSI_BLOCK = 2048


def xi0_of_lambda(lam: float) -> float:
    """Carrier frequency ξ₀ ≥ 0 solving λ = ½·exp(−4π|ξ₀|)."""
    if not 0.0 < lam <= 0.5:
        raise ValueError(f"lambda must lie in (0, 1/2], got {lam}")
    return float(np.log(1.0 / (2.0 * lam)) / (4.0 * np.pi))


def _scalar_or_array(value: np.ndarray, original):
    return float(value.reshape(())) if np.ndim(original) == 0 else value.reshape(np.shape(original))


def _bump(x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    inside = np.abs(x) < 1.0
    gap = np.where(inside, 1.0 - x ** 2, 1.0)
    return np.where(inside, np.exp(-1.0 / gap), 0.0)


@lru_cache(maxsize=None)
def bump_mass() -> float:
    """∫ exp(−1/(1−ξ²)) dξ over (−1, 1)."""
    value, error = quad(lambda s: float(_bump(s)[0]), -1.0, 1.0, epsabs=1e-15, epsrel=1e-14, limit=200)
    logger.debug(f"Bump mass {value:.16f} (quadrature error estimate {error:.1e})")
    return value


def bump_psi_hat(xi):
    """ψ̂(ξ) = c·exp(−1/(1−ξ²)) on (−1, 1), zero elsewhere, with ∫ψ̂ = 1."""
    return _scalar_or_array(_bump(xi) / bump_mass(), xi)


def _lower_tail(upper: np.ndarray) -> np.ndarray:
    nodes, weights = leggauss(CDF_ORDER)
    half = 0.5 * (upper + 1.0)
    abscissae = -1.0 + half[:, None] * (nodes[None, :] + 1.0)
    return half * (_bump(abscissae) @ weights)


def _bump_cdf(s: np.ndarray) -> np.ndarray:
    """Normalized ∫_{−1}^{s} of the bump for s in [−1, 1], by Gauss–Legendre on [−1, −|s|].

    The normalization is twice the computed half integral, so the two branches meet at s = 0.
    """
    total = 2.0 * float(_lower_tail(np.zeros(1))[0])
    lower = _lower_tail(-np.abs(s)) / total
    return np.where(s > 0.0, 1.0 - lower, lower)


def cutoff_chi(x):
    """Smooth even cut-off: 1 on [−1/4, 1/4], 0 outside (−1/2, 1/2), a bump-integral smoothstep between."""
    a = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    out = np.where(a <= 0.25, 1.0, 0.0)
    ramp = (a > 0.25) & (a < 0.5)
    if np.any(ramp):
        out[ramp] = 1.0 - _bump_cdf(8.0 * a[ramp] - 3.0)
    return _scalar_or_array(out, x)


def psi(u):
    """ψ(u) = ∫ψ̂(ξ) e^{2πiξu} dξ, by the trapezoid rule on a fine grid over [−1, 1].

    ψ̂ is even and real, so ψ is even and real.
    """
    flat = np.atleast_1d(np.asarray(u, dtype=float)).ravel()
    xi = np.linspace(-1.0, 1.0, PSI_AUX_INTERVALS + 1)
    weights = bump_psi_hat(xi) * (xi[1] - xi[0])
    out = np.empty_like(flat)
    for start in range(0, flat.shape[0], PSI_BLOCK):
        block = flat[start:start + PSI_BLOCK]
        out[start:start + PSI_BLOCK] = np.cos(2.0 * np.pi * np.outer(block, xi)) @ weights
    return _scalar_or_array(out, u)


def profile(u):
    """The envelope (χψ)(u) shared by every quasimode."""
    flat = np.atleast_1d(np.asarray(u, dtype=float)).ravel()
    out = np.zeros_like(flat)
    support = np.abs(flat) < 0.5
    if np.any(support):
        out[support] = cutoff_chi(flat[support]) * psi(flat[support])
    return _scalar_or_array(out, u)
