"""Closed-form reference spectra and the counting and density checks built on them."""
from __future__ import annotations

from typing import List, Sequence, Tuple, Union
import logging

import numpy as np

from src.operators.spectrum import SpectrumResult

logger = logging.getLogger(__name__)

TRIVIAL_EIGENVALUE = 0.5
TRIVIAL_TOL = 1e-3


def ellipse_ratio(a: float, b: float) -> float:
    """r = (a − b)/(a + b) for semi-axes a > b > 0."""
    if not a > b > 0:
        raise ValueError(f"ellipse oracle needs a > b > 0, got a={a}, b={b}")
    return (a - b) / (a + b)


def ratio_oracle(r: float, n_max: int) -> List[float]:
    """{±½rⁿ : n = 1..n_max}, sorted descending."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    positive = 0.5 * r ** np.arange(1, n_max + 1)
    return sorted(np.concatenate([positive, -positive]).tolist(), reverse=True)


def ellipse_oracle(a: float, b: float, n_max: int) -> List[float]:
    """Nontrivial NP eigenvalues of the ellipse with semi-axes a > b, up to order n_max."""
    return ratio_oracle(ellipse_ratio(a, b), n_max)


def density_witness(x: float, r_list: Sequence[float], epsilon: float) -> Tuple[int, int]:
    """(n, j) with |n·t_j − x| < ε, t_j = −log r_j, and j counted from 1.

    Scans j from the last (finest) ratio down and takes n = round(x/t_j).
    """
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    r = np.asarray(r_list, dtype=float)
    if r.size == 0 or np.any((r <= 0) | (r >= 1)):
        raise ValueError(f"r_list must be non-empty with entries in (0, 1), got {list(r_list)}")

    steps = -np.log(r)
    for j in range(r.size, 0, -1):
        n = int(round(x / steps[j - 1]))
        if abs(n * steps[j - 1] - x) < epsilon:
            return n, j
    raise ValueError(
        f"No witness for x={x} within epsilon={epsilon}: the smallest step "
        f"{steps.min():.3g} is too coarse, extend r_list closer to 1"
    )


def _values(eigenvalues: Union[SpectrumResult, Sequence[float]]) -> np.ndarray:
    if isinstance(eigenvalues, SpectrumResult):
        return eigenvalues.as_array()
    return np.asarray(eigenvalues, dtype=float)


def count_outside(eigenvalues: Union[SpectrumResult, Sequence[float]], threshold: float = 0.25,
                  exclude_trivial: bool = True) -> int:
    """Number of eigenvalues with |λ| > threshold.

    With ``exclude_trivial`` the eigenvalue nearest 1/2 is dropped when it lies within
    ``TRIVIAL_TOL`` of 1/2 (oracle lists carry no trivial eigenvalue).
    """
    if not 0.0 < threshold < 0.5:
        raise ValueError(f"threshold must lie in (0, 1/2), got {threshold}")
    values = _values(eigenvalues)
    if exclude_trivial and values.size:
        nearest = int(np.argmin(np.abs(values - TRIVIAL_EIGENVALUE)))
        if abs(values[nearest] - TRIVIAL_EIGENVALUE) <= TRIVIAL_TOL:
            values = np.delete(values, nearest)
    return int(np.sum(np.abs(values) > threshold))


def ellipse_density_check(r_list: Sequence[float], probe: Sequence[float], epsilon: float,
                          n_max: int = 1000) -> bool:
    """Whether every probe point lies within ε of the union of the ratio oracles for ``r_list``."""
    union = np.concatenate([ratio_oracle(r, n_max) for r in r_list])
    probe = np.asarray(probe, dtype=float)
    worst = float(np.max(np.min(np.abs(probe[:, None] - union[None, :]), axis=1)))
    logger.info(f"Ellipse oracle union over {len(r_list)} ratios: worst probe distance {worst:.4f}")
    return worst < epsilon


def standing_wave_eigenvalues(R: float, k_max: int) -> List[float]:
    """Dispersion-relation predictions ½e^{−4πξ_k}, ξ_k = k/(4R), k = 1..k_max, for the stadium.

    These are the waves that fit on flats of length 2R; their odd partners sit at −λ_k.
    """
    if R <= 0:
        raise ValueError(f"R must be positive, got {R}")
    k = np.arange(1, k_max + 1)
    return (0.5 * np.exp(-np.pi * k / R)).tolist()
