"""Real spectra of the NP operator through the Plemelj-symmetrized generalized eigenproblem."""
from __future__ import annotations

from typing import List, Literal, Optional, Sequence
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.linalg import LinAlgError, cholesky, eigvals, eigvalsh, solve_triangular

from src.config import settings
from src.errors import SpectrumError
from src.geometry.curves import BoundaryCurve, CurveDescriptor
from src.operators.assembly import OperatorMatrix, assemble_np, assemble_single_layer

logger = logging.getLogger(__name__)

Method = Literal["symmetrized", "plain"]


class SpectrumResult(BaseModel):
    """Eigenvalues of a discretized NP operator, sorted descending."""
    model_config = ConfigDict(frozen=True)

    eigenvalues: List[float]
    n_nodes: int
    curve_descriptor: CurveDescriptor
    method: Method
    # Relative Frobenius asymmetry of W·K·S before averaging (0 for the plain path)
    asymmetry: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.eigenvalues)


def spectrum(K: OperatorMatrix, S: Optional[OperatorMatrix] = None, method: Method = "symmetrized") -> SpectrumResult:
    """Solve (K·S) v = λ S v with S positive definite, or eigendecompose K directly when ``method='plain'``.

    In the symmetrized path both sides are taken as bilinear forms W·K·S and W·S, the
    first is averaged with its transpose, and the pencil is reduced to a standard
    symmetric problem through the Cholesky factor of W·S.
    """
    if K.kind != "np_kernel":
        raise ValueError(f"K must be an np_kernel operator, got {K.kind}")

    if method == "plain":
        values = eigvals(K.entries)
        imag = float(np.max(np.abs(values.imag)))
        if imag > 1e-8:
            logger.warning(f"Plain eigen-solve returned imaginary parts up to {imag:.2e}")
        eigenvalues = np.sort(values.real)[::-1]
        return SpectrumResult(eigenvalues=eigenvalues.tolist(), n_nodes=K.n_nodes,
                              curve_descriptor=K.curve_descriptor, method="plain")

    if method != "symmetrized":
        raise ValueError(f"Unknown spectrum method: {method}")
    if S is None:
        raise ValueError("The symmetrized eigen-solve needs the single layer operator S")
    if S.kind != "single_layer":
        raise ValueError(f"S must be a single_layer operator, got {S.kind}")
    if S.n_nodes != K.n_nodes:
        raise ValueError(f"Dimension mismatch: K has {K.n_nodes} nodes, S has {S.n_nodes}")

    A = K.weights[:, None] * (K.entries @ S.entries)
    asymmetry = float(np.linalg.norm(A - A.T) / np.linalg.norm(A))
    if asymmetry > settings.asymmetry_warning:
        logger.warning(f"W·K·S asymmetry {asymmetry:.2e} for {K.curve_descriptor.label()}")
    A = 0.5 * (A + A.T)
    B = S.symmetrized()
    B = 0.5 * (B + B.T)

    try:
        L = cholesky(B, lower=True)
    except LinAlgError as e:
        logger.error(f"Cholesky factorization failed for {S.curve_descriptor.label()}: {e}")
        raise SpectrumError(
            f"Single layer of {S.curve_descriptor.label()} is not positive definite; "
            "the curve must be rescaled to diameter < 1"
        ) from e

    X = solve_triangular(L, A, lower=True)
    C = solve_triangular(L, X.T, lower=True)
    eigenvalues = eigvalsh(0.5 * (C + C.T))[::-1]
    return SpectrumResult(eigenvalues=eigenvalues.tolist(), n_nodes=K.n_nodes,
                          curve_descriptor=K.curve_descriptor, method="symmetrized",
                          asymmetry=asymmetry)


def curve_spectrum(curve: BoundaryCurve, method: Method = "symmetrized") -> SpectrumResult:
    """Assemble the operators of ``curve`` and return their spectrum."""
    K = assemble_np(curve)
    S = assemble_single_layer(curve) if method == "symmetrized" else None
    result = spectrum(K, S, method=method)
    logger.info(f"Spectrum of {curve.descriptor.label()} with {curve.n_nodes} nodes: "
                f"top {result.eigenvalues[0]:.6f}, bottom {result.eigenvalues[-1]:.6f}")
    return result


def _values(eigenvalues) -> np.ndarray:
    if isinstance(eigenvalues, SpectrumResult):
        return eigenvalues.as_array()
    return np.sort(np.asarray(eigenvalues, dtype=float))[::-1]


def containment_defect(eigenvalues: SpectrumResult | Sequence[float]) -> float:
    """How far the spectrum pokes out of [−1/2, 1/2] (0 when contained)."""
    values = _values(eigenvalues)
    return float(max(values.max() - 0.5, -0.5 - values.min(), 0.0))


def pairing_defect(eigenvalues: SpectrumResult | Sequence[float], n_pairs: Optional[int] = None) -> float:
    """max_k |λ_k + λ_{−1−k}| over the sorted spectrum with the eigenvalue nearest 1/2 removed.

    ``n_pairs`` limits the check to the largest-magnitude pairs.
    """
    values = _values(eigenvalues)
    values = np.delete(values, np.argmin(np.abs(values - 0.5)))
    half = values.shape[0] // 2
    if n_pairs is not None:
        half = min(half, n_pairs)
    if half == 0:
        return 0.0
    return float(np.max(np.abs(values[:half] + values[::-1][:half])))
