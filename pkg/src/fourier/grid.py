"""Uniform periodic sampling of the real line and its discrete Fourier transform."""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

SAMPLES_PER_RADIUS = 64


@dataclass(frozen=True)
class LineGrid:
    """Samples x_k = −L + k·2L/n, k = 0..n−1, of the window [−L, L).

    The forward transform approximates f̂(ξ) = ∫ f(x) e^{−2πiξx} dx at the
    frequencies ξ_m = m/(2L), m = −n/2..n/2−1, returned in ascending order.
    """

    half_width: float
    n_samples: int

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        n = self.n_samples
        if int(n) != n or n < 2 or (int(n) & (int(n) - 1)):
            raise ValueError(f"n_samples must be a power of two, got {n}")

    @classmethod
    def for_radius(cls, R: float) -> "LineGrid":
        """Default grid for a quasimode of radius R: L = 2R, n = 2^⌈log₂(64R)⌉."""
        if R <= 0:
            raise ValueError(f"R must be positive, got {R}")
        return cls(half_width=2.0 * R, n_samples=2 ** math.ceil(math.log2(SAMPLES_PER_RADIUS * R)))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n_samples

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.n_samples)

    @property
    def dxi(self) -> float:
        """Frequency step 1/(2L)."""
        return 1.0 / (2.0 * self.half_width)

    @property
    def _modes(self) -> np.ndarray:
        return np.arange(-(self.n_samples // 2), self.n_samples // 2)

    @property
    def frequencies(self) -> np.ndarray:
        return self._modes * self.dxi

    def forward(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values)
        if values.shape != (self.n_samples,):
            raise ValueError(f"expected {self.n_samples} samples, got shape {values.shape}")
        # The window starts at −L, which contributes the phase e^{iπm} = (−1)^m
        signs = np.where(self._modes % 2, -1.0, 1.0)
        return self.spacing * signs * np.fft.fftshift(np.fft.fft(values))

    def inverse(self, spectrum: np.ndarray) -> np.ndarray:
        spectrum = np.asarray(spectrum)
        if spectrum.shape != (self.n_samples,):
            raise ValueError(f"expected {self.n_samples} frequencies, got shape {spectrum.shape}")
        signs = np.where(self._modes % 2, -1.0, 1.0)
        return np.fft.ifft(np.fft.ifftshift(signs * spectrum)) / self.spacing

    def l2_norm(self, values: np.ndarray) -> float:
        return float(np.sqrt(self.spacing * np.sum(np.abs(values) ** 2)))
