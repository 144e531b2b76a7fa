"""Aspect-ratio sweeps over stadium domains and how their spectra fill [−1/2, 1/2]."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Union
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from tqdm import tqdm

from src.config import settings
from src.geometry.curves import MIN_NODES, build_stadium
from src.operators.spectrum import Method, SpectrumResult, curve_spectrum
from src.pipeline.oracles import count_outside

logger = logging.getLogger(__name__)

PROBE_LIMIT = 0.49


class NodePolicy(BaseModel):
    """n(R) = nodes_per_unit·(R + 1), rounded to an even count and clipped to [32, max_nodes]."""
    model_config = ConfigDict(frozen=True)

    nodes_per_unit: int = Field(default_factory=lambda: settings.nodes_per_unit, ge=1)
    max_nodes: int = Field(default_factory=lambda: settings.max_nodes, ge=MIN_NODES)

    def nodes_for(self, R: float) -> int:
        n = 2 * int(round(self.nodes_per_unit * (R + 1) / 2))
        return int(min(max(n, MIN_NODES), self.max_nodes - self.max_nodes % 2))


class ProbeGrid(BaseModel):
    """Equispaced probe points start, start + step, ..., stop inside [−0.49, 0.49]."""
    model_config = ConfigDict(frozen=True)

    start: float = -0.45
    stop: float = 0.45
    step: float = Field(default=0.01, gt=0)

    @model_validator(mode="after")
    def _check_range(self) -> "ProbeGrid":
        if self.start > self.stop:
            raise ValueError(f"probe grid start {self.start} exceeds stop {self.stop}")
        if self.start < -PROBE_LIMIT - 1e-12 or self.stop > PROBE_LIMIT + 1e-12:
            raise ValueError(f"probe grid must lie within [−{PROBE_LIMIT}, {PROBE_LIMIT}], "
                             f"got [{self.start}, {self.stop}]")
        return self

    @classmethod
    def parse(cls, text: str) -> "ProbeGrid":
        """Read ``start:stop:step``."""
        try:
            start, stop, step = (float(part) for part in text.split(":"))
        except ValueError as e:
            raise ValueError(f"grid must be start:stop:step, got {text!r}") from e
        return cls(start=start, stop=stop, step=step)

    def points(self) -> np.ndarray:
        count = int(round((self.stop - self.start) / self.step)) + 1
        return self.start + self.step * np.arange(count)

    def spec(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


class SweepReport(BaseModel):
    """Spectra for an increasing list of R with their fill distances and outside counts."""
    model_config = ConfigDict(frozen=True)

    R_list: List[float]
    spectra: List[SpectrumResult]
    fill_distances: List[float]
    outside_counts: List[int]
    lambda_grid: ProbeGrid
    threshold: float = 0.25

    @field_validator("R_list")
    @classmethod
    def _increasing(cls, R_list: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(R_list, R_list[1:])):
            raise ValueError(f"R_list must be strictly increasing, got {R_list}")
        return R_list

    @model_validator(mode="after")
    def _consistent(self) -> "SweepReport":
        sizes = {len(self.R_list), len(self.spectra), len(self.fill_distances), len(self.outside_counts)}
        if len(sizes) != 1:
            raise ValueError("R_list, spectra, fill_distances and outside_counts differ in length")
        if any(b > a for a, b in zip(self.fill_distances, self.fill_distances[1:])):
            raise ValueError(f"fill_distances must be nonincreasing, got {self.fill_distances}")
        if any(count < 0 for count in self.outside_counts):
            raise ValueError("outside_counts must be non-negative")
        return self


def _distances(probe: np.ndarray, eigenvalues: np.ndarray) -> np.ndarray:
    """Distance of every probe point to the nearest eigenvalue."""
    ordered = np.sort(eigenvalues)
    idx = np.clip(np.searchsorted(ordered, probe), 1, ordered.size - 1)
    return np.minimum(np.abs(probe - ordered[idx - 1]), np.abs(probe - ordered[idx]))


def fill_distances(probe: Sequence[float], spectra: Sequence[Union[SpectrumResult, Sequence[float]]]) -> List[float]:
    """sup over the probe of the distance to ∪_{i≤j} σᵢ, for every prefix j."""
    probe = np.asarray(probe, dtype=float)
    nearest = np.full(probe.shape, np.inf)
    out = []
    for spec in spectra:
        values = spec.as_array() if isinstance(spec, SpectrumResult) else np.asarray(spec, dtype=float)
        if values.size < 2:
            values = np.repeat(values, 2)
        nearest = np.minimum(nearest, _distances(probe, values))
        out.append(float(nearest.max()))
    return out


def fill_distance(probe: Sequence[float], spectra: Sequence[Union[SpectrumResult, Sequence[float]]]) -> float:
    """sup over the probe of the distance to the union of all spectra."""
    return fill_distances(probe, spectra)[-1]


def run_sweep(R_list: Sequence[float], n_policy: Optional[NodePolicy] = None,
              lambda_grid: Optional[ProbeGrid] = None, threshold: float = 0.25,
              method: Method = "symmetrized", threads: Optional[int] = None,
              progress: bool = True) -> SweepReport:
    """Compute the stadium spectrum for every R and summarize how the union fills the probe grid.

    The per-R eigen-solves run in a thread pool capped by ``NPSPECTRA_THREADS``;
    results are collected in R order, so the report does not depend on scheduling.
    """
    R_list = [float(R) for R in R_list]
    if not R_list:
        raise ValueError("R_list must not be empty")
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise ValueError(f"R_list must be strictly increasing, got {R_list}")
    n_policy = n_policy or NodePolicy()
    lambda_grid = lambda_grid or ProbeGrid()
    workers = max(1, min(threads or settings.threads, len(R_list)))
    logger.info(f"Sweeping R={R_list} with {workers} worker(s), probe grid {lambda_grid.spec()}")

    def solve(R: float) -> SpectrumResult:
        n = n_policy.nodes_for(R)
        logger.debug(f"Solving stadium R={R} with {n} nodes")
        return curve_spectrum(build_stadium(R, n), method=method)

    # Step 1: Spectra, one per R
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            spectra = list(tqdm(pool.map(solve, R_list), total=len(R_list), desc="Spectra",
                                unit="R", disable=not progress))
    except Exception as e:
        logger.error(f"Sweep over R={R_list} failed: {e}")
        raise

    # Step 2: Fill distances over growing unions
    fills = fill_distances(lambda_grid.points(), spectra)

    # Step 3: Eigenvalues outside [−threshold, threshold]
    counts = [count_outside(spec, threshold) for spec in spectra]

    for R, fill, count in zip(R_list, fills, counts):
        logger.info(f"R={R:g}: fill distance {fill:.4f}, {count} eigenvalues with |λ| > {threshold}")
    return SweepReport(R_list=R_list, spectra=spectra, fill_distances=fills,
                       outside_counts=counts, lambda_grid=lambda_grid, threshold=threshold)
