"""Run records, their printed summaries and the files written for them."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import logging

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from src.cli.run_config import RunConfig
from src.operators.spectrum import SpectrumResult
from src.pipeline.sweep import SweepReport
from src.utils.exporters import ResultExporter

logger = logging.getLogger(__name__)

SUMMARY_TOP = 6


class CheckOutcome(BaseModel):
    """One invariant check: ``value`` compared against ``tolerance``."""

    name: str
    value: float
    tolerance: float
    passed: bool
    # Soft checks are reported but never change the exit status
    hard: bool = True

    @classmethod
    def at_most(cls, name: str, value: float, tolerance: float, hard: bool = True) -> "CheckOutcome":
        return cls(name=name, value=float(value), tolerance=float(tolerance),
                   passed=bool(value <= tolerance), hard=hard)


class RunRecord(BaseModel):
    """Everything the JSON output holds; the summary is rebuilt from it alone."""

    command: str
    label: str
    digest: str
    config: Dict[str, str]
    spectrum: Optional[SpectrumResult] = None
    sweep: Optional[SweepReport] = None
    rows: List[Dict[str, Union[int, float]]] = Field(default_factory=list)
    values: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckOutcome] = Field(default_factory=list)

    def failed_checks(self) -> List[CheckOutcome]:
        return [check for check in self.checks if check.hard and not check.passed]


@dataclass
class RunResult:
    """A record plus the artifacts that only live on disk."""

    record: RunRecord
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    matrices: Dict[str, np.ndarray] = field(default_factory=dict)
    svg: Optional[str] = None


def _fmt_values(values: List[float]) -> str:
    return ", ".join(f"{v:+.8f}" for v in values)


def _fmt_row(row: Dict[str, Union[int, float]]) -> str:
    return "  " + "  ".join(f"{key}={value:.6g}" for key, value in row.items())


def summarize(record: RunRecord) -> List[str]:
    """Human-readable summary; identical for a fresh run and for ``report`` on its JSON."""
    lines = [f"{record.command} {record.label} [{record.digest}]"]

    if record.spectrum is not None:
        values = record.spectrum.eigenvalues
        lines.append(f"  {record.spectrum.n_nodes} nodes, method {record.spectrum.method}, "
                     f"asymmetry {record.spectrum.asymmetry:.2e}")
        lines.append(f"  largest: {_fmt_values(values[:SUMMARY_TOP])}")
        lines.append(f"  smallest: {_fmt_values(values[-SUMMARY_TOP:])}")

    if record.sweep is not None:
        sweep = record.sweep
        lines.append(f"  probe grid {sweep.lambda_grid.spec()}, threshold {sweep.threshold:g}")
        for R, spec, fill, count in zip(sweep.R_list, sweep.spectra, sweep.fill_distances,
                                        sweep.outside_counts):
            lines.append(f"  R={R:g}: n={spec.n_nodes}, fill distance {fill:.4f}, outside {count}")

    for row in record.rows:
        lines.append(_fmt_row(row))

    for key in sorted(record.values):
        value = record.values[key]
        if isinstance(value, float):
            lines.append(f"  {key}: {value:.6g}")
        elif isinstance(value, dict):
            lines.append(f"  {key}: " + ", ".join(f"{k}={v:.6g}" for k, v in sorted(value.items())))
        else:
            lines.append(f"  {key}: {value}")

    for check in record.checks:
        status = "ok" if check.passed else ("FAILED" if check.hard else "not met")
        lines.append(f"  check {check.name}: {check.value:.3e} (tolerance {check.tolerance:.1e}) {status}")
    return lines


def file_stem(config: RunConfig, label: str, tag: str = "") -> str:
    """``<command>_<label>[_<tag>]_<hash>``, e.g. ``sweep_stadium_1a2b3c4d5e6f``."""
    parts = [config.command.replace("-", "_"), label] + ([tag] if tag else []) + [config.digest()]
    return "_".join(parts)


def emit_outputs(result: RunResult, config: RunConfig) -> List[Path]:
    """Write the config echo and the requested CSV, JSON and SVG files; returns their paths."""
    record = result.record
    out_dir = Path(config.output_dir)
    stem = file_stem(config, record.label)
    written = [ResultExporter.write_text(config.echo(), out_dir / f"{stem}.config")]

    if "json" in config.formats:
        written.append(ResultExporter.write_json(record, out_dir / f"{stem}.json"))

    if "csv" in config.formats:
        for tag, frame in sorted(result.tables.items()):
            written.append(ResultExporter.write_csv(frame, out_dir / f"{file_stem(config, record.label, tag)}.csv"))

    if "svg" in config.formats:
        if result.svg is None:
            logger.warning(f"No plot is produced by the {config.command} command; skipping svg")
        else:
            written.append(ResultExporter.write_text(result.svg, out_dir / f"{stem}.svg"))

    for name, matrix in sorted(result.matrices.items()):
        written.append(ResultExporter.write_matrix_binary(matrix, out_dir / f"{stem}_{name}.bin"))

    logger.info(f"Wrote {len(written)} file(s) to {out_dir}")
    return written
