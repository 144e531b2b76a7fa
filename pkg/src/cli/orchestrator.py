"""Runs one configured command against the computational modules."""
from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, List
import logging

import numpy as np

from src.cli.outputs import CheckOutcome, RunRecord, RunResult
from src.cli.run_config import DEFAULT_SMOOTH_NODES, RunConfig
from src.config import settings
from src.errors import SpectrumError
from src.fourier.grid import LineGrid
from src.fourier.quasimode import build_quasimode, residual_ratio, sobolev_half_norm
from src.geometry.curves import BoundaryCurve, build_circle, build_ellipse, build_stadium
from src.operators.assembly import assemble_np, assemble_single_layer
from src.operators.spectrum import SpectrumResult, containment_defect, pairing_defect, spectrum
from src.pipeline.boundary_residual import boundary_residual_ratio, default_boundary_nodes
from src.pipeline.oracles import (TRIVIAL_EIGENVALUE, density_witness, ellipse_density_check,
                                  ellipse_oracle, standing_wave_eigenvalues)
from src.pipeline.sweep import NodePolicy, run_sweep
from src.utils.exporters import ResultExporter
from src.visualization.scatter import eigenvalue_scatter_svg

logger = logging.getLogger(__name__)

ORACLE_TOL = 1e-6
# Soft guard bands of the quasimode residuals
HALVING_BAND = 0.75
SLOPE_BAND = -0.7
NORM_BAND = 2.0


def _slope(R_values: List[float], ratios: List[float]) -> float:
    """Least-squares slope of log(ratio) against log(R)."""
    return float(np.polyfit(np.log(R_values), np.log(ratios), 1)[0])


def _largest_nontrivial(result: SpectrumResult) -> float:
    values = result.as_array()
    return float(np.delete(values, np.argmin(np.abs(values - TRIVIAL_EIGENVALUE))).max())


class SpectralOrchestrator:
    """Dispatches a RunConfig to the command that computes it."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.handlers: Dict[str, Callable[[], RunResult]] = {
            "spectrum": self._spectrum,
            "sweep": self._sweep,
            "quasimode": self._quasimode,
            "boundary-residual": self._boundary_residual,
            "ellipse": self._ellipse,
            "density": self._density,
            "report": self._report,
        }

    def run(self) -> RunResult:
        """Execute the configured command."""
        command = self.config.command
        logger.info(f"Starting {command} run {self.config.digest()}")
        try:
            result = self.handlers[command]()
        except (ValueError, SpectrumError) as e:
            logger.error(f"{command} run failed: {e}")
            raise
        failed = result.record.failed_checks()
        logger.info(f"Finished {command} run: {len(result.record.checks)} checks, {len(failed)} failed")
        return result

    def _record(self, label: str, **fields) -> RunRecord:
        return RunRecord(command=self.config.command, label=label, digest=self.config.digest(),
                         config=self.config.relevant_items(), **fields)

    def _node_policy(self) -> NodePolicy:
        return NodePolicy(nodes_per_unit=self.config.nodes_per_unit, max_nodes=self.config.max_nodes)

    @staticmethod
    def _spectrum_checks(result: SpectrumResult, prefix: str = "") -> List[CheckOutcome]:
        return [
            CheckOutcome.at_most(f"{prefix}containment", containment_defect(result), settings.containment_tol),
            CheckOutcome.at_most(f"{prefix}symmetry",
                                 pairing_defect(result, n_pairs=settings.symmetry_pairs),
                                 settings.symmetry_tol),
        ]

    def _curve(self) -> BoundaryCurve:
        config = self.config
        if config.shape == "stadium":
            return build_stadium(config.R, config.n or self._node_policy().nodes_for(config.R))
        n = config.n or DEFAULT_SMOOTH_NODES
        if config.shape == "ellipse":
            return build_ellipse(config.a, config.b, n)
        return build_circle(config.a, n)

    def _spectrum(self) -> RunResult:
        config = self.config

        # Step 1: Sample the boundary
        logger.info("Step 1: Sampling the boundary...")
        curve = self._curve()
        label = f"{curve.descriptor.label()}_n{curve.n_nodes}".replace("-", "_")

        # Step 2: Assemble the operators
        logger.info("Step 2: Assembling the operators...")
        K = assemble_np(curve)
        S = assemble_single_layer(curve) if config.method == "symmetrized" else None

        # Step 3: Eigen-solve and checks
        logger.info("Step 3: Solving the eigenproblem...")
        result = spectrum(K, S, method=config.method)

        matrices = {}
        if config.save_matrices:
            matrices["K"] = np.array(K.entries)
            if S is not None:
                matrices["S"] = np.array(S.entries)
        record = self._record(label, spectrum=result, checks=self._spectrum_checks(result))
        return RunResult(
            record=record,
            tables={"": ResultExporter.spectrum_frame(result), "curve": ResultExporter.curve_frame(curve)},
            matrices=matrices,
            svg=eigenvalue_scatter_svg([curve.descriptor.label()], [result.eigenvalues],
                                       title=f"NP eigenvalues, {curve.n_nodes} nodes", axis_title="curve"),
        )

    def _sweep(self) -> RunResult:
        config = self.config
        report = run_sweep(config.R_list, n_policy=self._node_policy(), lambda_grid=config.grid,
                           threshold=config.threshold, method=config.method, progress=config.progress)

        checks = []
        for R, spec in zip(report.R_list, report.spectra):
            checks.extend(self._spectrum_checks(spec, prefix=f"R={R:g} "))
        counts = report.outside_counts
        drops = max([0] + [a - b for a, b in zip(counts, counts[1:])])
        checks.append(CheckOutcome.at_most("outside counts nondecreasing", drops, 0, hard=False))

        tables = {"": ResultExporter.sweep_frame(report)}
        for R, spec in zip(report.R_list, report.spectra):
            tables[f"R{R:g}_n{spec.n_nodes}"] = ResultExporter.spectrum_frame(spec)
        values = {
            "standing_wave_k1": {f"R={R:g}": standing_wave_eigenvalues(R, 1)[0] for R in report.R_list},
            "largest_nontrivial": {f"R={R:g}": _largest_nontrivial(spec) for R, spec in
                                   zip(report.R_list, report.spectra)},
        }
        record = self._record("stadium", sweep=report, values=values, checks=checks)
        return RunResult(
            record=record,
            tables=tables,
            svg=eigenvalue_scatter_svg([f"R={R:g}" for R in report.R_list],
                                       [spec.eigenvalues for spec in report.spectra],
                                       title="NP eigenvalues of stadium domains"),
        )

    def _decay_checks(self, rows: List[dict]) -> List[CheckOutcome]:
        checks = []
        for lam in self.config.lambdas:
            ratios = [row["ratio"] for row in rows if row["lambda"] == lam]
            if len(ratios) > 1:
                growth = max(b / a for a, b in zip(ratios, ratios[1:]))
                checks.append(CheckOutcome.at_most(f"lambda={lam:g} ratio decreasing in R", growth, 1.0, hard=False))
        return checks

    def _quasimode_checks(self, rows: List[dict], values: dict) -> List[CheckOutcome]:
        """Soft guard bands: halving per doubling of R, log-log slope and the ‖f_R‖/√R band."""
        checks = self._decay_checks(rows)
        for lam in self.config.lambdas:
            by_R = {row["R"]: row["ratio"] for row in rows if row["lambda"] == lam}
            halvings = [by_R[2 * R] / by_R[R] for R in by_R if 2 * R in by_R]
            if halvings:
                checks.append(CheckOutcome.at_most(f"lambda={lam:g} ratio(2R)/ratio(R)", max(halvings),
                                                   HALVING_BAND, hard=False))
        for name, slope in values.get("log_log_slope", {}).items():
            checks.append(CheckOutcome.at_most(f"{name} log-log slope", slope, SLOPE_BAND, hard=False))
        if "norm_band" in values:
            checks.append(CheckOutcome.at_most("norm over sqrt(R) band", values["norm_band"], NORM_BAND, hard=False))
        return checks

    def _quasimode(self) -> RunResult:
        config = self.config
        rows, tables = [], {}
        for lam in config.lambdas:
            for R in config.R_list:
                grid = LineGrid.for_radius(R)
                qm = build_quasimode(lam, R, grid)
                rows.append({
                    "lambda": lam,
                    "R": R,
                    "ratio": residual_ratio(lam, R),
                    "norm_over_sqrt_R": float(sobolev_half_norm(qm.samples, grid) / np.sqrt(R)),
                })
                tables[f"lam{lam:g}_R{R:g}"] = ResultExporter.quasimode_frame(qm)
        tables["residuals"] = ResultExporter.rows_frame(rows, columns=["lambda", "R", "ratio"])

        values = {}
        if len(config.R_list) > 1:
            values["log_log_slope"] = {
                f"lambda={lam:g}": _slope(config.R_list, [r["ratio"] for r in rows if r["lambda"] == lam])
                for lam in config.lambdas
            }
            bands = [r["norm_over_sqrt_R"] for r in rows]
            values["norm_band"] = float(max(bands) / min(bands))
        record = self._record("line", rows=rows, values=values, checks=self._quasimode_checks(rows, values))
        return RunResult(record=record, tables=tables)

    def _boundary_residual(self) -> RunResult:
        config = self.config
        rows = []
        for lam in config.lambdas:
            for R in config.R_list:
                n = config.n or default_boundary_nodes(R)
                rows.append({"lambda": lam, "R": R, "n_nodes": n,
                             "ratio": boundary_residual_ratio(lam, R, n)})
        record = self._record("stadium", rows=rows, checks=self._decay_checks(rows))
        table = ResultExporter.rows_frame(rows, columns=["lambda", "R", "n_nodes", "ratio"])
        return RunResult(record=record, tables={"": table})

    def _ellipse(self) -> RunResult:
        config = self.config
        oracle = ellipse_oracle(config.a, config.b, config.nmax)
        curve = build_ellipse(config.a, config.b, config.n or DEFAULT_SMOOTH_NODES)
        K, S = assemble_np(curve), assemble_single_layer(curve)
        result = spectrum(K, S)

        values = result.as_array()
        values = np.delete(values, np.argmin(np.abs(values - TRIVIAL_EIGENVALUE)))
        largest = values[np.argsort(-np.abs(values), kind="stable")[:len(oracle)]]
        computed = np.sort(largest)[::-1]
        errors = np.abs(computed - np.asarray(oracle))
        rows = [{"index": i, "oracle": o, "nystrom": float(c), "error": float(e)}
                for i, (o, c, e) in enumerate(zip(oracle, computed, errors))]

        checks = self._spectrum_checks(result)
        checks.append(CheckOutcome.at_most("ellipse oracle", float(errors.max()), ORACLE_TOL))
        label = f"{curve.descriptor.label()}_n{curve.n_nodes}".replace("-", "_")
        record = self._record(label, spectrum=result, rows=rows, checks=checks)
        return RunResult(
            record=record,
            tables={"": ResultExporter.rows_frame(rows, columns=["index", "oracle", "nystrom", "error"])},
            svg=eigenvalue_scatter_svg(["oracle", "Nyström"], [oracle, result.eigenvalues],
                                       title=f"Ellipse a={config.a:g}, b={config.b:g}", axis_title="source"),
        )

    def _density(self) -> RunResult:
        config = self.config
        steps = -np.log(np.asarray(config.r_list))
        rows = []
        for x in config.x:
            n, j = density_witness(x, config.r_list, config.epsilon)
            value = float(n * steps[j - 1])
            rows.append({"x": x, "n": n, "j": j, "n_t_j": value, "error": abs(value - x)})

        worst = max(row["error"] for row in rows)
        dense = ellipse_density_check(config.r_list, config.grid.points(), config.epsilon)
        checks = [
            CheckOutcome.at_most("witness", worst, config.epsilon),
            CheckOutcome.at_most("oracle union dense on probe grid", 0.0 if dense else 1.0, 0.0, hard=False),
        ]
        record = self._record("ellipse", rows=rows, checks=checks)
        table = ResultExporter.rows_frame(rows, columns=["x", "n", "j", "n_t_j", "error"])
        return RunResult(record=record, tables={"": table})

    def _report(self) -> RunResult:
        path = Path(self.config.input)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise OSError(f"Could not read {path}: {e}") from e
        logger.info(f"Re-reading {path}")
        return RunResult(record=RunRecord.model_validate_json(text))
