"""Writers and readers for CSV tables, flat binary matrices and JSON reports."""
from pathlib import Path
from typing import Iterable, Mapping
import logging

import numpy as np
import pandas as pd
from pydantic import BaseModel

from src.fourier.quasimode import QuasiMode
from src.geometry.curves import BoundaryCurve
from src.operators.spectrum import SpectrumResult
from src.pipeline.sweep import SweepReport

logger = logging.getLogger(__name__)

MATRIX_HEADER = np.dtype("<u8")
MATRIX_DTYPE = np.dtype("<f8")


class ResultExporter:
    """Turn computed objects into tables and files on disk."""

    @staticmethod
    def curve_frame(curve: BoundaryCurve) -> pd.DataFrame:
        """Columns t, x, y, nx, ny, speed, curvature in that order."""
        return pd.DataFrame({
            "t": curve.t,
            "x": curve.points[:, 0],
            "y": curve.points[:, 1],
            "nx": curve.normals[:, 0],
            "ny": curve.normals[:, 1],
            "speed": curve.speeds,
            "curvature": curve.curvatures,
        })

    @staticmethod
    def spectrum_frame(result: SpectrumResult) -> pd.DataFrame:
        return pd.DataFrame({"index": np.arange(len(result.eigenvalues)), "eigenvalue": result.eigenvalues})

    @staticmethod
    def quasimode_frame(qm: QuasiMode) -> pd.DataFrame:
        return pd.DataFrame({"x": qm.grid.x, "re_f": qm.samples.real, "im_f": qm.samples.imag})

    @staticmethod
    def sweep_frame(report: SweepReport) -> pd.DataFrame:
        """One row per (R, eigenvalue)."""
        rows = [
            {"R": R, "n_nodes": spec.n_nodes, "index": i, "eigenvalue": value}
            for R, spec in zip(report.R_list, report.spectra)
            for i, value in enumerate(spec.eigenvalues)
        ]
        return pd.DataFrame(rows, columns=["R", "n_nodes", "index", "eigenvalue"])

    @staticmethod
    def rows_frame(rows: Iterable[Mapping], columns: list) -> pd.DataFrame:
        return pd.DataFrame(list(rows), columns=columns)

    @staticmethod
    def write_csv(frame: pd.DataFrame, path: Path) -> Path:
        """UTF-8, LF line endings, '.' decimal separator, shortest round-trip floats."""
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")
        except OSError as e:
            logger.error(f"Error writing CSV {path}: {e}")
            raise OSError(f"Could not write {path}: {e}") from e
        logger.info(f"Wrote {path}")
        return path

    @staticmethod
    def write_text(text: str, path: Path) -> Path:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            logger.error(f"Error writing {path}: {e}")
            raise OSError(f"Could not write {path}: {e}") from e
        logger.info(f"Wrote {path}")
        return path

    @classmethod
    def write_json(cls, model: BaseModel, path: Path) -> Path:
        return cls.write_text(model.model_dump_json(indent=2) + "\n", path)

    @staticmethod
    def write_matrix_binary(matrix: np.ndarray, path: Path) -> Path:
        """Two little-endian uint64 dims, then the entries as little-endian float64, row-major."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2:
            raise ValueError(f"Expected a 2-D matrix, got shape {matrix.shape}")
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "wb") as f:
                f.write(np.asarray(matrix.shape, dtype=MATRIX_HEADER).tobytes())
                f.write(np.ascontiguousarray(matrix, dtype=MATRIX_DTYPE).tobytes(order="C"))
        except OSError as e:
            logger.error(f"Error writing matrix {path}: {e}")
            raise OSError(f"Could not write {path}: {e}") from e
        logger.info(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")
        return path

    @staticmethod
    def read_matrix_binary(path: Path) -> np.ndarray:
        try:
            data = Path(path).read_bytes()
        except OSError as e:
            raise OSError(f"Could not read {path}: {e}") from e
        header_size = 2 * MATRIX_HEADER.itemsize
        if len(data) < header_size:
            raise ValueError(f"{path} is too short for a matrix header")
        rows, cols = (int(v) for v in np.frombuffer(data[:header_size], dtype=MATRIX_HEADER))
        body = np.frombuffer(data[header_size:], dtype=MATRIX_DTYPE)
        if body.size != rows * cols:
            raise ValueError(f"{path} declares {rows}x{cols} entries but holds {body.size}")
        return body.reshape(rows, cols).astype(float)

    @staticmethod
    def read_sweep_report(path: Path) -> SweepReport:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise OSError(f"Could not read {path}: {e}") from e
        return SweepReport.model_validate_json(text)
