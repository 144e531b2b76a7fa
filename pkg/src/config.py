"""Configuration management for npspectra."""
import os
from pathlib import Path
from dotenv import load_dotenv
from pydantic import BaseModel, Field

# Load environment variables
load_dotenv()


class Settings(BaseModel):
    """Process-wide settings read from the environment."""

    # Worker pool
    threads: int = Field(default_factory=lambda: int(os.getenv("NPSPECTRA_THREADS", str(os.cpu_count() or 1))), ge=1)

    # Logging
    log_level: str = Field(default_factory=lambda: os.getenv("NPSPECTRA_LOG_LEVEL", "INFO"))

    # Discretization policy
    nodes_per_unit: int = Field(default_factory=lambda: int(os.getenv("NPSPECTRA_NODES_PER_UNIT", "64")), ge=1)
    max_nodes: int = Field(default_factory=lambda: int(os.getenv("NPSPECTRA_MAX_NODES", "4096")), ge=32)

    # Hard invariant checks on computed spectra
    containment_tol: float = Field(default_factory=lambda: float(os.getenv("NPSPECTRA_CONTAINMENT_TOL", "1e-4")), gt=0)
    symmetry_tol: float = Field(default_factory=lambda: float(os.getenv("NPSPECTRA_SYMMETRY_TOL", "2e-3")), gt=0)
    symmetry_pairs: int = Field(default_factory=lambda: int(os.getenv("NPSPECTRA_SYMMETRY_PAIRS", "20")), ge=1)

    # Above this relative ‖A − Aᵀ‖ the symmetrized pencil is logged as suspicious
    asymmetry_warning: float = Field(default=1e-2)

    # Results
    output_dir: Path = Field(default_factory=lambda: Path(os.getenv("NPSPECTRA_OUTPUT_DIR", "results")))


# Global settings instance
settings = Settings()
