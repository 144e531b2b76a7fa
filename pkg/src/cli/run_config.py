"""Run configuration: command-line flags merged over an optional key=value file."""
from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence
import argparse
import hashlib
import logging

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import settings
from src.errors import ConfigError
from src.geometry.curves import MIN_NODES
from src.pipeline.sweep import ProbeGrid

logger = logging.getLogger(__name__)

COMMANDS = ("spectrum", "sweep", "quasimode", "boundary-residual", "ellipse", "density", "report")
# Commands whose --R takes a comma-separated list
LIST_R_COMMANDS = ("sweep", "quasimode", "boundary-residual")
# Node count for ellipses and circles when --n is not given
DEFAULT_SMOOTH_NODES = 256
LIST_FIELDS = ("lambdas", "R_list", "x", "r_list", "formats")
# Keys that shape where and how results are written but not what is computed
OUTPUT_ONLY_KEYS = ("output_dir", "formats", "check", "progress", "save_matrices", "config")

Format = Literal["csv", "json", "svg"]


class RunConfig(BaseModel):
    """Everything one invocation needs, validated against the preconditions of its command."""
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    command: Literal["spectrum", "sweep", "quasimode", "boundary-residual", "ellipse", "density", "report"]

    # Geometry
    shape: Literal["stadium", "ellipse", "circle"] = "stadium"
    R: Optional[float] = Field(default=None, ge=1)
    a: Optional[float] = Field(default=None, gt=0)
    b: Optional[float] = Field(default=None, gt=0)
    n: Optional[int] = Field(default=None, ge=MIN_NODES)

    # Node policy for sweeps
    nodes_per_unit: int = Field(default_factory=lambda: settings.nodes_per_unit, ge=1)
    max_nodes: int = Field(default_factory=lambda: settings.max_nodes, ge=MIN_NODES)
    method: Literal["symmetrized", "plain"] = "symmetrized"

    # Command inputs
    lambdas: List[float] = Field(default_factory=list, alias="lambda")
    R_list: List[float] = Field(default_factory=list)
    grid: ProbeGrid = Field(default_factory=ProbeGrid)
    threshold: float = Field(default=0.25, gt=0, lt=0.5)
    nmax: int = Field(default=6, ge=1)
    x: List[float] = Field(default_factory=list)
    r_list: List[float] = Field(default_factory=list)
    epsilon: float = Field(default=0.01, gt=0)
    input: Optional[Path] = None

    # Outputs
    output_dir: Path = Field(default_factory=lambda: settings.output_dir)
    formats: List[Format] = Field(default_factory=lambda: ["csv", "json"])
    check: bool = True
    save_matrices: bool = False
    progress: bool = True
    deterministic: bool = True

    @field_validator(*LIST_FIELDS, mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("grid", mode="before")
    @classmethod
    def _parse_grid(cls, value: Any) -> Any:
        if isinstance(value, str):
            return ProbeGrid.parse(value)
        return value

    @field_validator("deterministic")
    @classmethod
    def _always_deterministic(cls, value: bool) -> bool:
        if not value:
            raise ValueError("runs are always deterministic; deterministic=false is not supported")
        return value

    @field_validator("n")
    @classmethod
    def _even_nodes(cls, n: Optional[int]) -> Optional[int]:
        if n is not None and n % 2:
            raise ValueError(f"n must be even, got {n}")
        return n

    @model_validator(mode="after")
    def _command_inputs(self) -> "RunConfig":
        command = self.command
        if command == "spectrum":
            if self.shape == "stadium" and self.R is None:
                raise ValueError("spectrum of a stadium needs --R")
            if self.shape == "ellipse":
                if self.a is None or self.b is None:
                    raise ValueError("spectrum of an ellipse needs --a and --b")
                if self.a < self.b:
                    raise ValueError(f"ellipse needs a >= b, got a={self.a}, b={self.b}")
            if self.shape == "circle" and self.a is None:
                raise ValueError("spectrum of a circle needs --a (the radius)")
        elif command == "ellipse":
            if self.a is None or self.b is None or not self.a > self.b:
                raise ValueError(f"ellipse needs --a and --b with a > b, got a={self.a}, b={self.b}")
            n = self.n or DEFAULT_SMOOTH_NODES
            if 2 * self.nmax > n - 1:
                raise ValueError(f"--nmax {self.nmax} asks for {2 * self.nmax} eigenvalues but {n} nodes "
                                 f"give only {n - 1} nontrivial ones; lower --nmax or raise --n")
        elif command in LIST_R_COMMANDS:
            if not self.R_list:
                raise ValueError(f"{command} needs --R with at least one value")
            if any(r2 <= r1 for r1, r2 in zip(self.R_list, self.R_list[1:])):
                raise ValueError(f"--R must be strictly increasing, got {self.R_list}")
            minimum = {"sweep": 1.0, "quasimode": 4.0, "boundary-residual": 2.0}[command]
            if min(self.R_list) < minimum:
                raise ValueError(f"{command} needs every R >= {minimum:g}, got {self.R_list}")
            if command != "sweep":
                if not self.lambdas:
                    raise ValueError(f"{command} needs --lambda with at least one value")
                if any(not 0.0 < lam <= 0.5 for lam in self.lambdas):
                    raise ValueError(f"--lambda values must lie in (0, 1/2], got {self.lambdas}")
        elif command == "density":
            if not self.x or not self.r_list:
                raise ValueError("density needs --x and --r-list")
            if any(v < 0 for v in self.x):
                raise ValueError(f"--x values must be non-negative, got {self.x}")
            if any(not 0.0 < r < 1.0 for r in self.r_list):
                raise ValueError(f"--r-list values must lie in (0, 1), got {self.r_list}")
        elif command == "report" and self.input is None:
            raise ValueError("report needs --input pointing at a JSON result")
        return self

    def echo_items(self) -> Dict[str, str]:
        """Effective configuration as flat key=value strings, keyed by the file-format names."""
        items = {}
        for name, value in self.model_dump(by_alias=True).items():
            if value is None:
                continue
            if name == "grid":
                items[name] = self.grid.spec()
            elif isinstance(value, list):
                items[name] = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
            elif isinstance(value, bool):
                items[name] = str(value).lower()
            elif isinstance(value, float):
                items[name] = repr(value)
            elif isinstance(value, Path):
                items[name] = value.as_posix()
            else:
                items[name] = str(value)
        return dict(sorted(items.items()))

    def echo(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in self.echo_items().items())

    def relevant_items(self) -> Dict[str, str]:
        """The echo without the keys that only affect where and how results are written."""
        return {k: v for k, v in self.echo_items().items() if k not in OUTPUT_ONLY_KEYS}

    def digest(self) -> str:
        """12-hex sha256 of the computation-relevant part of the echo."""
        text = "".join(f"{key}={value}\n" for key, value in self.relevant_items().items())
        return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as ConfigError instead of exiting."""

    def error(self, message: str):
        raise ConfigError(message)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value file; flags override its values")
    parser.add_argument("--output-dir", dest="output_dir")
    parser.add_argument("--format", dest="formats", help="comma-separated subset of csv,json,svg")
    parser.add_argument("--no-check", dest="check", action="store_false",
                        help="downgrade invariant check failures to warnings")
    parser.add_argument("--no-progress", dest="progress", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="npspectra", description="Spectra of Neumann–Poincaré operators on thin domains")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text, argument_default=argparse.SUPPRESS)
        _common_flags(sub)
        return sub

    spectrum = add("spectrum", "eigenvalues of one curve")
    spectrum.add_argument("--shape", choices=["stadium", "ellipse", "circle"])
    spectrum.add_argument("--R", dest="R")
    spectrum.add_argument("--a")
    spectrum.add_argument("--b")
    spectrum.add_argument("--n")
    spectrum.add_argument("--method", choices=["symmetrized", "plain"])
    spectrum.add_argument("--save-matrices", dest="save_matrices", action="store_true")

    sweep = add("sweep", "stadium spectra over increasing R and their fill distances")
    sweep.add_argument("--R", dest="R_list", help="comma-separated increasing values")
    sweep.add_argument("--grid", help="probe grid start:stop:step")
    sweep.add_argument("--threshold")
    sweep.add_argument("--nodes-per-unit", dest="nodes_per_unit")
    sweep.add_argument("--max-nodes", dest="max_nodes")
    sweep.add_argument("--method", choices=["symmetrized", "plain"])

    quasimode = add("quasimode", "Fourier-side residual ratios of the quasimodes")
    quasimode.add_argument("--lambda", dest="lambda")
    quasimode.add_argument("--R", dest="R_list")

    boundary = add("boundary-residual", "boundary-side residual ratios of the lifted quasimodes")
    boundary.add_argument("--lambda", dest="lambda")
    boundary.add_argument("--R", dest="R_list")
    boundary.add_argument("--n")

    ellipse = add("ellipse", "closed-form ellipse spectrum against the Nyström spectrum")
    ellipse.add_argument("--a")
    ellipse.add_argument("--b")
    ellipse.add_argument("--nmax")
    ellipse.add_argument("--n")

    density = add("density", "witnesses n·t_j ≈ x for ellipse ratio sequences")
    density.add_argument("--x")
    density.add_argument("--r-list", dest="r_list")
    density.add_argument("--epsilon")

    report = add("report", "re-read a JSON result and print its summary")
    report.add_argument("--input")
    return parser


def normalize_argv(argv: Sequence[str]) -> List[str]:
    """Attach values that start with '-' (e.g. ``--grid -0.45:0.45:0.01``) to their flag with '='."""
    out: List[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (token.startswith("--") and "=" not in token and nxt is not None
                and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{token}={nxt}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def read_config_file(path: Path) -> Dict[str, str]:
    """Flat key=value lines; '#' starts a comment; '-' in keys reads as '_'."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = dotenv_values(path, encoding="utf-8")
    return {key.replace("-", "_"): value for key, value in values.items() if value is not None}


def _one_line(error: ValidationError) -> str:
    parts = []
    for err in error.errors():
        where = ".".join(str(loc) for loc in err["loc"]) or "config"
        parts.append(f"{where}: {err['msg']}")
    return "invalid configuration: " + "; ".join(parts)


def parse_config(args: Sequence[str], config_file: Optional[Path] = None) -> RunConfig:
    """Parse command-line ``args`` over the values of ``config_file`` (or ``--config``)."""
    namespace = build_parser().parse_args(normalize_argv(list(args)))
    flags = {key: value for key, value in vars(namespace).items()}
    command = flags.pop("command")

    file_path = flags.pop("config", None) or config_file
    file_values: Dict[str, Any] = read_config_file(Path(file_path)) if file_path else {}
    file_values.pop("command", None)
    if command in LIST_R_COMMANDS and "R" in file_values:
        file_values["R_list"] = file_values.pop("R")

    merged = {**file_values, **flags, "command": command}
    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigError(_one_line(e)) from e
    logger.debug(f"Effective configuration:\n{config.echo()}")
    return config
