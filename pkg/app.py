"""Command-line entry point for npspectra.

    python app.py spectrum --shape stadium --R 4 --n 512
    python app.py ellipse --a 2 --b 1 --nmax 6
    python app.py sweep --R 2,4,8,16 --grid -0.45:0.45:0.01 --format csv,json,svg
    python app.py report --input results/sweep_stadium_<hash>.json
"""
from pathlib import Path
from typing import Optional, Sequence
import logging
import sys

# Add src to path
sys.path.append(str(Path(__file__).parent))

from src.cli.orchestrator import SpectralOrchestrator
from src.cli.outputs import emit_outputs, summarize
from src.cli.run_config import parse_config
from src.config import settings
from src.errors import ConfigError, SpectrumError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_CONFIG = 2
EXIT_CHECK = 3


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command; returns the process exit status."""
    logging.basicConfig(level=settings.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)

    try:
        config = parse_config(argv)
    except ConfigError as e:
        print(f"npspectra: error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = SpectralOrchestrator(config).run()
        if config.command != "report":
            emit_outputs(result, config)
    except (ValueError, SpectrumError, OSError) as e:
        logger.error(f"{config.command} failed: {e}")
        print(f"npspectra: {config.command} failed: {e}", file=sys.stderr)
        return EXIT_COMPUTATION

    print("\n".join(summarize(result.record)))

    failed = result.record.failed_checks()
    if failed and config.command != "report":
        names = ", ".join(check.name for check in failed)
        if config.check:
            print(f"npspectra: invariant checks failed: {names}", file=sys.stderr)
            return EXIT_CHECK
        logger.warning(f"Invariant checks failed (downgraded by --no-check): {names}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
