"""Example script walking through the npspectra library calls behind each command."""
import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent))

from src.fourier.quasimode import residual_ratio
from src.geometry.curves import build_circle, build_ellipse, build_stadium
from src.operators.spectrum import containment_defect, curve_spectrum, pairing_defect
from src.pipeline.boundary_residual import boundary_residual_ratio
from src.pipeline.oracles import density_witness, ellipse_oracle
from src.pipeline.sweep import ProbeGrid, run_sweep
import logging

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)


def example_disk():
    """Example: The disk has spectrum {1/2, 0, 0, ...}."""
    print("\n" + "=" * 60)
    print("Example 1: Disk")
    print("=" * 60)

    result = curve_spectrum(build_circle(1.0, 128))
    print(f"Top eigenvalues: {result.eigenvalues[:3]}")
    print(f"Largest nontrivial magnitude: {max(abs(v) for v in result.eigenvalues[1:]):.2e}")


def example_ellipse():
    """Example: Nyström ellipse spectrum against ±½rⁿ."""
    print("\n" + "=" * 60)
    print("Example 2: Ellipse oracle")
    print("=" * 60)

    oracle = ellipse_oracle(2.0, 1.0, 3)
    result = curve_spectrum(build_ellipse(2.0, 1.0, 256))
    print(f"Oracle:   {[f'{v:+.8f}' for v in oracle]}")
    print(f"Computed: {[f'{v:+.8f}' for v in result.eigenvalues[1:4]]} ...")


def example_stadium():
    """Example: A stadium spectrum and its invariant checks."""
    print("\n" + "=" * 60)
    print("Example 3: Stadium R=4")
    print("=" * 60)

    result = curve_spectrum(build_stadium(4.0, 320))
    print(f"✓ {result.n_nodes} eigenvalues, top {result.eigenvalues[0]:.6f}")
    print(f"  - containment defect: {containment_defect(result):.2e}")
    print(f"  - pairing defect (20 pairs): {pairing_defect(result, n_pairs=20):.2e}")


def example_residuals():
    """Example: Quasimode residual ratios on the line and on the boundary."""
    print("\n" + "=" * 60)
    print("Example 4: Residual ratios")
    print("=" * 60)

    for R in (8, 16, 32):
        print(f"  Fourier side, lambda=0.25, R={R}: {residual_ratio(0.25, R):.4e}")
    for R in (4, 8):
        print(f"  Boundary side, lambda=0.3, R={R}: {boundary_residual_ratio(0.3, R):.4e}")


def example_sweep_and_density():
    """Example: Fill distances of a small sweep and a density witness."""
    print("\n" + "=" * 60)
    print("Example 5: Sweep and density witness")
    print("=" * 60)

    report = run_sweep([2, 4, 8], lambda_grid=ProbeGrid(start=-0.45, stop=0.45, step=0.01))
    for R, fill in zip(report.R_list, report.fill_distances):
        print(f"  R={R:g}: fill distance {fill:.4f}")

    n, j = density_witness(0.5, [0.9, 0.99, 0.999], 0.01)
    print(f"  x=0.5 is approximated by n={n} steps of t_{j}")


def main():
    """Run all examples."""
    print("=" * 60)
    print("npspectra - Examples")
    print("=" * 60)

    try:
        example_disk()
        example_ellipse()
        example_stadium()
        example_residuals()
        example_sweep_and_density()

        print("\n" + "=" * 60)
        print("All examples completed!")
        print("=" * 60)

    except Exception as e:
        print(f"\n✗ Error running examples: {e}")


if __name__ == "__main__":
    main()
