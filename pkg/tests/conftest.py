import io
import math

import numpy as np
import pytest

from specvar import PowerDensity, SpectralMeasure
from specvar.cli import run as cli_run


def scale_measure(m: SpectralMeasure, c: float) -> SpectralMeasure:
    """Measure with every mass and density multiplied by c (for linearity tests)."""
    atoms = tuple((loc, c * mass) for loc, mass in m.atoms)
    pieces = tuple(
        PowerDensity(p.lo, p.hi, c * p.coef, p.exponent) for p in m.density)
    return SpectralMeasure(atom_at_zero=c * m.atom_at_zero, atoms=atoms,
                           density=pieces)


def atomic_variance_oracle(m: SpectralMeasure, n: int) -> float:
    """Independent direct sum over atoms, no shared code with the package."""
    total = m.atom_at_zero * n ** 2
    for loc, mass in m.atoms:
        total += (math.sin(n * loc / 2.0) / math.sin(loc / 2.0)) ** 2 * mass
    return total


def covariance_variance_oracle(r: np.ndarray, n: int) -> float:
    """Triangular sum oracle from externally supplied autocovariances."""
    k = np.arange(1, n)
    return n * float(r[0]) + 2.0 * float(((n - k) * r[1:n]).sum())


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    rc = cli_run(list(argv), out=out, err=err)
    return rc, out.getvalue(), err.getvalue()


@pytest.fixture(scope="session")
def gallery_measures():
    from specvar import counterexample, nonergodic, power_law, quadratic, white_noise
    return {
        "whitenoise": white_noise(),
        "power05": power_law(0.5),
        "quadratic": quadratic(),
        "counterexample": counterexample(),
        "nonergodic": nonergodic(),
    }
