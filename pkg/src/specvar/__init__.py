"""Numerical toolkit for spectral measures of weakly stationary sequences.

Represents folded spectral measures on [0, pi], computes Var(S_n) by two
independent routes (Fejer-kernel integration and covariance sums), brackets
it with two-sided bounds, runs regular-variation growth diagnostics, ships a
gallery of explicit example measures, and simulates exact Gaussian sample
paths for any measure.
"""

from .asymptotics import (DichotomyReport, FitResult, GrowthBoundReport,
                          RegularVariationModel, ScanReport, ScanRow,
                          SlowlyVarying, SubsequenceScanReport, c_gamma,
                          c_identity_residual, d_gamma, dichotomy_check,
                          gamma_fit, growth_bound_report, subsequence_scan,
                          theorem_check)
from .errors import (DomainError, NumericError, SerializationError,
                     SpecvarError, ValidationError)
from .fejer_variance import (BoundsReport, fejer_kernel, sandwich,
                             variance_covariance, variance_profile,
                             variance_spectral)
from .gallery import (counterexample, nonergodic, power_law, quadratic,
                      white_noise, with_origin_atom)
from .simulate import EmpiricalVariance, PathBatch, empirical_variance, simulate
from .spectral_measure import (OpaqueDensity, PowerDensity, SpectralMeasure,
                               TableDensity, autocovariance,
                               autocovariance_batch, g_eval, measure_from_dict,
                               measure_from_json, measure_to_dict,
                               measure_to_json, robinson_integral)

__version__ = "0.1.0"

__all__ = [
    "BoundsReport", "DichotomyReport", "DomainError", "EmpiricalVariance",
    "FitResult", "GrowthBoundReport", "NumericError", "OpaqueDensity",
    "PathBatch", "PowerDensity", "RegularVariationModel", "ScanReport",
    "ScanRow", "SerializationError", "SlowlyVarying", "SpectralMeasure",
    "SpecvarError", "SubsequenceScanReport", "TableDensity",
    "ValidationError", "autocovariance", "autocovariance_batch", "c_gamma",
    "c_identity_residual", "counterexample", "d_gamma", "dichotomy_check",
    "empirical_variance", "fejer_kernel", "g_eval", "gamma_fit",
    "growth_bound_report", "measure_from_dict", "measure_from_json",
    "measure_to_dict", "measure_to_json", "nonergodic", "power_law",
    "quadratic", "robinson_integral", "sandwich", "simulate",
    "subsequence_scan", "theorem_check", "variance_covariance",
    "variance_profile", "variance_spectral", "white_noise",
    "with_origin_atom",
]
