"""mlcp: exact, asymptotic, and Monte Carlo evaluation of the moment
generating function of the modulus characteristic polynomial of a
rotation-invariant two-dimensional determinantal ensemble."""

from .asymp import (
    AsymptoticCoeffs,
    GPair,
    ScanResult,
    coeff_C1,
    coeff_C2,
    coeff_C3,
    compute_coeffs,
    eval_G,
    positivity_scan,
    predict,
    residual,
)
from .errors import (
    AccuracyError,
    CancellationError,
    DomainError,
    MlcpError,
    RangeError,
    SingularPointError,
    UnsupportedOrderError,
)
from .exact_mgf import ExactResult, SplitDiagnostics, ln_mgf_exact, ln_partition, split_sums
from .params import Params
from .sampler import MCResult, mc_ln_mgf, sample_moduli

__all__ = [
    "AccuracyError",
    "AsymptoticCoeffs",
    "CancellationError",
    "DomainError",
    "ExactResult",
    "GPair",
    "MCResult",
    "MlcpError",
    "Params",
    "RangeError",
    "ScanResult",
    "SingularPointError",
    "SplitDiagnostics",
    "UnsupportedOrderError",
    "coeff_C1",
    "coeff_C2",
    "coeff_C3",
    "compute_coeffs",
    "eval_G",
    "ln_mgf_exact",
    "ln_partition",
    "mc_ln_mgf",
    "positivity_scan",
    "predict",
    "residual",
    "sample_moduli",
    "split_sums",
]

__version__ = "0.1.0"
