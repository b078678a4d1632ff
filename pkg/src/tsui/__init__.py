"""Phase-sensitivity engine for seeded SU(1,1)-type interferometers.

Models seeded two-mode squeezed light through squeezers, phase shifts and
loss; computes the phase-estimation variance of the standard detection
schemes plus quantum/classical Fisher-information bounds; validates the
Gaussian closed forms against a truncated Fock-space brute force and a
Monte-Carlo simulated homodyne measurement.
"""

from .errors import (
    DegenerateNoiseError,
    InsufficientDataError,
    SlopeZeroError,
    TruncationInadequateError,
    TsuiError,
)
from .fisher import FisherReport, cfi_homodyne, qfi
from .gaussian import (
    CONJUGATE,
    PROBE,
    GaussianState,
    apply_loss,
    apply_phase_shift,
    apply_two_mode_squeeze,
    coherent_seed_state,
    number_stats,
    photon_covariance,
    quadrature_stats,
    vacuum_state,
)
from .interferometer import (
    DetectionScheme,
    InterferometerConfig,
    SensitivityReport,
    build_output_state,
    closed_form_sensitivity,
    gain_sweep_table,
    optimal_operating_point,
    phase_variance_direct,
    phase_variance_homodyne,
    sensitivity_report,
)
from .snri import BaselineSpec, coherent_variance, snri_db, snri_map, snri_scan_phip, sql_variance

__version__ = "0.1.0"

__all__ = [
    "BaselineSpec",
    "CONJUGATE",
    "DegenerateNoiseError",
    "DetectionScheme",
    "FisherReport",
    "GaussianState",
    "InsufficientDataError",
    "InterferometerConfig",
    "PROBE",
    "SensitivityReport",
    "SlopeZeroError",
    "TruncationInadequateError",
    "TsuiError",
    "apply_loss",
    "apply_phase_shift",
    "apply_two_mode_squeeze",
    "build_output_state",
    "cfi_homodyne",
    "closed_form_sensitivity",
    "coherent_seed_state",
    "coherent_variance",
    "gain_sweep_table",
    "number_stats",
    "optimal_operating_point",
    "phase_variance_direct",
    "phase_variance_homodyne",
    "photon_covariance",
    "qfi",
    "quadrature_stats",
    "sensitivity_report",
    "snri_db",
    "snri_map",
    "snri_scan_phip",
    "sql_variance",
    "vacuum_state",
]
