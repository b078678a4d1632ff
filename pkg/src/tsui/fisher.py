"""Quantum and classical Fisher-information bounds on the phase sensitivity.

The quantum bound applies to the lossless seeded two-mode squeezed state with
the phase object in the seeded arm and an external phase reference.  The
classical bound is specific to Gaussian states read out by homodyne
detection; it splits into the inverse of the SNR-based phase variance plus a
distribution term that vanishes at noise extrema.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNoiseError
from .interferometer import (
    SLOPE_STEP,
    InterferometerConfig,
    build_output_state,
    joint_quadrature_weights,
    quadrature_stats,
)

DEGENERATE_NOISE_TOL = 1e-15


@dataclass(frozen=True)
class FisherReport:
    """Fisher quantities (rad^-2) for one configuration and operating point."""

    qfi: float
    cfi: float
    snr_term: float
    dist_term: float


def qfi(r: float, alpha2: float) -> float:
    """Quantum Fisher information 2 cosh^2(r) [(1 + 2|alpha|^2) cosh(2r) - 1]."""
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if alpha2 < 0:
        raise ValueError(f"alpha2 must be non-negative, got {alpha2}")
    return float(2.0 * np.cosh(r) ** 2 * ((1.0 + 2.0 * alpha2) * np.cosh(2.0 * r) - 1.0))


def cfi_homodyne(config: InterferometerConfig) -> FisherReport:
    """Classical Fisher information of the summed homodyne signal.

    F_C = [(d<X>/dphi)^2 + 2 (d DeltaX/dphi)^2] / Var(X), with both
    derivatives taken by central finite difference at the configured
    operating point.  The reported ``qfi`` uses the same r and alpha2 and
    assumes no loss.
    """
    u = joint_quadrature_weights(config.phi_p, config.phi_c, config.a_p, config.a_c)
    h = SLOPE_STEP
    mean0, var0 = quadrature_stats(build_output_state(config), u)
    if var0 < DEGENERATE_NOISE_TOL:
        raise DegenerateNoiseError(f"noise variance {var0:.3e} is numerically zero")
    mean_hi, var_hi = quadrature_stats(
        build_output_state(dataclasses.replace(config, phi=config.phi + h)), u
    )
    mean_lo, var_lo = quadrature_stats(
        build_output_state(dataclasses.replace(config, phi=config.phi - h)), u
    )
    slope = (mean_hi - mean_lo) / (2.0 * h)
    dstd = (np.sqrt(var_hi) - np.sqrt(var_lo)) / (2.0 * h)
    snr_term = slope**2 / var0
    dist_term = 2.0 * dstd**2 / var0
    return FisherReport(
        qfi=qfi(abs(config.r), config.alpha2),
        cfi=float(snr_term + dist_term),
        snr_term=float(snr_term),
        dist_term=float(dist_term),
    )
