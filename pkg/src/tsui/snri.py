"""Coherent baselines, the standard quantum limit and SNR-improvement figures.

The baseline is the best phase variance achievable with coherent beams of the
same detected probe power, 1/(2 eta G |alpha|^2); the SQL counts only the
photons that traverse the phase object, N_p = eta G |alpha|^2 (an optional
flag adds the conjugate-arm photons).  SNRI is the power-ratio improvement
-10 log10(var / var_coh) in dB.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

INSENSITIVE_EPS = 1e-12  # |sin phi_p| below this marks a gap in scans


@dataclass(frozen=True)
class BaselineSpec:
    """Coherent-reference accounting for one operating point."""

    eta: float
    gain: float
    alpha2: float
    n_p: float = field(default=None)  # detected probe photons; derived if omitted

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError(f"eta must lie in (0, 1], got {self.eta}")
        if self.gain < 1.0:
            raise ValueError(f"gain must be >= 1, got {self.gain}")
        if self.alpha2 <= 0.0:
            raise ValueError(f"alpha2 must be positive, got {self.alpha2}")
        derived = self.eta * self.gain * self.alpha2
        if self.n_p is None:
            object.__setattr__(self, "n_p", derived)
        elif abs(self.n_p - derived) > 1e-12 * max(1.0, derived):
            raise ValueError(f"n_p = {self.n_p} inconsistent with eta*G*alpha2 = {derived}")

    @property
    def coherent_variance(self) -> float:
        return 1.0 / (2.0 * self.n_p)

    @property
    def sql(self) -> float:
        return sql_variance(self.n_p)


def detected_probe_photons(
    eta: float, gain: float, alpha2: float, include_conjugate: bool = False
) -> float:
    """Detected photon number used for SQL accounting.

    Counts the probe-arm photons eta*G*|alpha|^2 by default; with
    ``include_conjugate`` the conjugate-arm photons eta*(G-1)*|alpha|^2 are
    added (not the default accounting).
    """
    n = eta * gain * alpha2
    if include_conjugate:
        n += eta * (gain - 1.0) * alpha2
    return float(n)


def coherent_variance(eta: float, gain: float, alpha2: float) -> float:
    """Optimal coherent-beam phase variance 1/(2 eta G |alpha|^2)."""
    denom = 2.0 * eta * gain * alpha2
    if denom <= 0.0:
        raise ValueError("eta, gain and alpha2 must all be positive")
    return 1.0 / denom


def sql_variance(n_p: float) -> float:
    """Phase variance 1/(2 N_p) of an ideal two-port interferometer."""
    if n_p <= 0.0:
        raise ValueError(f"photon number must be positive, got {n_p}")
    return 1.0 / (2.0 * n_p)


def snri_db(variance_tsui: float, variance_coh: float) -> float:
    """SNR improvement -10 log10(var / var_coh) in dB (positive is better)."""
    if variance_tsui <= 0.0 or variance_coh <= 0.0:
        raise ValueError("variances must be positive")
    return float(-10.0 * np.log10(variance_tsui / variance_coh))


def ideal_detection_snri(snri: float, detector_eta: float) -> float:
    """SNRI referenced to a detection-loss-free coherent baseline.

    Removing detector loss improves only the coherent reference, by
    -10 log10(detector_eta), so the quoted improvement shrinks by that much.
    The detection budget (detector_eta) and the full loss parameter eta of
    the squeezed measurement are distinct inputs; this function only does the
    baseline arithmetic and does not attempt to decompose one into the other.
    """
    if not 0.0 < detector_eta <= 1.0:
        raise ValueError(f"detector_eta must lie in (0, 1], got {detector_eta}")
    return float(snri + 10.0 * np.log10(detector_eta))


def _scaled_variance_grid(r: float, eta: float, phi_p, phi_c) -> np.ndarray:
    """alpha2 * phase variance on angle arrays, with NaN at insensitive points."""
    phi_p = np.asarray(phi_p, dtype=float)
    phi_c = np.asarray(phi_c, dtype=float)
    num = (
        2.0 * eta
        + (1.0 - 2.0 * eta) / np.cosh(r) ** 2
        + 2.0 * eta * np.cos(phi_p + phi_c) * np.tanh(r)
    )
    sp2 = np.sin(phi_p) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / (2.0 * eta * sp2)
    return np.where(np.abs(np.sin(phi_p)) < INSENSITIVE_EPS, np.nan, out)


def snri_scan_phip(
    eta: float,
    gain: float,
    alpha2: float,
    phi_c: float = np.pi / 2,
    grid_deg: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """SNRI versus probe local-oscillator phase at fixed conjugate phase.

    Returns (phi_p, snri_db) arrays over [-pi, pi]; insensitive points
    (sin phi_p = 0) are reported as NaN gaps.  The result is independent of
    ``alpha2``, which enters both the variance and the baseline.
    """
    if gain < 1.0:
        raise ValueError(f"gain must be >= 1, got {gain}")
    if grid_deg <= 0:
        raise ValueError(f"grid_deg must be positive, got {grid_deg}")
    r = float(np.arccosh(np.sqrt(gain)))
    n = int(round(360.0 / grid_deg))
    phi_p = np.linspace(-np.pi, np.pi, n + 1)
    scaled = _scaled_variance_grid(r, eta, phi_p, phi_c)
    scaled_coh = coherent_variance(eta, gain, alpha2) * alpha2
    with np.errstate(invalid="ignore"):
        curve = -10.0 * np.log10(scaled / scaled_coh)
    return phi_p, curve


@dataclass(frozen=True)
class SnriMap:
    """SNRI over both homodyne phases, plus the mean lock signals.

    ``snri_db[i, j]`` corresponds to (phi_p[i], phi_c[j]).  The signal curves
    are the mean homodyne outputs per unit seed amplitude at zero
    interferometer phase: 2 sqrt(eta) cosh(r) cos(phi_p) for the probe and
    2 sqrt(eta) sinh(r) cos(phi_c) for the conjugate; their zero crossings
    with equal slopes mark the lock points of best sensitivity.
    """

    phi_p: np.ndarray
    phi_c: np.ndarray
    snri_db: np.ndarray
    probe_signal: np.ndarray
    conjugate_signal: np.ndarray


def snri_map(r: float, eta: float, grid_deg: float = 1.0) -> SnriMap:
    """SNRI as a function of both homodyne phases for the truncated device."""
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    if grid_deg <= 0:
        raise ValueError(f"grid_deg must be positive, got {grid_deg}")
    n = int(round(360.0 / grid_deg))
    angles = np.linspace(-np.pi, np.pi, n, endpoint=False)
    gain = float(np.cosh(r) ** 2)
    scaled = _scaled_variance_grid(r, eta, angles[:, None], angles[None, :])
    scaled_coh = 1.0 / (2.0 * eta * gain)
    with np.errstate(invalid="ignore"):
        snri = -10.0 * np.log10(scaled / scaled_coh)
    probe_signal = 2.0 * np.sqrt(eta) * np.cosh(r) * np.cos(angles)
    conj_signal = 2.0 * np.sqrt(eta) * np.sinh(r) * np.cos(angles)
    return SnriMap(
        phi_p=angles,
        phi_c=angles.copy(),
        snri_db=snri,
        probe_signal=probe_signal,
        conjugate_signal=conj_signal,
    )
