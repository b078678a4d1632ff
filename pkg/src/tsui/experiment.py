"""Monte-Carlo model of the laboratory measurement chain.

A weak sinusoidal phase modulation phi(t) = sqrt(2) dphi cos(2 pi Omega t)
rides on the probe arm; the summed homodyne photocurrent is sampled as
independent Gaussian draws at the instantaneous operating point (the noise
floor at the measurement frequency is white), and the tone's SNR in a
resolution bandwidth is estimated from a Welch periodogram.

Discrete-time photon accounting: a coherent probe of optical power P sampled
at rate f_s carries alpha2 = 2 rho P / (e f_s) photons per sample in the
equivalent-noise-bandwidth convention used here, which makes the analytic SNR
in bandwidth B equal to (dphi)^2 N_p with N_p = 2 eta rho P / (e B).
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.signal import welch

from .errors import InsufficientDataError
from .interferometer import (
    InterferometerConfig,
    joint_quadrature_vs_phi,
    phase_variance_homodyne,
)

ELEMENTARY_CHARGE = 1.602176634e-19  # C
SMALL_SIGNAL_LIMIT = 0.05  # rad; beyond this the slope linearization degrades


@dataclass(frozen=True)
class ModulationConfig:
    """Phase-modulation drive and acquisition settings."""

    delta_phi: float  # RMS modulation amplitude, radians
    omega: float  # modulation frequency, Hz
    sample_rate: float  # Hz
    duration: float  # s
    rbw: float  # resolution bandwidth, Hz
    seed: int = 0

    def __post_init__(self):
        if self.delta_phi < 0:
            raise ValueError(f"delta_phi must be non-negative, got {self.delta_phi}")
        if self.sample_rate <= 2.0 * self.omega:
            raise ValueError("sample_rate must exceed twice the modulation frequency")
        if self.rbw > self.omega:
            raise ValueError("rbw must not exceed the modulation frequency")
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.delta_phi > SMALL_SIGNAL_LIMIT:
            warnings.warn(
                f"delta_phi = {self.delta_phi} rad exceeds the small-signal regime "
                f"({SMALL_SIGNAL_LIMIT} rad); the slope linearization degrades",
                stacklevel=2,
            )

    @property
    def n_samples(self) -> int:
        return int(round(self.duration * self.sample_rate))


@dataclass(frozen=True)
class CalibrationInputs:
    """Photon-number calibration of a directly measured coherent beam."""

    eta_coh: float  # detection transmission
    responsivity: float  # A/W at unit quantum efficiency
    power: float  # probe optical power, W
    bandwidth: float  # equivalent noise bandwidth, Hz
    charge: float = ELEMENTARY_CHARGE

    def __post_init__(self):
        for name in ("eta_coh", "responsivity", "power", "bandwidth", "charge"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def photons_from_power(cal: CalibrationInputs) -> float:
    """Detected photon number N_p = 2 eta_coh rho P / (e B)."""
    return 2.0 * cal.eta_coh * cal.responsivity * cal.power / (cal.charge * cal.bandwidth)


def expected_coherent_snr_db(cal: CalibrationInputs, delta_phi: float) -> float:
    """Predicted SNR (dB) of a coherent-beam measurement, (dphi)^2 N_p."""
    if delta_phi <= 0:
        raise ValueError(f"delta_phi must be positive, got {delta_phi}")
    return float(10.0 * np.log10(delta_phi**2 * photons_from_power(cal)))


def seed_photons_for_rate(cal: CalibrationInputs, sample_rate: float) -> float:
    """Per-sample photon number 2 rho P / (e f_s) of the discrete-time model."""
    if sample_rate <= 0:
        raise ValueError(f"sample_rate must be positive, got {sample_rate}")
    return 2.0 * cal.responsivity * cal.power / (cal.charge * sample_rate)


def simulate_homodyne_timeseries(
    config: InterferometerConfig, mod: ModulationConfig
) -> np.ndarray:
    """Sampled joint-homodyne photocurrent under sinusoidal phase modulation.

    Each sample is an independent normal draw with the exact Gaussian-model
    mean and variance at the instantaneous phase; the sequence is fully
    determined by ``mod.seed``.
    """
    n = mod.n_samples
    t = np.arange(n) / mod.sample_rate
    phis = config.phi + np.sqrt(2.0) * mod.delta_phi * np.cos(2.0 * np.pi * mod.omega * t)
    mean, var = joint_quadrature_vs_phi(config, phis)
    rng = np.random.default_rng(mod.seed)
    return mean + np.sqrt(var) * rng.standard_normal(n)


def averaged_periodogram(
    samples: np.ndarray, sample_rate: float, rbw: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Hann-window Welch power spectral density sized for resolution ``rbw``.

    The segment length targets four bins per resolution bandwidth (capped so
    at least ~8 segments are averaged).  Returns (freqs, psd, n_segments).
    """
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    duration = n / sample_rate
    if duration * rbw < 10.0:
        raise InsufficientDataError(
            f"need duration * rbw >= 10 independent noise estimates, got {duration * rbw:.2f}"
        )
    nperseg = int(min(4.0 * sample_rate / rbw, n // 4))
    nperseg = max(nperseg, 64)
    noverlap = nperseg // 2
    freqs, psd = welch(
        samples,
        fs=sample_rate,
        window="hann",
        nperseg=nperseg,
        noverlap=noverlap,
        detrend="constant",
        scaling="density",
    )
    n_segments = 1 + (n - nperseg) // (nperseg - noverlap)
    return freqs, psd, n_segments


def estimate_snr(
    samples: np.ndarray, sample_rate: float, omega: float, rbw: float
) -> float:
    """Tone SNR in bandwidth ``rbw`` from a Hann-window Welch periodogram, in dB.

    The tone power is integrated over the spectral main lobe around ``omega``
    (the density scaling makes this window-gain free), the noise density is
    the median of the neighboring bins corrected for the chi-square median
    bias of the segment average, and the ratio is referenced to noise power
    in ``rbw``.  Returns -inf when no tone power is found above the floor.
    """
    freqs, psd, n_segments = averaged_periodogram(samples, sample_rate, rbw)
    df = freqs[1] - freqs[0]
    offset = np.abs(freqs - omega)
    peak = offset <= 4.05 * df
    guard = offset <= 8.0 * df
    neighbors = (~guard) & (offset <= 200.0 * df) & (freqs > 2.0 * df)
    if np.count_nonzero(neighbors) < 16:
        neighbors = (~guard) & (freqs > 2.0 * df)

    dof = 2.0 * n_segments
    median_bias = (1.0 - 2.0 / (9.0 * dof)) ** 3
    noise_density = float(np.median(psd[neighbors])) / median_bias

    tone_power = max(float(np.sum(psd[peak] - noise_density) * df), 0.0)
    with np.errstate(divide="ignore"):
        return float(10.0 * np.log10(tone_power / (noise_density * rbw)))


def analytic_snr_db(config: InterferometerConfig, mod: ModulationConfig) -> float:
    """Model-predicted tone SNR (dphi)^2 f_s / (2 rbw Var_phi) in dB."""
    report = phase_variance_homodyne(config)
    snr = mod.delta_phi**2 * mod.sample_rate / (2.0 * mod.rbw * report.phase_variance)
    return float(10.0 * np.log10(snr))


def coherent_twin(config: InterferometerConfig) -> InterferometerConfig:
    """Coherent reference with the same detected probe power, at its best point."""
    return dataclasses.replace(
        config,
        r=0.0,
        s=0.0,
        alpha2=config.gain * config.alpha2,
        phi_p=np.pi / 2,
        phi_c=np.pi / 2,
    )


def run_experiment(config: InterferometerConfig, mod: ModulationConfig) -> dict:
    """Simulate one acquisition and report analytic versus estimated SNR."""
    samples = simulate_homodyne_timeseries(config, mod)
    return {
        "analytic_snr_db": analytic_snr_db(config, mod),
        "estimated_snr_db": estimate_snr(samples, mod.sample_rate, mod.omega, mod.rbw),
        "n_samples": mod.n_samples,
        "seed": mod.seed,
    }


def paired_experiment(config: InterferometerConfig, mod: ModulationConfig) -> dict:
    """Squeezed acquisition and its equal-probe-power coherent reference.

    The coherent run uses ``mod.seed + 1`` so the two noise realizations are
    independent but still fully determined by the scenario.
    """
    squeezed = run_experiment(config, mod)
    coherent = run_experiment(
        coherent_twin(config), dataclasses.replace(mod, seed=mod.seed + 1)
    )
    return {
        "squeezed": squeezed,
        "coherent": coherent,
        "analytic_snri_db": squeezed["analytic_snr_db"] - coherent["analytic_snr_db"],
        "estimated_snri_db": squeezed["estimated_snr_db"] - coherent["estimated_snr_db"],
    }
