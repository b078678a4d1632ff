"""Signal chain of the seeded SU(1,1)-type interferometer and its phase sensitivity.

The chain is: coherent seed -> two-mode squeeze (r) -> phase shift phi on the
probe arm -> internal losses (eta_p1, eta_c1) -> second squeeze (s) ->
external losses (eta_p2, eta_c2).  The truncated device has s = 0 and reads
both arms with homodyne detectors; the full device has s = -r and may use
homodyne or direct intensity detection.

Phase variance is Var(X) / |d<X>/dphi|^2 for the chosen observable X, with
the slope taken by central finite difference (step ``SLOPE_STEP``).  Closed
forms for the common operating points live alongside the numeric path so the
two can be checked against each other.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import SlopeZeroError
from .gaussian import (
    CONJUGATE,
    PROBE,
    GaussianState,
    apply_loss,
    apply_phase_shift,
    apply_two_mode_squeeze,
    coherent_seed_state,
    ladder_moments,
    photon_covariance,
    quadrature_stats,
    two_mode_squeeze_matrix,
)

SLOPE_STEP = 1e-5  # radians; shared with the Fisher-information module
SLOPE_EPS = 1e-12  # absolute floor below which an operating point is insensitive
# Central differences of a stationary mean cancel catastrophically, leaving
# O(|X| * eps / h) of float noise instead of exactly zero; treat slopes below
# this relative level as zero too.
SLOPE_RELATIVE_EPS = 1e-10


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical parameters of the signal chain.

    ``r``/``s`` are the two squeezer parameters, ``phi`` the probe-arm phase,
    ``eta_*1``/``eta_*2`` the internal/external transmissions, ``phi_p``/
    ``phi_c`` the homodyne local-oscillator phases, ``a_p``/``a_c`` the
    detector gain weights and ``alpha2`` the seed photon number |alpha|^2.
    """

    r: float
    alpha2: float
    s: float = 0.0
    phi: float = 0.0
    eta_p1: float = 1.0
    eta_c1: float = 1.0
    eta_p2: float = 1.0
    eta_c2: float = 1.0
    phi_p: float = np.pi / 2
    phi_c: float = np.pi / 2
    a_p: float = 1.0
    a_c: float = 1.0

    def __post_init__(self):
        for name in ("eta_p1", "eta_c1", "eta_p2", "eta_c2"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {val}")
        if self.alpha2 < 0:
            raise ValueError(f"alpha2 must be non-negative, got {self.alpha2}")
        if self.a_p < 0 or self.a_c < 0:
            raise ValueError("gain weights must be non-negative")

    @property
    def gain(self) -> float:
        return float(np.cosh(self.r) ** 2)

    @classmethod
    def from_gain(cls, gain: float, alpha2: float, **kwargs) -> "InterferometerConfig":
        """Build a config from the intensity gain G >= 1 via r = arccosh(sqrt(G))."""
        if gain < 1.0:
            raise ValueError(f"gain must be >= 1, got {gain}")
        return cls(r=float(np.arccosh(np.sqrt(gain))), alpha2=alpha2, **kwargs)

    @classmethod
    def equal_loss(cls, r: float, eta: float, alpha2: float, **kwargs) -> "InterferometerConfig":
        """Equal internal losses on both arms, lossless external stage."""
        return cls(
            r=r, alpha2=alpha2, eta_p1=eta, eta_c1=eta, eta_p2=1.0, eta_c2=1.0, **kwargs
        )


class DetectionScheme(Enum):
    """The five measurement arrangements at the interferometer output."""

    FULL_DUAL_HOMODYNE = "i"
    FULL_CONJ_HOMODYNE = "ii"
    FULL_CONJ_INTENSITY = "iii"
    FULL_DUAL_INTENSITY = "iv"
    TRUNCATED_DUAL_HOMODYNE = "v"

    @property
    def is_homodyne(self) -> bool:
        return self in (
            DetectionScheme.FULL_DUAL_HOMODYNE,
            DetectionScheme.FULL_CONJ_HOMODYNE,
            DetectionScheme.TRUNCATED_DUAL_HOMODYNE,
        )

    @property
    def is_truncated(self) -> bool:
        return self is DetectionScheme.TRUNCATED_DUAL_HOMODYNE

    @property
    def uses_probe_detector(self) -> bool:
        return self in (
            DetectionScheme.FULL_DUAL_HOMODYNE,
            DetectionScheme.FULL_DUAL_INTENSITY,
            DetectionScheme.TRUNCATED_DUAL_HOMODYNE,
        )

    def configure(self, config: InterferometerConfig) -> InterferometerConfig:
        """Fix the second squeezer and the gain weights implied by the scheme."""
        return dataclasses.replace(
            config,
            s=0.0 if self.is_truncated else -config.r,
            a_p=1.0 if self.uses_probe_detector else 0.0,
            a_c=1.0,
        )


@dataclass(frozen=True)
class SensitivityReport:
    """Phase-estimation figures for one operating point."""

    phase_variance: float
    signal_slope: float
    noise_variance: float
    operating_point: tuple
    phi: float


def build_output_state(config: InterferometerConfig) -> GaussianState:
    """Propagate the seeded state through the full chain of the model."""
    state = coherent_seed_state(np.sqrt(config.alpha2))
    state = apply_two_mode_squeeze(state, config.r)
    state = apply_phase_shift(state, PROBE, config.phi)
    state = apply_loss(state, PROBE, config.eta_p1)
    state = apply_loss(state, CONJUGATE, config.eta_c1)
    state = apply_two_mode_squeeze(state, config.s)
    state = apply_loss(state, PROBE, config.eta_p2)
    state = apply_loss(state, CONJUGATE, config.eta_c2)
    return state


def joint_quadrature_weights(
    phi_p: float, phi_c: float, a_p: float = 1.0, a_c: float = 1.0
) -> np.ndarray:
    """Weight vector of the summed homodyne signal A_p j_p(phi_p) + A_c j_c(phi_c)."""
    return np.array(
        [
            a_p * np.cos(phi_p),
            a_p * np.sin(phi_p),
            a_c * np.cos(phi_c),
            a_c * np.sin(phi_c),
        ]
    )


def _phase_independent_pieces(config: InterferometerConfig):
    """Factor the chain around the phase shift: everything after it is affine.

    Returns the post-squeezer moments (m1, sigma1), the linear map applied
    downstream of the rotation and the additive vacuum-noise matrix, so that
    mean(phi) = linear P(phi) m1 and cov(phi) = (linear P) sigma1 (.)^T + added.
    """
    seed = apply_two_mode_squeeze(coherent_seed_state(np.sqrt(config.alpha2)), config.r)
    x1 = np.diag(np.sqrt([config.eta_p1, config.eta_p1, config.eta_c1, config.eta_c1]))
    y1 = np.diag([1 - config.eta_p1, 1 - config.eta_p1, 1 - config.eta_c1, 1 - config.eta_c1])
    x2 = np.diag(np.sqrt([config.eta_p2, config.eta_p2, config.eta_c2, config.eta_c2]))
    y2 = np.diag([1 - config.eta_p2, 1 - config.eta_p2, 1 - config.eta_c2, 1 - config.eta_c2])
    s2 = two_mode_squeeze_matrix(config.s)
    linear = x2 @ s2 @ x1
    added = x2 @ s2 @ y1 @ s2.T @ x2 + y2
    return seed.mean, seed.cov, linear, added


def output_moments_vs_phi(
    config: InterferometerConfig, phi_values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Output mean vectors and covariances for an array of probe phases.

    Everything downstream of the phase shift is phase-independent, so the
    chain factors into an affine map applied to the rotated post-squeezer
    state; this evaluates it vectorized over ``phi_values``.
    """
    phis = np.atleast_1d(np.asarray(phi_values, dtype=float))
    m1, sigma1, linear, added = _phase_independent_pieces(config)

    rot = np.zeros((len(phis), 4, 4))
    rot[:] = np.eye(4)
    c, s = np.cos(phis), np.sin(phis)
    rot[:, 0, 0] = c
    rot[:, 0, 1] = -s
    rot[:, 1, 0] = s
    rot[:, 1, 1] = c

    chain = np.einsum("ij,njk->nik", linear, rot)
    means = chain @ m1
    covs = np.einsum("nij,jk,nlk->nil", chain, sigma1, chain) + added
    return means, covs


def joint_quadrature_vs_phi(
    config: InterferometerConfig, phi_values: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Mean and variance of the summed homodyne signal for an array of probe phases.

    Equivalent to contracting :func:`output_moments_vs_phi` with the weight
    vector, but never materializes the per-phase covariance stack, so it
    scales to Monte-Carlo sample counts.
    """
    phis = np.atleast_1d(np.asarray(phi_values, dtype=float))
    u = joint_quadrature_weights(config.phi_p, config.phi_c, config.a_p, config.a_c)
    m1, sigma1, linear, added = _phase_independent_pieces(config)

    w = linear.T @ u  # weights pulled back through the phase-independent tail
    c, s = np.cos(phis), np.sin(phis)
    # v(phi) = P(phi)^T w rotates only the probe pair
    vp0 = c * w[0] + s * w[1]
    vp1 = -s * w[0] + c * w[1]
    mean = vp0 * m1[0] + vp1 * m1[1] + w[2] * m1[2] + w[3] * m1[3]
    v = np.stack([vp0, vp1, np.broadcast_to(w[2], phis.shape), np.broadcast_to(w[3], phis.shape)])
    var = np.einsum("in,ij,jn->n", v, sigma1, v) + float(u @ added @ u)
    return mean, var


def _slope_guard(slope: float, scale: float, what: str, where: str) -> None:
    if abs(slope) < max(SLOPE_EPS, SLOPE_RELATIVE_EPS * scale):
        raise SlopeZeroError(
            f"operating point {where} is insensitive to the interferometer phase "
            f"(|d<{what}>/dphi| = {abs(slope):.3e})"
        )


def phase_variance_homodyne(config: InterferometerConfig) -> SensitivityReport:
    """Phase variance of the summed homodyne signal at the configured operating point."""
    if config.a_p == 0.0 and config.a_c == 0.0:
        raise ValueError("at least one homodyne gain must be non-zero")
    u = joint_quadrature_weights(config.phi_p, config.phi_c, config.a_p, config.a_c)
    h = SLOPE_STEP
    _, var = quadrature_stats(build_output_state(config), u)
    hi, _ = quadrature_stats(
        build_output_state(dataclasses.replace(config, phi=config.phi + h)), u
    )
    lo, _ = quadrature_stats(
        build_output_state(dataclasses.replace(config, phi=config.phi - h)), u
    )
    slope = (hi - lo) / (2.0 * h)
    _slope_guard(
        slope,
        max(abs(hi), abs(lo)),
        "J",
        f"(phi_p={config.phi_p:.6g}, phi_c={config.phi_c:.6g}, phi={config.phi:.6g})",
    )
    return SensitivityReport(
        phase_variance=var / slope**2,
        signal_slope=slope,
        noise_variance=var,
        operating_point=(config.phi_p, config.phi_c),
        phi=config.phi,
    )


def _number_sum_stats(state: GaussianState, a_p: float, a_c: float) -> tuple[float, float]:
    alpha, C, _ = ladder_moments(state)
    nbar = np.real(np.diag(C)) + np.abs(alpha) ** 2
    ncov = photon_covariance(state)
    mean = a_p * nbar[0] + a_c * nbar[1]
    var = a_p * ncov[0, 0] + a_c * ncov[1, 1] + 2.0 * a_p * a_c * ncov[0, 1]
    return float(mean), float(var)


def phase_variance_direct(config: InterferometerConfig) -> SensitivityReport:
    """Phase variance of the summed photocurrent N = A_p n_p + A_c n_c."""
    if config.a_p not in (0.0, 1.0) or config.a_c not in (0.0, 1.0):
        raise ValueError("direct detection gains must be 0 or 1")
    if config.a_p == 0.0 and config.a_c == 0.0:
        raise ValueError("at least one intensity detector must be on")
    h = SLOPE_STEP
    _, var = _number_sum_stats(build_output_state(config), config.a_p, config.a_c)
    hi, _ = _number_sum_stats(
        build_output_state(dataclasses.replace(config, phi=config.phi + h)),
        config.a_p,
        config.a_c,
    )
    lo, _ = _number_sum_stats(
        build_output_state(dataclasses.replace(config, phi=config.phi - h)),
        config.a_p,
        config.a_c,
    )
    slope = (hi - lo) / (2.0 * h)
    _slope_guard(slope, max(abs(hi), abs(lo)), "N", f"(phi={config.phi:.6g})")
    return SensitivityReport(
        phase_variance=var / slope**2,
        signal_slope=slope,
        noise_variance=var,
        operating_point=(config.phi_p, config.phi_c),
        phi=config.phi,
    )


def sensitivity_report(config: InterferometerConfig, scheme: DetectionScheme) -> SensitivityReport:
    """Evaluate a detection scheme at the configured operating point."""
    cfg = scheme.configure(config)
    if scheme.is_homodyne:
        return phase_variance_homodyne(cfg)
    return phase_variance_direct(cfg)


# ---------------------------------------------------------------------------
# Closed forms


def _check_sin_phi_p(phi_p: float) -> float:
    s = np.sin(phi_p)
    if abs(s) < 1e-12:
        raise SlopeZeroError(f"sin(phi_p) = 0 at phi_p = {phi_p}: insensitive operating point")
    return s


def joint_homodyne_variance(
    r: float, eta: float, phi_p: float, phi_c: float, alpha2: float
) -> float:
    """Truncated-device phase variance at arbitrary homodyne phases (equal internal loss).

    Valid for equal internal transmissions eta on both arms, no external loss
    and a bright seed.
    """
    sp = _check_sin_phi_p(phi_p)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    if alpha2 <= 0 or eta == 0.0:
        raise ValueError("alpha2 and eta must be positive")
    num = (
        2.0 * eta
        + (1.0 - 2.0 * eta) / np.cosh(r) ** 2
        + 2.0 * eta * np.cos(phi_p + phi_c) * np.tanh(r)
    )
    return num / (2.0 * alpha2 * eta * sp**2)


def truncated_homodyne_variance(r: float, eta: float, phi_p: float, alpha2: float) -> float:
    """Joint-quadrature phase variance with the conjugate locked to its phase quadrature."""
    return joint_homodyne_variance(r, eta, phi_p, np.pi / 2, alpha2)


def optimal_homodyne_variance(r: float, eta: float, alpha2: float) -> float:
    """Best joint-quadrature phase variance (phi_p = phi_c = pi/2)."""
    return joint_homodyne_variance(r, eta, np.pi / 2, np.pi / 2, alpha2)


def conjugate_intensity_variance(r: float, alpha2: float) -> float:
    """Lossless best-point variance when only the conjugate output is detected.

    Applies to both intensity detection and single-homodyne readout of the
    conjugate mode of the full device.
    """
    s2r = np.sinh(2.0 * r)
    if s2r == 0.0:
        raise SlopeZeroError("no signal without gain (r = 0)")
    return 1.0 / (s2r**2 * alpha2)


def dual_intensity_variance(r: float, alpha2: float) -> float:
    """Lossless best-point variance for intensity detection of both outputs."""
    s2r = np.sinh(2.0 * r)
    if s2r == 0.0:
        raise SlopeZeroError("no signal without gain (r = 0)")
    return (2.0 * np.cosh(4.0 * r) + np.sqrt(np.cosh(8.0 * r)) - 1.0) / (2.0 * s2r**4 * alpha2)


def internal_loss_variance(r: float, eta_int: float, alpha2: float) -> float:
    """Best-point joint-quadrature variance with internal loss only."""
    if not 0.0 < eta_int <= 1.0:
        raise ValueError(f"eta_int must lie in (0, 1], got {eta_int}")
    th = np.tanh(r)
    return (
        np.exp(-r)
        / np.cosh(r)
        * (1.0 + th - 2.0 * eta_int * th)
        / (2.0 * eta_int * alpha2)
    )


def external_loss_variance(r: float, eta_ext: float, alpha2: float) -> float:
    """Best-point joint-quadrature variance of the full device with external loss only."""
    if not 0.0 < eta_ext <= 1.0:
        raise ValueError(f"eta_ext must lie in (0, 1], got {eta_ext}")
    bracket = 1.0 + np.cosh(2.0 * r) + np.sinh(2.0 * r)
    return 2.0 / (eta_ext * alpha2 * bracket**2)


_CLOSED_FORMS = {
    "joint-homodyne": (joint_homodyne_variance, ("r", "eta", "phi_p", "phi_c", "alpha2")),
    "truncated-homodyne": (truncated_homodyne_variance, ("r", "eta", "phi_p", "alpha2")),
    "conjugate-intensity": (conjugate_intensity_variance, ("r", "alpha2")),
    "dual-intensity": (dual_intensity_variance, ("r", "alpha2")),
    "internal-loss": (internal_loss_variance, ("r", "eta_int", "alpha2")),
    "external-loss": (external_loss_variance, ("r", "eta_ext", "alpha2")),
}


def closed_form_sensitivity(formula: str, params: dict) -> float:
    """Evaluate one of the named closed forms from a parameter dict."""
    try:
        fn, names = _CLOSED_FORMS[formula]
    except KeyError:
        raise ValueError(
            f"unknown formula {formula!r}; choose from {sorted(_CLOSED_FORMS)}"
        ) from None
    missing = [n for n in names if n not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise ValueError(f"formula {formula!r} needs {names}; missing {missing}, extra {extra}")
    return fn(**{n: params[n] for n in names})


# ---------------------------------------------------------------------------
# Operating-point optimization


def _golden_minimize(fn, lo: float, hi: float, iterations: int = 40) -> float:
    """Plain golden-section minimum of a unimodal scalar function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iterations):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return (a + b) / 2.0


def _batch_photon_sum(means: np.ndarray, covs: np.ndarray, a_p: float, a_c: float):
    """Vectorized mean and variance of N = A_p n_p + A_c n_c over stacked states."""
    alpha = 0.5 * (means[:, 0::2] + 1j * means[:, 1::2])  # (N, 2)
    sxx = covs[:, 0::2, 0::2]
    spp = covs[:, 1::2, 1::2]
    sxp = covs[:, 0::2, 1::2]  # sigma_{x_i p_j}
    eye = np.eye(2)
    C = (sxx + spp - 2.0 * eye + 1j * (sxp - np.swapaxes(sxp, 1, 2))) / 4.0
    G = (sxx - spp + 1j * (sxp + np.swapaxes(sxp, 1, 2))) / 4.0
    nbar = np.real(np.einsum("nii->ni", C)) + np.abs(alpha) ** 2
    ac = np.conj(alpha)
    ncov = (
        2.0 * np.real(ac[:, :, None] * ac[:, None, :] * G)
        + 2.0 * np.real(ac[:, :, None] * alpha[:, None, :] * np.conj(C))
        + np.abs(G) ** 2
        + np.abs(C) ** 2
        + eye * (np.abs(alpha[:, :, None]) ** 2 + np.real(np.einsum("nii->ni", C))[:, :, None])
    )
    w = np.array([a_p, a_c])
    mean = nbar @ w
    var = np.einsum("i,nij,j->n", w, ncov, w)
    return mean, var


def _optimize_homodyne_point(
    config: InterferometerConfig, grid: int
) -> tuple[float, float]:
    """Grid scan plus coordinate golden refinement of (phi_p, phi_c)."""
    h = SLOPE_STEP
    means, covs = output_moments_vs_phi(
        config, np.array([config.phi - h, config.phi, config.phi + h])
    )
    dmean = (means[2] - means[0]) / (2.0 * h)
    sigma = covs[1]
    app = sigma[0:2, 0:2]
    acc = sigma[2:4, 2:4]
    apc = sigma[0:2, 2:4]
    gp, gc = config.a_p, config.a_c

    def variance_ratio(phi_p, phi_c):
        up = np.stack([np.cos(phi_p), np.sin(phi_p)], axis=-1)
        uc = np.stack([np.cos(phi_c), np.sin(phi_c)], axis=-1)
        var = (
            gp**2 * np.einsum("...i,ij,...j->...", up, app, up)
            + 2.0 * gp * gc * np.einsum("...i,ij,...j->...", up, apc, uc)
            + gc**2 * np.einsum("...i,ij,...j->...", uc, acc, uc)
        )
        slope = gp * up @ dmean[0:2] + gc * uc @ dmean[2:4]
        with np.errstate(divide="ignore", invalid="ignore"):
            pv = np.where(np.abs(slope) > SLOPE_EPS, var / slope**2, np.inf)
        return pv

    # Scan [0, 2pi) so that degenerate optima resolve to the +pi/2 branch.
    angles = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    span = 2.0 * np.pi / grid
    if gp == 0.0 or gc == 0.0:
        # Single detector: the other phase is irrelevant, scan one axis only.
        fixed = np.pi / 2
        if gp == 0.0:
            pv = variance_ratio(fixed, angles)
            best_c = angles[int(np.argmin(pv))]
            best_c = _golden_minimize(
                lambda x: float(variance_ratio(fixed, x)), best_c - span, best_c + span
            )
            return fixed, _wrap_angle(best_c)
        pv = variance_ratio(angles, fixed)
        best_p = angles[int(np.argmin(pv))]
        best_p = _golden_minimize(
            lambda x: float(variance_ratio(x, fixed)), best_p - span, best_p + span
        )
        return _wrap_angle(best_p), fixed

    pp, pc = np.meshgrid(angles, angles, indexing="ij")
    pv = variance_ratio(pp, pc)
    i, j = np.unravel_index(np.argmin(pv), pv.shape)
    best_p, best_c = angles[i], angles[j]

    for _ in range(3):
        best_p = _golden_minimize(
            lambda x: float(variance_ratio(x, best_c)), best_p - span, best_p + span
        )
        best_c = _golden_minimize(
            lambda x: float(variance_ratio(best_p, x)), best_c - span, best_c + span
        )
    return _wrap_angle(best_p), _wrap_angle(best_c)


def _wrap_angle(phi: float) -> float:
    """Map an angle into (-pi, pi]."""
    wrapped = float(np.mod(phi + np.pi, 2.0 * np.pi) - np.pi)
    return np.pi if wrapped == -np.pi else wrapped


def _optimize_direct_phase(config: InterferometerConfig, grid: int) -> float:
    """Scan the interferometer phase for the best direct-detection point."""
    h = SLOPE_STEP
    phis = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)

    def variance_ratio(phi_arr):
        phi_arr = np.atleast_1d(phi_arr)
        stacked = np.concatenate([phi_arr - h, phi_arr, phi_arr + h])
        means, covs = output_moments_vs_phi(config, stacked)
        n = len(phi_arr)
        mean_all, var_all = _batch_photon_sum(means, covs, config.a_p, config.a_c)
        slope = (mean_all[2 * n :] - mean_all[:n]) / (2.0 * h)
        var = var_all[n : 2 * n]
        scale = np.maximum(np.abs(mean_all[2 * n :]), np.abs(mean_all[:n]))
        ok = np.abs(slope) > np.maximum(SLOPE_EPS, SLOPE_RELATIVE_EPS * scale)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(ok, var / slope**2, np.inf)

    pv = variance_ratio(phis)
    if not np.isfinite(pv).any():
        raise SlopeZeroError("no phase-sensitive operating point exists (no signal)")
    best = phis[int(np.argmin(pv))]
    span = 2.0 * np.pi / grid
    return _wrap_angle(
        _golden_minimize(lambda x: float(variance_ratio(x)[0]), best - span, best + span)
    )


def optimal_operating_point(
    config: InterferometerConfig, scheme: DetectionScheme, grid: int = 360
) -> tuple[float, float, SensitivityReport]:
    """Find the most phase-sensitive operating point for a detection scheme.

    For homodyne schemes the local-oscillator phases are scanned at fixed
    interferometer phase; for direct detection the interferometer phase
    itself is scanned.  Returns the minimizing homodyne phases and the report
    evaluated there.
    """
    cfg = scheme.configure(config)
    if scheme.is_homodyne:
        best_p, best_c = _optimize_homodyne_point(cfg, grid)
        report = phase_variance_homodyne(
            dataclasses.replace(cfg, phi_p=best_p, phi_c=best_c)
        )
        return best_p, best_c, report
    best_phi = _optimize_direct_phase(cfg, grid)
    report = phase_variance_direct(dataclasses.replace(cfg, phi=best_phi))
    return cfg.phi_p, cfg.phi_c, report


# ---------------------------------------------------------------------------
# Gain sweep (lossless scheme comparison)

_SCHEME_ORDER = [
    DetectionScheme.FULL_DUAL_HOMODYNE,
    DetectionScheme.FULL_CONJ_HOMODYNE,
    DetectionScheme.FULL_CONJ_INTENSITY,
    DetectionScheme.FULL_DUAL_INTENSITY,
    DetectionScheme.TRUNCATED_DUAL_HOMODYNE,
]

_SCHEME_STEM = {
    DetectionScheme.FULL_DUAL_HOMODYNE: "homodyne_full",
    DetectionScheme.FULL_CONJ_HOMODYNE: "homodyne_conjugate",
    DetectionScheme.FULL_CONJ_INTENSITY: "intensity_conjugate",
    DetectionScheme.FULL_DUAL_INTENSITY: "intensity_dual",
    DetectionScheme.TRUNCATED_DUAL_HOMODYNE: "homodyne_truncated",
}

GAIN_SWEEP_GRID = 180  # coarse scan is enough here; golden refinement sets precision


def gain_sweep_columns(schemes) -> list[str]:
    return (
        ["gain"]
        + [f"closed_{_SCHEME_STEM[s]}" for s in schemes]
        + [f"numeric_{_SCHEME_STEM[s]}" for s in schemes]
        + ["qfi_limit"]
    )


GAIN_SWEEP_COLUMNS = gain_sweep_columns(_SCHEME_ORDER)


def _closed_form_optimum(scheme: DetectionScheme, r: float, alpha2: float) -> float:
    if scheme.is_homodyne and scheme.uses_probe_detector:
        return optimal_homodyne_variance(r, 1.0, alpha2)
    if scheme is DetectionScheme.FULL_DUAL_INTENSITY:
        return dual_intensity_variance(r, alpha2)
    return conjugate_intensity_variance(r, alpha2)


def _gain_sweep_row(gain: float, alpha2: float, schemes, grid: int) -> list[float]:
    from .fisher import qfi

    r = float(np.arccosh(np.sqrt(gain)))
    closed = []
    for scheme in schemes:
        try:
            closed.append(_closed_form_optimum(scheme, r, alpha2) * alpha2)
        except SlopeZeroError:
            closed.append(np.inf)
    numeric = []
    config = InterferometerConfig(r=r, alpha2=alpha2)
    for scheme in schemes:
        try:
            _, _, report = optimal_operating_point(config, scheme, grid=grid)
            numeric.append(report.phase_variance * alpha2)
        except SlopeZeroError:
            numeric.append(np.inf)
    return [gain, *closed, *numeric, alpha2 / qfi(r, alpha2)]


def gain_sweep_table(
    gains,
    alpha2: float = 1e6,
    schemes=None,
    grid: int = GAIN_SWEEP_GRID,
    workers: int | None = None,
) -> tuple[list[str], list[list[float]]]:
    """Scaled phase variance |alpha|^2 * var of each scheme at its best point, per gain.

    Lossless chain; closed forms and full numeric optimizations side by side,
    plus the fundamental bound alpha2/F_Q.  ``schemes`` defaults to all five;
    ``workers`` caps row parallelism.
    """
    gains = [float(g) for g in gains]
    if any(g < 1.0 for g in gains):
        raise ValueError("gains must be >= 1")
    schemes = list(_SCHEME_ORDER) if schemes is None else list(schemes)
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda g: _gain_sweep_row(g, alpha2, schemes, grid), gains))
    else:
        rows = [_gain_sweep_row(g, alpha2, schemes, grid) for g in gains]
    return gain_sweep_columns(schemes), rows
