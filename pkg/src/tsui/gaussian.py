"""Two-mode Gaussian states and the elementary channel operations.

Conventions (single source of truth for the whole package):

* Quadratures are x = a + a' and p = -i(a - a'), so [x, p] = 2i and the
  vacuum has unit variance in every quadrature (cov = identity).
* The mean vector is ordered (x_p, p_p, x_c, p_c) with mode 0 the probe
  (seeded) arm and mode 1 the conjugate (vacuum-seeded) arm.
* A coherent amplitude alpha displaces the mean by (2 Re alpha, 2 Im alpha).
* The two-mode squeezer implements a -> a cosh r + b' sinh r,
  b -> b cosh r + a' sinh r; its quadrature representation is symplectic.
* Loss of transmission eta mixes in vacuum: mean scales by sqrt(eta), the
  mode's covariance block goes to eta*block + (1-eta)*I.

All states are immutable; every operation returns a new state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROBE = "probe"
CONJUGATE = "conjugate"
_MODE_INDEX = {PROBE: 0, CONJUGATE: 1}

# Standard symplectic form for two modes in (x_p, p_p, x_c, p_c) ordering.
OMEGA = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = -1e-9  # eigenvalue floor for cov + i*Omega after long chains


def _mode_slice(mode: str) -> slice:
    try:
        i = _MODE_INDEX[mode]
    except KeyError:
        raise ValueError(f"mode must be 'probe' or 'conjugate', got {mode!r}") from None
    return slice(2 * i, 2 * i + 2)


@dataclass(frozen=True)
class GaussianState:
    """Mean quadrature vector and 4x4 covariance matrix of the two modes."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(4).copy()
        cov = np.asarray(self.cov, dtype=float).reshape(4, 4).copy()
        asym = np.max(np.abs(cov - cov.T))
        if asym > SYMMETRY_TOL:
            raise ValueError(f"covariance not symmetric (max asymmetry {asym:.3e})")
        # Uncertainty relation: cov + i*Omega must be positive semidefinite.
        lo = np.min(np.linalg.eigvalsh(cov + 1j * OMEGA))
        if lo < PHYSICALITY_TOL:
            raise ValueError(f"unphysical covariance (min eigenvalue of cov+iOmega = {lo:.3e})")
        mean.flags.writeable = False
        cov.flags.writeable = False
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def vacuum_state() -> GaussianState:
    """Two-mode vacuum: zero mean, identity covariance."""
    return GaussianState(np.zeros(4), np.eye(4))


def coherent_seed_state(alpha: complex) -> GaussianState:
    """Coherent state of amplitude ``alpha`` in the probe mode, vacuum conjugate."""
    alpha = complex(alpha)
    mean = np.array([2.0 * alpha.real, 2.0 * alpha.imag, 0.0, 0.0])
    return GaussianState(mean, np.eye(4))


def two_mode_squeeze_matrix(r: float) -> np.ndarray:
    """Symplectic matrix of the two-mode squeezer with parameter ``r``."""
    c, s = np.cosh(r), np.sinh(r)
    return np.array(
        [
            [c, 0.0, s, 0.0],
            [0.0, c, 0.0, -s],
            [s, 0.0, c, 0.0],
            [0.0, -s, 0.0, c],
        ]
    )


def phase_shift_matrix(phi: float) -> np.ndarray:
    """2x2 quadrature rotation implementing a -> a e^{i phi}."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, -s], [s, c]])


def _apply_symplectic(state: GaussianState, S: np.ndarray) -> GaussianState:
    return GaussianState(S @ state.mean, S @ state.cov @ S.T)


def apply_two_mode_squeeze(state: GaussianState, r: float) -> GaussianState:
    """Squeeze both modes jointly; negative ``r`` is the inverse squeezer."""
    return _apply_symplectic(state, two_mode_squeeze_matrix(r))


def apply_phase_shift(state: GaussianState, mode: str, phi: float) -> GaussianState:
    """Rotate the selected mode's quadratures by ``phi`` radians."""
    S = np.eye(4)
    sl = _mode_slice(mode)
    S[sl, sl] = phase_shift_matrix(phi)
    return _apply_symplectic(state, S)


def apply_loss(state: GaussianState, mode: str, eta: float) -> GaussianState:
    """Attenuate the selected mode with transmission ``eta`` in [0, 1]."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmission eta must lie in [0, 1], got {eta}")
    X = np.eye(4)
    Y = np.zeros((4, 4))
    sl = _mode_slice(mode)
    X[sl, sl] = np.sqrt(eta) * np.eye(2)
    Y[sl, sl] = (1.0 - eta) * np.eye(2)
    return GaussianState(X @ state.mean, X @ state.cov @ X.T + Y)


def quadrature_stats(state: GaussianState, weights: np.ndarray) -> tuple[float, float]:
    """Mean and variance of the linear quadrature combination u . (x_p, p_p, x_c, p_c).

    A homodyne measurement at local-oscillator phase phi on one mode
    corresponds to weights (cos phi, sin phi) on that mode's pair.
    """
    u = np.asarray(weights, dtype=float).reshape(4)
    return float(u @ state.mean), float(u @ state.cov @ u)


def ladder_moments(state: GaussianState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Complex amplitudes and centered ladder-operator second moments.

    Returns (alpha, C, G) with alpha_i = <a_i>, C_ij = <da_i' da_j> and
    G_ij = <da_i da_j> for da = a - alpha.  These are the raw ingredients of
    the Wick/Isserlis expansion used for photon-number statistics.
    """
    m, cov = state.mean, state.cov
    alpha = np.array([(m[0] + 1j * m[1]) / 2.0, (m[2] + 1j * m[3]) / 2.0])
    C = np.zeros((2, 2), dtype=complex)
    G = np.zeros((2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            sxx = cov[2 * i, 2 * j]
            spp = cov[2 * i + 1, 2 * j + 1]
            sxipj = cov[2 * i, 2 * j + 1]
            sxjpi = cov[2 * j, 2 * i + 1]
            d = 1.0 if i == j else 0.0
            C[i, j] = (sxx + spp - 2.0 * d + 1j * (sxipj - sxjpi)) / 4.0
            G[i, j] = (sxx - spp + 1j * (sxipj + sxjpi)) / 4.0
    return alpha, C, G


def photon_covariance(state: GaussianState) -> np.ndarray:
    """2x2 covariance matrix of the photon numbers (n_probe, n_conjugate).

    Fourth-order quadrature moments reduce to products of second moments plus
    mean terms (Wick's theorem for Gaussian states); written in terms of the
    ladder moments the covariance is

        Cov(n_i, n_j) = 2 Re[a_i* a_j* G_ij] + 2 Re[a_i* a_j conj(C_ij)]
                        + |G_ij|^2 + |C_ij|^2 + delta_ij (|a_i|^2 + C_ii).
    """
    alpha, C, G = ladder_moments(state)
    cov_n = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            d = 1.0 if i == j else 0.0
            cov_n[i, j] = (
                2.0 * np.real(np.conj(alpha[i]) * np.conj(alpha[j]) * G[i, j])
                + 2.0 * np.real(np.conj(alpha[i]) * alpha[j] * np.conj(C[i, j]))
                + abs(G[i, j]) ** 2
                + abs(C[i, j]) ** 2
                + d * (abs(alpha[i]) ** 2 + np.real(C[i, i]))
            )
    return cov_n


def number_stats(state: GaussianState, mode: str) -> tuple[float, float]:
    """Photon-number mean and variance of one mode."""
    i = _MODE_INDEX[mode] if mode in _MODE_INDEX else None
    if i is None:
        raise ValueError(f"mode must be 'probe' or 'conjugate', got {mode!r}")
    alpha, C, _ = ladder_moments(state)
    mean = float(np.real(C[i, i]) + abs(alpha[i]) ** 2)
    var = float(photon_covariance(state)[i, i])
    return mean, var
