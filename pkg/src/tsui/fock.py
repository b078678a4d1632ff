"""Brute-force verification layer on a truncated two-mode Fock space.

Everything here is computed from number-state amplitudes, independently of
the symplectic algebra in :mod:`tsui.gaussian`: the squeezer is the
normal-ordered operator product applied term by term, losses act either as
binomial thinning on exact pre-loss moments or as an explicit Kraus sum on a
dense density operator, and photon statistics are plain sums over |psi|^2.
Agreement between the two pipelines is the package's main correctness check.

The squeezer uses the disentangled form

    exp[r (a'b' - ab)] = exp(T a'b') (sech r)^(n_a + n_b + 1) exp(-T ab),

with T = tanh r.  The lowering series and the diagonal factor are exact on
the truncated space; amplitude raised past the cutoff by the final factor is
dropped, so the norm deficit directly measures the truncation error (no
renormalization is ever applied).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TruncationInadequateError

PREPARE_DEFICIT_TOL = 1e-8
SQUEEZE_DEFICIT_TOL = 1e-6
DENSE_CUTOFF_LIMIT = 15
_SERIES_EPS = 1e-24  # squared-amplitude floor for terminating operator series

_MODE_AXIS = {"probe": 0, "conjugate": 1}


@dataclass(frozen=True)
class FockState:
    """Complex amplitude tensor indexed (n_probe, n_conjugate)."""

    amplitudes: np.ndarray
    cutoff: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.cutoff < 1:
            raise ValueError("cutoff must be at least 1")
        if amps.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(f"amplitude tensor must be {(self.cutoff + 1,) * 2}, got {amps.shape}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    @property
    def norm_deficit(self) -> float:
        return 1.0 - self.norm


def fock_prepare(alpha: complex, cutoff: int = 40) -> FockState:
    """Coherent state of amplitude ``alpha`` in the probe mode, vacuum conjugate."""
    alpha = complex(alpha)
    if abs(alpha) ** 2 > cutoff / 4.0:
        raise TruncationInadequateError(
            f"|alpha|^2 = {abs(alpha)**2:.3g} exceeds cutoff/4 = {cutoff / 4.0:.3g}"
        )
    coeffs = np.zeros(cutoff + 1, dtype=complex)
    coeffs[0] = np.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(cutoff):
        coeffs[n + 1] = coeffs[n] * alpha / np.sqrt(n + 1.0)
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[:, 0] = coeffs
    state = FockState(amps, cutoff)
    if state.norm_deficit > PREPARE_DEFICIT_TOL:
        raise TruncationInadequateError(
            f"coherent preparation lost {state.norm_deficit:.3e} of norm at cutoff {cutoff}"
        )
    return state


def _pair_lower(amps: np.ndarray) -> np.ndarray:
    """Apply ab: result[n, m] = sqrt((n+1)(m+1)) amps[n+1, m+1]."""
    c = amps.shape[0] - 1
    out = np.zeros_like(amps)
    n = np.arange(1, c + 1)
    w = np.sqrt(np.outer(n, n))
    out[: c, : c] = w * amps[1:, 1:]
    return out


def _pair_raise(amps: np.ndarray) -> np.ndarray:
    """Apply a'b': result[n, m] = sqrt(n m) amps[n-1, m-1]; overflow is dropped."""
    c = amps.shape[0] - 1
    out = np.zeros_like(amps)
    n = np.arange(1, c + 1)
    w = np.sqrt(np.outer(n, n))
    out[1:, 1:] = w * amps[: c, : c]
    return out


def _operator_series(amps: np.ndarray, coeff: float, op) -> np.ndarray:
    """Evaluate exp(coeff * op) amps as a power series, term by term."""
    total = amps.copy()
    term = amps
    k = 0
    while True:
        k += 1
        term = (coeff / k) * op(term)
        total += term
        if np.sum(np.abs(term) ** 2) < _SERIES_EPS * max(np.sum(np.abs(total) ** 2), 1e-30):
            return total
        if k > 10_000:  # pragma: no cover - series always terminates long before
            raise RuntimeError("squeezer series failed to converge")


def fock_two_mode_squeeze(state: FockState, r: float) -> FockState:
    """Exact truncated two-mode squeeze; norm deficit reports truncation loss."""
    if r == 0.0:
        return state
    t = np.tanh(r)
    psi = _operator_series(np.asarray(state.amplitudes), -t, _pair_lower)
    n = np.arange(state.cutoff + 1)
    psi = psi * (1.0 / np.cosh(r)) ** (n[:, None] + n[None, :] + 1)
    psi = _operator_series(psi, t, _pair_raise)
    out = FockState(psi, state.cutoff)
    if out.norm_deficit > SQUEEZE_DEFICIT_TOL:
        raise TruncationInadequateError(
            f"squeeze lost {out.norm_deficit:.3e} of norm at cutoff {state.cutoff}"
        )
    return out


def fock_phase_shift(state: FockState, mode: str, phi: float) -> FockState:
    """Multiply amplitudes by e^{i phi n} on the selected mode (a -> a e^{i phi})."""
    if mode not in _MODE_AXIS:
        raise ValueError(f"mode must be 'probe' or 'conjugate', got {mode!r}")
    phase = np.exp(1j * phi * np.arange(state.cutoff + 1))
    if _MODE_AXIS[mode] == 0:
        amps = phase[:, None] * state.amplitudes
    else:
        amps = state.amplitudes * phase[None, :]
    return FockState(amps, state.cutoff)


# ---------------------------------------------------------------------------
# Moments


@dataclass(frozen=True)
class FockMoments:
    """First/second ladder and photon-number moments of a (possibly mixed) state.

    ``first``   : (<a>, <b>)
    ``normal``  : N_ij = <a_i' a_j>
    ``anomal``  : A_ij = <a_i a_j>  (symmetric)
    ``nsq``     : (<n_p^2>, <n_c^2>)
    ``ncross``  : <n_p n_c>
    """

    first: np.ndarray
    normal: np.ndarray
    anomal: np.ndarray
    nsq: np.ndarray
    ncross: float

    def attenuate(self, mode: str, eta: float) -> "FockMoments":
        """Moments after a beamsplitter of transmission ``eta`` on one mode.

        Ladder moments scale with sqrt(eta) per lost index; the photon-number
        distribution undergoes binomial thinning, so
        <n^2> -> eta^2 <n^2> + eta(1-eta) <n> and <n_p n_c> -> eta <n_p n_c>.
        """
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"transmission eta must lie in [0, 1], got {eta}")
        if mode not in _MODE_AXIS:
            raise ValueError(f"mode must be 'probe' or 'conjugate', got {mode!r}")
        i = _MODE_AXIS[mode]
        rt = np.sqrt(eta)
        scale = np.ones(2)
        scale[i] = rt
        first = self.first * scale
        normal = self.normal * np.outer(scale, scale)
        anomal = self.anomal * np.outer(scale, scale)
        nsq = self.nsq.copy()
        nsq[i] = eta**2 * self.nsq[i] + eta * (1.0 - eta) * np.real(self.normal[i, i])
        return FockMoments(first, normal, anomal, nsq, eta * self.ncross)

    def quadrature_mean(self) -> np.ndarray:
        a, b = self.first
        return np.array([2 * a.real, 2 * a.imag, 2 * b.real, 2 * b.imag])

    def quadrature_cov(self) -> np.ndarray:
        """4x4 symmetrized quadrature covariance in (x_p, p_p, x_c, p_c) order."""
        dN = self.normal - np.outer(np.conj(self.first), self.first)
        dA = self.anomal - np.outer(self.first, self.first)
        cov = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                d = 1.0 if i == j else 0.0
                cov[2 * i, 2 * j] = 2 * np.real(dA[i, j]) + 2 * np.real(dN[i, j]) + d
                cov[2 * i + 1, 2 * j + 1] = -2 * np.real(dA[i, j]) + 2 * np.real(dN[i, j]) + d
                cov[2 * i, 2 * j + 1] = 2 * np.imag(dA[i, j]) + 2 * np.imag(dN[i, j])
                cov[2 * i + 1, 2 * j] = 2 * np.imag(dA[j, i]) + 2 * np.imag(dN[j, i])
        return cov

    def number_means(self) -> np.ndarray:
        return np.real(np.diag(self.normal))

    def number_vars(self) -> np.ndarray:
        return self.nsq - self.number_means() ** 2

    def number_cov(self) -> float:
        means = self.number_means()
        return float(self.ncross - means[0] * means[1])


def moments(state: FockState) -> FockMoments:
    """All tracked moments of a pure truncated state, by direct contraction."""
    psi = np.asarray(state.amplitudes)
    c = state.cutoff
    n = np.arange(c + 1, dtype=float)
    prob = np.abs(psi) ** 2
    pn_p = prob.sum(axis=1)
    pn_c = prob.sum(axis=0)

    rtn = np.sqrt(n[1:])  # sqrt(1..c)
    a_mean = np.sum(np.conj(psi[: c, :]) * rtn[:, None] * psi[1:, :])
    b_mean = np.sum(np.conj(psi[:, : c]) * rtn[None, :] * psi[:, 1:])

    # <a'a>, <b'b>, <a'b> and the anomalous pair moments
    naa = float(np.sum(n * pn_p))
    nbb = float(np.sum(n * pn_c))
    nab = np.sum(
        np.conj(psi[1:, : c]) * np.sqrt(np.outer(n[1:], n[1:])) * psi[: c, 1:]
    )  # <a' b>: lowers b, raises a on the ket side
    rt2 = np.sqrt(n[1:-1] * n[2:])  # sqrt((k+1)(k+2)) for k = 0..c-2
    a2 = np.sum(np.conj(psi[: c - 1, :]) * rt2[:, None] * psi[2:, :])
    b2 = np.sum(np.conj(psi[:, : c - 1]) * rt2[None, :] * psi[:, 2:])
    ab = np.sum(np.conj(psi[: c, : c]) * np.sqrt(np.outer(n[1:], n[1:])) * psi[1:, 1:])

    first = np.array([a_mean, b_mean])
    normal = np.array([[naa, nab], [np.conj(nab), nbb]], dtype=complex)
    anomal = np.array([[a2, ab], [ab, b2]], dtype=complex)
    nsq = np.array([float(np.sum(n**2 * pn_p)), float(np.sum(n**2 * pn_c))])
    ncross = float(np.einsum("n,m,nm->", n, n, prob))
    return FockMoments(first, normal, anomal, nsq, ncross)


def fock_loss(state_or_moments, mode: str, eta: float) -> FockMoments:
    """Moments after loss on one mode; accepts a pure state or prior moments."""
    m = moments(state_or_moments) if isinstance(state_or_moments, FockState) else state_or_moments
    return m.attenuate(mode, eta)


# ---------------------------------------------------------------------------
# Dense density-operator path (secondary check, small cutoffs only)


def loss_moments_dense(state: FockState, eta_p: float, eta_c: float) -> FockMoments:
    """Moments after loss on both modes via an explicit Kraus sum on the density operator.

    Materializes the full (cutoff+1)^2-dimensional density matrix; guarded to
    small cutoffs.  Exists purely to cross-check the thinning path.
    """
    if state.cutoff > DENSE_CUTOFF_LIMIT:
        raise ValueError(
            f"dense density-operator path is limited to cutoff <= {DENSE_CUTOFF_LIMIT}"
        )
    dim = state.cutoff + 1
    psi = np.asarray(state.amplitudes).reshape(dim * dim)
    rho = np.outer(psi, np.conj(psi))

    for axis, eta in ((0, eta_p), (1, eta_c)):
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"transmission eta must lie in [0, 1], got {eta}")
        kraus = _single_mode_kraus(eta, state.cutoff)
        new = np.zeros_like(rho)
        for K in kraus:
            Kfull = np.kron(K, np.eye(dim)) if axis == 0 else np.kron(np.eye(dim), K)
            new += Kfull @ rho @ Kfull.conj().T
        rho = new

    return _moments_from_density(rho, state.cutoff)


def _single_mode_kraus(eta: float, cutoff: int) -> list[np.ndarray]:
    dim = cutoff + 1
    ops = []
    for k in range(dim):
        K = np.zeros((dim, dim))
        for n in range(k, dim):
            K[n - k, n] = np.sqrt(_binom(n, k) * eta ** (n - k) * (1.0 - eta) ** k)
        ops.append(K)
    return ops


def _binom(n: int, k: int) -> float:
    out = 1.0
    for i in range(k):
        out *= (n - i) / (i + 1.0)
    return out


def _moments_from_density(rho: np.ndarray, cutoff: int) -> FockMoments:
    dim = cutoff + 1
    a1 = np.diag(np.sqrt(np.arange(1, dim)), 1)  # annihilation on one mode
    eye = np.eye(dim)
    A = np.kron(a1, eye)
    B = np.kron(eye, a1)
    Np = A.conj().T @ A
    Nc = B.conj().T @ B

    def ev(op):
        return complex(np.trace(rho @ op))

    first = np.array([ev(A), ev(B)])
    normal = np.array(
        [[ev(A.conj().T @ A), ev(A.conj().T @ B)], [ev(B.conj().T @ A), ev(B.conj().T @ B)]]
    )
    anomal = np.array([[ev(A @ A), ev(A @ B)], [ev(A @ B), ev(B @ B)]])
    nsq = np.array([np.real(ev(Np @ Np)), np.real(ev(Nc @ Nc))])
    ncross = float(np.real(ev(Np @ Nc)))
    return FockMoments(first, normal, anomal, nsq, ncross)


# ---------------------------------------------------------------------------
# Gaussian cross-check


@dataclass(frozen=True)
class DiscrepancyEntry:
    r: float
    alpha: float
    eta: float
    quantity: str
    gaussian_value: float
    fock_value: float

    @property
    def difference(self) -> float:
        return self.fock_value - self.gaussian_value


@dataclass(frozen=True)
class DiscrepancyReport:
    entries: list
    tolerance: float

    @property
    def max_abs_discrepancy(self) -> float:
        return max(abs(e.difference) for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.max_abs_discrepancy < self.tolerance

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "max_abs_discrepancy": self.max_abs_discrepancy,
            "entries": [
                {
                    "r": e.r,
                    "alpha": e.alpha,
                    "eta": e.eta,
                    "quantity": e.quantity,
                    "gaussian": e.gaussian_value,
                    "fock": e.fock_value,
                    "difference": e.difference,
                }
                for e in self.entries
            ],
        }


def compare_to_gaussian(
    r_values=(0.1, 0.3, 0.6),
    alpha_values=(0.0, 0.5, 1.0),
    eta_values=(1.0, 0.7),
    cutoff: int = 40,
    phi: float = 0.0,
    tolerance: float = 1e-6,
) -> DiscrepancyReport:
    """Run seed -> squeeze -> phase -> loss through both pipelines and diff all moments."""
    from . import gaussian as g

    entries = []
    labels = ["x_p", "p_p", "x_c", "p_c"]
    for r in r_values:
        for alpha in alpha_values:
            for eta in eta_values:
                gs = g.coherent_seed_state(alpha)
                gs = g.apply_two_mode_squeeze(gs, r)
                gs = g.apply_phase_shift(gs, g.PROBE, phi)
                gs = g.apply_loss(gs, g.PROBE, eta)
                gs = g.apply_loss(gs, g.CONJUGATE, eta)
                n_cov_g = g.photon_covariance(gs)
                n_means_g = [g.number_stats(gs, m)[0] for m in (g.PROBE, g.CONJUGATE)]

                fs = fock_prepare(alpha, cutoff)
                fs = fock_two_mode_squeeze(fs, r)
                fs = fock_phase_shift(fs, "probe", phi)
                fm = fock_loss(fs, "probe", eta).attenuate("conjugate", eta)

                point = dict(r=float(r), alpha=float(alpha), eta=float(eta))
                fmean, fcov = fm.quadrature_mean(), fm.quadrature_cov()
                for i in range(4):
                    entries.append(
                        DiscrepancyEntry(
                            **point,
                            quantity=f"mean[{labels[i]}]",
                            gaussian_value=float(gs.mean[i]),
                            fock_value=float(fmean[i]),
                        )
                    )
                for i in range(4):
                    for j in range(i, 4):
                        entries.append(
                            DiscrepancyEntry(
                                **point,
                                quantity=f"cov[{labels[i]},{labels[j]}]",
                                gaussian_value=float(gs.cov[i, j]),
                                fock_value=float(fcov[i, j]),
                            )
                        )
                fns = fm.number_means()
                fnv = fm.number_vars()
                for k, mode in enumerate(("probe", "conjugate")):
                    entries.append(
                        DiscrepancyEntry(
                            **point,
                            quantity=f"n_mean[{mode}]",
                            gaussian_value=float(n_means_g[k]),
                            fock_value=float(fns[k]),
                        )
                    )
                    entries.append(
                        DiscrepancyEntry(
                            **point,
                            quantity=f"n_var[{mode}]",
                            gaussian_value=float(n_cov_g[k, k]),
                            fock_value=float(fnv[k]),
                        )
                    )
                entries.append(
                    DiscrepancyEntry(
                        **point,
                        quantity="n_cov[probe,conjugate]",
                        gaussian_value=float(n_cov_g[0, 1]),
                        fock_value=fm.number_cov(),
                    )
                )
    return DiscrepancyReport(entries, tolerance)
