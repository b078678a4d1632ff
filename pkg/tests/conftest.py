import numpy as np
import pytest

from tsui import gaussian as g


def random_pure_state(rng: np.random.Generator) -> g.GaussianState:
    """Random two-mode pure Gaussian state (unitary chain on a coherent seed)."""
    state = g.coherent_seed_state(rng.uniform(-2, 2) + 1j * rng.uniform(-2, 2))
    state = g.apply_two_mode_squeeze(state, rng.uniform(-1.0, 1.0))
    state = g.apply_phase_shift(state, g.PROBE, rng.uniform(-np.pi, np.pi))
    state = g.apply_phase_shift(state, g.CONJUGATE, rng.uniform(-np.pi, np.pi))
    state = g.apply_two_mode_squeeze(state, rng.uniform(-0.5, 0.5))
    return state


def random_state(rng: np.random.Generator) -> g.GaussianState:
    """Random physical Gaussian state, generally mixed (loss in the chain)."""
    state = random_pure_state(rng)
    state = g.apply_loss(state, g.PROBE, rng.uniform(0.2, 1.0))
    state = g.apply_loss(state, g.CONJUGATE, rng.uniform(0.2, 1.0))
    state = g.apply_phase_shift(state, g.PROBE, rng.uniform(-np.pi, np.pi))
    return state


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
