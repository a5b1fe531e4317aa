import numpy as np
import pytest

from qnt.pauli import PauliChannel, PauliVector1Q


def random_channel(
    rng: np.random.Generator, nonzero: bool = False, min_q: float = 1e-3
) -> PauliChannel:
    """Random CP Pauli channel via Dirichlet-distributed Kraus probabilities.

    With ``nonzero`` the draw is rejected until every |q| >= min_q, matching
    the standing assumption that characterizable channels have nonzero
    parameters (and keeping ratio estimators numerically well conditioned).
    """
    while True:
        p_i, p_x, p_y, p_z = rng.dirichlet(np.ones(4))
        ch = PauliChannel.from_probabilities(p_x, p_y, p_z)
        if not nonzero or all(abs(q) >= min_q for q in ch.q):
            return ch


def random_state(rng: np.random.Generator) -> PauliVector1Q:
    """Random physical one-qubit state, uniform over the Bloch ball."""
    vec = rng.normal(size=3)
    vec /= np.linalg.norm(vec)
    radius = rng.random() ** (1.0 / 3.0)
    return PauliVector1Q.from_bloch(*(radius * vec))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
