import numpy as np
import pytest

from paritylab import DensityMatrix, FockState


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_pure_state(rng, dim):
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return FockState(amps / np.linalg.norm(amps))


def random_density_matrix(rng, dim, rank=3):
    """Convex mixture of random pure states."""
    weights = rng.random(rank)
    weights /= weights.sum()
    rho = np.zeros((dim, dim), dtype=complex)
    for w in weights:
        psi = random_pure_state(rng, dim).amplitudes
        rho += w * np.outer(psi, psi.conj())
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)
