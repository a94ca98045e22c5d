import numpy as np
import pytest

from dicke_echo.model import DickeParams

FIG = dict(omega=1.0, omega0=1.44, n_atoms=100, delta_tilde=0.001)


@pytest.fixture
def fig_params():
    """Reference parameter set (omega0=1.44, N=100, delta_tilde=0.001), coupling to be filled in."""
    return DickeParams(g=0.0, **FIG)


def two_mode_variance(omega, omega0, g, cutoff=28):
    """Photon-number variance of the ground state of two linearly coupled
    oscillators, by brute-force diagonalization in a truncated Fock space."""
    n = np.arange(cutoff + 1)
    a = np.diag(np.sqrt(n[1:]), 1)
    eye = np.eye(cutoff + 1)
    x = a + a.T
    h = (omega * np.kron(np.diag(n), eye) + omega0 * np.kron(eye, np.diag(n))
         + g * np.kron(x, x))
    _, vecs = np.linalg.eigh(h)
    psi = vecs[:, 0].reshape(cutoff + 1, cutoff + 1)
    p = (psi**2).sum(axis=1)
    mean = p @ n
    return p @ (n - mean) ** 2


def gaussian_photon_variance(stiffness, omega):
    """Photon-number variance of the ground state of H = (p^T p + x^T K x)/2,
    with the photon quadrature x[0] of frequency ``omega``, from Wick's theorem."""
    evals, evecs = np.linalg.eigh(stiffness)
    inv_root = evecs @ np.diag(evals**-0.5) @ evecs.T
    root = evecs @ np.diag(evals**0.5) @ evecs.T
    xx = 0.5 * inv_root[0, 0]
    pp = 0.5 * root[0, 0]
    mean = 0.5 * (omega * xx + pp / omega) - 0.5
    squeeze = 0.5 * (omega * xx - pp / omega)
    return squeeze**2 + mean**2 + mean, xx
