"""Shared fixtures: dense single-qubit matrices and common state builders."""

import numpy as np
import pytest

from fermidope import GaussianUnitary, ortho
from fermidope.states import StateVector, embed_with_zero_tail, product, random_state

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
LETTER = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def kron_chain(letters: str) -> np.ndarray:
    """Dense matrix of a Pauli word, qubit 1 leftmost."""
    out = np.array([[1.0 + 0j]])
    for letter in letters:
        out = np.kron(out, LETTER[letter])
    return out


def tplus_state(n: int = 1) -> StateVector:
    """n-fold product of the single-qubit magic state T|+>."""
    one = StateVector(1, np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2))
    out = one
    for _ in range(n - 1):
        out = product(out, one)
    return out


def compressible_fixture(n: int, t: int, seed: int):
    """Exactly t-compressible state G(phi (x) 0^(n-t)) with known parts."""
    rng = np.random.default_rng(seed)
    g = GaussianUnitary(ortho.random_orthogonal(2 * n, rng))
    phi = random_state(t, rng)
    return g.apply(embed_with_zero_tail(phi, n)), g, phi


def doped_sweep_cells():
    """(n, kappa, t) grid with kappa * t <= n; the compression sweep."""
    cells = []
    for n in (4, 6, 8):
        for kappa in (3, 4):
            for t in (0, 1, 2):
                if kappa * t <= n:
                    cells.append((n, kappa, t))
    return cells


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)
