"""Shared test oracles built from explicit matrices, independent of the
package's fast paths."""

import itertools

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLE = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def kron_pauli(letters: str) -> np.ndarray:
    """Dense matrix of a Pauli word, qubit 0 leftmost == lowest index bit."""
    mat = np.eye(1, dtype=complex)
    for c in letters:
        mat = np.kron(SINGLE[c], mat)  # qubit j owns bit j of the index
    return mat


def all_pauli_words(n: int):
    yield from ("".join(w) for w in itertools.product("IXYZ", repeat=n))


def brute_y_lin(state_vec: np.ndarray, alpha: int = 2) -> float:
    """Direct enumeration oracle: 1 - 2^-n sum_P <psi|P|psi>^(2 alpha)."""
    n = int(np.log2(state_vec.size))
    total = 0.0
    for word in all_pauli_words(n):
        val = np.real(state_vec.conj() @ kron_pauli(word) @ state_vec)
        total += val ** (2 * alpha)
    return 1.0 - total / 2**n


def brute_unitary_weights(u: np.ndarray) -> np.ndarray:
    """Literal double sum p_ij = tr(P_i U P_j U+)^2 / 2^{4m} (test oracle)."""
    m = int(np.log2(u.shape[0]))
    words = list(all_pauli_words(m))
    p = np.empty((len(words), len(words)))
    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            tr = np.trace(kron_pauli(wi) @ u @ kron_pauli(wj) @ u.conj().T)
            p[i, j] = abs(tr) ** 2 / 2 ** (4 * m)
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
