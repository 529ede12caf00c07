from collections import Counter

import numpy as np
import pytest

from stabmagic.cliffords import conjugate_on, random_clifford
from stabmagic.dense import basis_state
from stabmagic.groups import build_normal_state
from stabmagic.measures import pauli_spectrum, y_lin_alpha
from stabmagic.paulis import PauliString, parse_pauli


def all_hermitian_positive(n):
    for xb in range(1 << n):
        for zb in range(1 << n):
            yield PauliString(n, xb, zb, (xb & zb).bit_count() % 4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conjugation_matches_dense_unitary(n):
    for seed in range(6):
        op = random_clifford(n, seed)
        u = op.dense_unitary().matrix
        for p in all_hermitian_positive(n):
            img = op.conjugate_pauli(p)
            assert img.is_hermitian
            assert np.allclose(u @ p.to_matrix() @ u.conj().T, img.to_matrix(), atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conjugation_permutes_paulis(n):
    op = random_clifford(n, 77)
    images = {
        (op.conjugate_pauli(p).x_bits, op.conjugate_pauli(p).z_bits)
        for p in all_hermitian_positive(n)
    }
    assert len(images) == 1 << (2 * n)


def test_seed_determinism():
    t1 = random_clifford(4, 123).action_table()
    t2 = random_clifford(4, 123).action_table()
    assert t1 == t2
    assert random_clifford(4, 124).action_table() != t1


def test_apply_to_state_matches_matrix():
    for n, seed in [(2, 0), (3, 9)]:
        op = random_clifford(n, seed)
        state = basis_state(n, (1 << n) - 2)
        via_chain = op.apply_to_state(state).amplitudes
        via_matrix = op.dense_unitary().matrix @ state.amplitudes
        assert np.allclose(via_chain, via_matrix)


def test_clifford_preserves_stabilizerness():
    grp, state = build_normal_state(1, 2, 1)
    for seed in range(5):
        op = random_clifford(state.n, seed)
        y = y_lin_alpha(pauli_spectrum(op.apply_to_state(state)), 2)
        assert abs(y) < 1e-9


def test_x_image_roughly_uniform():
    counts = Counter()
    for seed in range(3000):
        op = random_clifford(1, seed)
        counts[str(op.conjugate_pauli(PauliString(1, 1, 0, 0)))] += 1
    assert set(counts) == {"+X", "-X", "+Y", "-Y", "+Z", "-Z"}
    for c in counts.values():
        assert 380 <= c <= 620  # 500 expected, ~20 sigma guard band


def test_conjugate_on_subregion():
    op = random_clifford(2, 5)
    u = op.dense_unitary().matrix
    big_u = np.kron(np.eye(4), u)  # qubits 0,1 are the low bits
    for p in [parse_pauli("XZYI"), parse_pauli("-YIIZ"), parse_pauli("IIXX")]:
        img = conjugate_on(p, op, [0, 1])
        assert np.allclose(big_u @ p.to_matrix() @ big_u.conj().T, img.to_matrix(), atol=1e-9)
