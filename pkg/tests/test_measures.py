import math

import numpy as np
import pytest

from stabmagic.cliffords import random_clifford
from stabmagic.dense import (
    DenseState,
    apply_on_qubits,
    basis_state,
    choi_state,
    haar_unitary,
    named_gate,
)
from stabmagic.errors import ToleranceError
from stabmagic.groups import build_normal_state, coset_decompose
from stabmagic.harness import random_clifford_t_circuit
from stabmagic.measures import (
    coset_reduced_y,
    m_alpha,
    pauli_spectrum,
    t_count_bounds,
    unitary_nullity,
    unitary_sre,
    y_lin_alpha,
)
from stabmagic.paulis import parse_pauli

from conftest import all_pauli_words, brute_unitary_weights, brute_y_lin, kron_pauli


def t_plus_state():
    plus = apply_on_qubits(basis_state(1), named_gate("H"), [0])
    return apply_on_qubits(plus, named_gate("T"), [0])


def test_spectrum_zero_state():
    spec = pauli_spectrum(basis_state(1))
    assert spec.value(parse_pauli("I")) == pytest.approx(1.0)
    assert spec.value(parse_pauli("Z")) == pytest.approx(1.0)
    assert spec.value(parse_pauli("X")) == pytest.approx(0.0)
    assert spec.value(parse_pauli("Y")) == pytest.approx(0.0)
    assert spec.value(parse_pauli("-Z")) == pytest.approx(-1.0)


def test_spectrum_t_plus_against_matrix_oracle():
    state = t_plus_state()
    spec = pauli_spectrum(state)
    for word in ("I", "X", "Y", "Z"):
        oracle = np.real(state.amplitudes.conj() @ kron_pauli(word) @ state.amplitudes)
        assert spec.value(parse_pauli(word)) == pytest.approx(oracle, abs=1e-12)
    assert spec.value(parse_pauli("X")) == pytest.approx(1 / math.sqrt(2))
    assert spec.value(parse_pauli("Y")) == pytest.approx(1 / math.sqrt(2))
    assert spec.value(parse_pauli("Z")) == pytest.approx(0.0, abs=1e-12)


def test_spectrum_bell_entries():
    bell = DenseState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    spec = pauli_spectrum(bell)
    big = {w: spec.value(parse_pauli(w)) for w in all_pauli_words(2)}
    nonzero = {w: v for w, v in big.items() if abs(v) > 1e-12}
    assert set(nonzero) == {"II", "XX", "YY", "ZZ"}
    assert nonzero["YY"] == pytest.approx(-1.0)
    assert all(abs(abs(v) - 1) < 1e-12 for v in nonzero.values())


def test_spectrum_matches_enumeration_on_random_states(rng):
    for n in (2, 3):
        amps = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        state = DenseState.from_unnormalized(n, amps)
        spec = pauli_spectrum(state)
        for word in all_pauli_words(n):
            oracle = np.real(state.amplitudes.conj() @ kron_pauli(word) @ state.amplitudes)
            assert spec.value(parse_pauli(word)) == pytest.approx(oracle, abs=1e-10)


def test_y_lin_t_plus_quarter():
    spec = pauli_spectrum(t_plus_state())
    assert y_lin_alpha(spec, 2) == pytest.approx(0.25, abs=1e-12)
    assert brute_y_lin(t_plus_state().amplitudes, 2) == pytest.approx(0.25, abs=1e-12)
    assert m_alpha(spec, 2) == pytest.approx(math.log2(4 / 3), abs=1e-12)


def test_y_lin_faithfulness_on_stabilizer_states():
    grp, state = build_normal_state(1, 1, 1)
    spec = pauli_spectrum(state)
    for alpha in (1, 2, 3, math.inf):
        assert abs(y_lin_alpha(spec, alpha)) < 1e-9
    with pytest.raises(ValueError):
        y_lin_alpha(spec, 0)


def test_y_alpha_agrees_with_enumeration(rng):
    state = DenseState.from_unnormalized(2, rng.standard_normal(4) + 1j * rng.standard_normal(4))
    spec = pauli_spectrum(state)
    for alpha in (2, 3):
        assert y_lin_alpha(spec, alpha) == pytest.approx(
            brute_y_lin(state.amplitudes, alpha), abs=1e-10
        )


def test_t_injection_produces_magic():
    # faithfulness is two-sided: T on one qubit of a normal form gives Y > 1e-3
    grp, state = build_normal_state(1, 1, 1)
    injected = apply_on_qubits(state, named_gate("T"), [0])
    assert y_lin_alpha(pauli_spectrum(injected), 2) > 1e-3


def test_spectrum_cap_and_mismatch_errors():
    from stabmagic.dense import Caps
    from stabmagic.errors import DimensionMismatchError, ResourceCapError

    with pytest.raises(ResourceCapError):
        pauli_spectrum(basis_state(4), Caps(spectrum_qubits=3))
    grp, _ = build_normal_state(1, 1, 1)
    dec = coset_decompose(grp, [0, 1])
    with pytest.raises(DimensionMismatchError):
        coset_reduced_y(dec, named_gate("T"))


def test_m_alpha_infinity_sentinel():
    # a synthetic spectrum with vanishing 4th moment drives Y -> 1
    from stabmagic.measures import PauliSpectrum

    values = np.zeros(4)
    values[0] = 1.0  # identity only; not a physical pure state, but exercises the sentinel
    spec = PauliSpectrum(1, values)
    assert y_lin_alpha(spec, 2) == pytest.approx(1 - 1 / 2)
    spec_all_tiny = PauliSpectrum(2, np.full(16, 0.25))
    assert m_alpha(spec_all_tiny, 2) < math.inf
    degenerate = PauliSpectrum(1, np.zeros(4))
    assert y_lin_alpha(degenerate, 2) == 1.0
    assert m_alpha(degenerate, 2) == math.inf


def test_m2_of_t_choi():
    spec = pauli_spectrum(choi_state(named_gate("T")))
    assert m_alpha(spec, 2) == pytest.approx(math.log2(4 / 3), abs=1e-12)


def test_unitary_sre_t_gate():
    assert unitary_sre(named_gate("T"), 2) == pytest.approx(math.log2(4 / 3), abs=1e-12)
    assert unitary_sre(named_gate("T"), 0) == pytest.approx(math.log2(3 / 2), abs=1e-12)


def test_unitary_sre_t_against_literal_double_sum():
    p = brute_unitary_weights(named_gate("T").matrix)
    assert np.count_nonzero(p > 1e-10) == 6
    h2_oracle = -math.log2(float(np.sum(p**2))) - 2
    assert unitary_sre(named_gate("T"), 2) == pytest.approx(h2_oracle, abs=1e-12)


def test_unitary_sre_clifford_zero():
    for gate in ("S", "H", "CZ"):
        for alpha in (0, 2, math.inf):
            assert abs(unitary_sre(named_gate(gate), alpha)) < 1e-9
    op = random_clifford(2, 3)
    for alpha in (0, 2):
        assert abs(unitary_sre(op.dense_unitary(), alpha)) < 1e-9


@pytest.mark.parametrize("m", [1, 2])
def test_theorem2_equality_enforced_internally(m, rng):
    # unitary_sre raises if the direct and Choi routes disagree; also check
    # against the literal double-sum oracle
    for _ in range(3):
        u = haar_unitary(m, rng)
        p_oracle = brute_unitary_weights(u.matrix)
        h2 = unitary_sre(u, 2)
        assert h2 == pytest.approx(-math.log2(float(np.sum(p_oracle**2))) - 2 * m, abs=1e-9)


def test_sre_monotone_in_alpha(rng):
    for m in (1, 2):
        u = haar_unitary(m, rng)
        h0, h2, hinf = unitary_sre(u, 0), unitary_sre(u, 2), unitary_sre(u, math.inf)
        assert hinf <= h2 + 1e-12 <= h0 + 1e-12


def test_nullity_values():
    assert unitary_nullity(named_gate("S")) == 0
    assert unitary_nullity(named_gate("CZ")) == 0
    assert unitary_nullity(named_gate("T")) == 1
    assert unitary_nullity(named_gate("Tn:2")) == 2
    assert unitary_nullity(named_gate("CS")) == 2
    op = random_clifford(2, 11)
    assert unitary_nullity(op.dense_unitary()) == 0


def test_nullity_t_conjugation_oracle():
    # conjugate the 4 Paulis by T explicitly: only I and Z stay Pauli
    t = named_gate("T").matrix
    preserved = []
    for w in ("I", "X", "Y", "Z"):
        img = t @ kron_pauli(w) @ t.conj().T
        coeffs = [abs(np.trace(kron_pauli(v) @ img)) / 2 for v in ("I", "X", "Y", "Z")]
        if max(coeffs) > 1 - 1e-9:
            preserved.append(w)
    assert preserved == ["I", "Z"]


def test_nullity_closure_guard():
    # small local Z rotations: X_0 and X_1 pass a loose threshold (|c| = 0.921)
    # but their product only reaches 0.921^2, so the collected set is not a group
    import numpy as np
    from stabmagic.dense import DenseUnitary

    rz = np.diag([np.exp(0.2j), np.exp(-0.2j)])
    u = DenseUnitary(2, np.kron(rz, rz))
    assert unitary_nullity(u, tol=1e-6) == 2  # only the diagonal Paulis survive
    with pytest.raises(ToleranceError):
        unitary_nullity(u, tol=0.1)


def test_t_count_bounds_on_t():
    rep = t_count_bounds(named_gate("T"))
    assert rep.h2 == pytest.approx(math.log2(4 / 3), abs=1e-12)
    assert rep.h0 == pytest.approx(math.log2(3 / 2), abs=1e-12)
    assert rep.nullity == 1
    assert rep.t_lower == 1
    assert rep.h2 <= rep.h0 <= rep.nullity <= 1


def test_t_count_bounds_clifford():
    rep = t_count_bounds(named_gate("CZ"))
    assert (rep.h0, rep.h2, rep.nullity, rep.t_lower) == (0.0, 0.0, 0, 0)


def test_bound_chain_random_clifford_t(rng):
    for trial in range(10):
        n = int(rng.integers(1, 3))
        t_gates = int(rng.integers(0, 4))
        u = random_clifford_t_circuit(n, t_gates, rng)
        rep = t_count_bounds(u)
        assert rep.h0 <= rep.nullity + 1e-9
        assert rep.nullity <= t_gates


def test_coset_reduced_matches_brute(rng):
    for (na, e, nb) in [(2, 0, 2), (2, 1, 3), (2, 2, 4), (3, 1, 3)]:
        grp, state = build_normal_state(na - e, e, nb - e)
        dec = coset_decompose(grp, range(na))
        for _ in range(3):
            u = haar_unitary(na, rng)
            brute = y_lin_alpha(pauli_spectrum(apply_on_qubits(state, u, range(na))), 2)
            assert coset_reduced_y(dec, u) == pytest.approx(brute, abs=1e-8)


def test_coset_reduced_clifford_gives_zero():
    grp, _ = build_normal_state(1, 1, 2)
    dec = coset_decompose(grp, [0, 1])
    u = random_clifford(2, 4).dense_unitary()
    assert abs(coset_reduced_y(dec, u)) < 1e-9
