"""Workbench for non-stabilizerness ("magic") in qubit systems."""

from .cliffords import CliffordOp, random_clifford
from .dense import (
    Caps,
    DEFAULT_CAPS,
    DenseState,
    DenseUnitary,
    apply_on_qubits,
    brickwork_apply,
    build_nonstab_state,
    choi_state,
    haar_unitary,
    named_gate,
)
from .groups import (
    CosetDecomposition,
    StabilizerGroup,
    TripartiteShape,
    build_normal_state,
    build_tripartite_state,
    canonicalize,
    coset_decompose,
    entanglement_entropy,
    ghz_group,
    group_to_state,
    parse_state_spec,
)
from .harness import (
    ExperimentConfig,
    ResultRecord,
    compare_mc_exact,
    read_records,
    run_experiment,
    write_records,
)
from .measures import (
    BoundReport,
    MagicReport,
    PauliSpectrum,
    coset_reduced_y,
    m_alpha,
    magic_report,
    pauli_spectrum,
    t_count_bounds,
    unitary_nullity,
    unitary_sre,
    y_lin_alpha,
)
from .paulis import PauliString, apply_pauli, commutes, parse_pauli, pauli_mul
from .theory import ScenarioDims, exact_average_y, leading_average_y, weingarten4

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
