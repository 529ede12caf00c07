"""Pauli spectra and magic measures for states and unitaries.

State measures run through the Pauli spectrum tr(P rho); the associated
probability distribution Xi_P = tr(P rho)^2 / 2^n (purity makes it normalized)
feeds every Renyi order. Unitary measures run through the distribution
p_ij = tr(P_i U P_j U+)^2 / 2^{4m}, which coincides with the Xi-distribution
of U's Choi state; the two routes are computed independently and compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _f2
from .dense import Caps, DEFAULT_CAPS, DenseState, DenseUnitary, choi_state
from .errors import DimensionMismatchError, ResourceCapError, ToleranceError
from .groups import CosetDecomposition
from .paulis import PauliString

ZERO_WEIGHT_THRESHOLD = 1e-10  # on Xi / p_ij when counting nonzero weights
UNIT_MAGNITUDE_TOL = 1e-7      # |tr| == 1 detection for alpha = infinity

# L[d, 2r + c] = sigma_d[c, r]; digit order (I, X, Z, Y) = x_bit + 2 z_bit
_TRACE_KERNEL = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [1, 0, 0, -1],
        [0, 1j, -1j, 0],
    ],
    dtype=complex,
)


def spectrum_index(n: int, x_bits: int, z_bits: int) -> int:
    """Flat index of a Pauli in spectrum order: base-4 digits x + 2z per
    qubit, little-endian."""
    k = 0
    for j in range(n):
        k += (((x_bits >> j) & 1) + 2 * ((z_bits >> j) & 1)) << (2 * j)
    return k


@dataclass(frozen=True, eq=False)
class PauliSpectrum:
    """All 4^n expectations tr(P rho) of the positive Hermitian Paulis."""

    n: int
    values: np.ndarray

    def index_of(self, x_bits: int, z_bits: int) -> int:
        return spectrum_index(self.n, x_bits, z_bits)

    def value(self, p: PauliString) -> float:
        """Expectation of the signed Hermitian Pauli ``p``."""
        return p.sign * float(self.values[self.index_of(p.x_bits, p.z_bits)])

    def weights(self) -> np.ndarray:
        """Normalized distribution Xi_P = tr(P rho)^2 / 2^n."""
        return self.values**2 / (1 << self.n)


def pauli_transform(matrix: np.ndarray, n: int) -> np.ndarray:
    """tr(P M) for all 4^n Hermitian Paulis P, via n qubit-local contractions
    in O(n 4^n); returns the complex values flattened in spectrum order."""
    t = matrix.reshape([2] * (2 * n))
    # interleave (row_j, col_j) axes and merge each pair into one base-4 axis
    perm = []
    for j in range(n):
        perm.extend((j, n + j))
    t = t.transpose(perm).reshape([4] * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(_TRACE_KERNEL, t, axes=(1, axis)), 0, axis)
    return t.reshape(-1)


def pauli_spectrum(state: DenseState, caps: Caps = DEFAULT_CAPS) -> PauliSpectrum:
    """Spectrum of a pure state; asserts the imaginary residue stays below
    1e-9 and the identity / purity invariants hold."""
    if state.n > caps.spectrum_qubits:
        raise ResourceCapError(f"{state.n}-qubit spectrum exceeds cap {caps.spectrum_qubits}")
    raw = pauli_transform(state.density_matrix(), state.n)
    resid = float(np.max(np.abs(raw.imag)))
    if resid > 1e-9:
        raise ToleranceError(f"imaginary residue {resid} in Pauli spectrum")
    values = np.ascontiguousarray(raw.real)
    if abs(values[0] - 1.0) > 1e-9:
        raise ToleranceError(f"identity expectation {values[0]} != 1")
    purity = float(np.sum(values**2)) / (1 << state.n)
    if abs(purity - 1.0) > 1e-9:
        raise ToleranceError(f"spectrum purity {purity} != 1 (state not pure?)")
    return PauliSpectrum(state.n, values)


# ---------------------------------------------------------------------------
# State measures
# ---------------------------------------------------------------------------

def y_lin_alpha(spec: PauliSpectrum, alpha=2) -> float:
    """Generalized linear stabilizer entropy
    Y_alpha = 1 - 2^{-n} sum_P tr(P rho)^{2 alpha}; alpha=2 is the default
    Y_lin, alpha=inf counts unit-magnitude expectations."""
    if alpha == math.inf:
        survivors = int(np.count_nonzero(np.abs(spec.values) >= 1 - UNIT_MAGNITUDE_TOL))
        return 1.0 - survivors / (1 << spec.n)
    if not (isinstance(alpha, (int, np.integer)) and alpha >= 1):
        raise ValueError(f"alpha must be a positive integer or inf, got {alpha}")
    return 1.0 - float(np.sum(spec.values ** (2 * int(alpha)))) / (1 << spec.n)


def _renyi_bits(weights: np.ndarray, alpha) -> float:
    """Renyi-alpha entropy (base 2) of a normalized weight vector."""
    if alpha == 0:
        return math.log2(int(np.count_nonzero(weights > ZERO_WEIGHT_THRESHOLD)))
    if alpha == 1:
        w = weights[weights > 0]
        return float(-np.sum(w * np.log2(w)))
    if alpha == math.inf:
        return -math.log2(float(np.max(weights)))
    return math.log2(float(np.sum(weights ** alpha))) / (1 - alpha)


def m_alpha(spec: PauliSpectrum, alpha=2) -> float:
    """Stabilizer Renyi entropy in bits: the Renyi-alpha entropy of the Xi
    distribution minus n. M_2 = -log2(1 - Y_lin); infinite when Y_alpha = 1."""
    if alpha in (0, 1, math.inf):
        return _renyi_bits(spec.weights(), alpha) - spec.n
    y = y_lin_alpha(spec, alpha)
    if y >= 1.0:
        return math.inf
    return math.log2(1.0 - y) / (1 - int(alpha))


@dataclass(frozen=True)
class MagicReport:
    y_lin: float
    m2: float
    y_inf: float
    y_alpha: dict = field(default_factory=dict)


def magic_report(state: DenseState, alphas=(), caps: Caps = DEFAULT_CAPS) -> MagicReport:
    spec = pauli_spectrum(state, caps)
    return MagicReport(
        y_lin=y_lin_alpha(spec, 2),
        m2=m_alpha(spec, 2),
        y_inf=y_lin_alpha(spec, math.inf),
        y_alpha={a: y_lin_alpha(spec, a) for a in alphas},
    )


# ---------------------------------------------------------------------------
# Unitary measures
# ---------------------------------------------------------------------------

def _all_paulis(m: int):
    for z_bits in range(1 << m):
        for x_bits in range(1 << m):
            yield PauliString(m, x_bits, z_bits, (x_bits & z_bits).bit_count() % 4)


def conjugation_weights(u: DenseUnitary) -> np.ndarray:
    """Distribution p_ij = tr(P_i U P_j U+)^2 / 2^{4m} as a (4^m, 4^m) array
    (row = P_i in spectrum order), one conjugation plus one Pauli transform
    per column."""
    m = u.m
    out = np.empty((1 << (2 * m), 1 << (2 * m)))
    udag = u.matrix.conj().T
    for p in _all_paulis(m):
        conj = u.matrix @ p.to_matrix() @ udag
        traces = pauli_transform(conj, m)
        out[:, spectrum_index(m, p.x_bits, p.z_bits)] = np.abs(traces) ** 2 / float(
            1 << (4 * m)
        )
    return out


def unitary_sre(u: DenseUnitary, alpha=2, caps: Caps = DEFAULT_CAPS) -> float:
    """Unitary stabilizer Renyi entropy H_alpha in bits.

    The direct double-Pauli route and the Choi-state route are computed
    independently and must agree within 1e-9; the direct value is returned.
    """
    if 2 * u.m > caps.spectrum_qubits:
        raise ResourceCapError(f"Choi spectrum needs {2 * u.m} qubits > cap")
    p = conjugation_weights(u)
    direct = _renyi_bits(p.reshape(-1), alpha) - 2 * u.m
    via_choi = m_alpha(pauli_spectrum(choi_state(u, caps), caps), alpha)
    if abs(direct - via_choi) > 1e-9:
        raise ToleranceError(
            f"H_alpha mismatch: direct {direct} vs Choi {via_choi} at alpha={alpha}"
        )
    return direct


def unitary_nullity(u: DenseUnitary, tol: float = 1e-6) -> int:
    """2m - log2 |s(U)| where s(U) holds the Paulis mapped to a single signed
    Pauli. Membership requires one conjugation coefficient of magnitude
    >= 1 - tol; the collected set must close under multiplication, otherwise
    the tolerance classified inconsistently and we fail loudly."""
    m = u.m
    dim = 1 << m
    udag = u.matrix.conj().T
    members: list[int] = []
    for p in _all_paulis(m):
        conj = u.matrix @ p.to_matrix() @ udag
        coeffs = np.abs(pauli_transform(conj, m)) / dim
        if float(np.max(coeffs)) >= 1 - tol:
            members.append(p.x_bits | (p.z_bits << m))
    vecs = set(members)
    basis: list[int] = []
    for v in members:
        _f2.insert_row(v, basis)
    if len(vecs) != (1 << len(basis)):
        raise ToleranceError(
            f"preserved set of size {len(vecs)} has rank {len(basis)}: not a group; "
            "tolerance too loose"
        )
    return 2 * m - len(basis)


@dataclass(frozen=True)
class BoundReport:
    h0: float
    h2: float
    nullity: int
    t_lower: int


def t_count_bounds(u: DenseUnitary, caps: Caps = DEFAULT_CAPS) -> BoundReport:
    """Lower-bound chain H_2 <= H_0 <= nullity for the T-count."""
    h0 = unitary_sre(u, 0, caps)
    h2 = unitary_sre(u, 2, caps)
    nullity = unitary_nullity(u)
    if not (h2 <= h0 + 1e-9 and h0 <= nullity + 1e-9):
        raise ToleranceError(f"bound chain violated: H2={h2}, H0={h0}, nullity={nullity}")
    return BoundReport(h0=h0, h2=h2, nullity=nullity, t_lower=math.ceil(h0 - 1e-9))


# ---------------------------------------------------------------------------
# Coset-reduced per-sample estimator
# ---------------------------------------------------------------------------

def coset_reduced_y(decomp: CosetDecomposition, u_a: DenseUnitary) -> float:
    """Per-sample Y_lin of (U_A (x) I_B) applied to the decomposed stabilizer
    state, without touching B's exponential:

        1 - Y = 2^{-5|A| - E} sum_{P_A} sum_k tr(P_A U_A a_k S_A U_A+)^4,

    where a_k S_A denotes the coset sum (2^{|A|-E} times the coset projector).
    Only the |A|-qubit register is ever materialized.
    """
    n_a = len(decomp.cut_a)
    if u_a.m != n_a:
        raise DimensionMismatchError(f"unitary acts on {u_a.m} qubits, cut has {n_a}")
    e = decomp.entanglement
    dim = 1 << n_a
    proj = np.eye(dim, dtype=complex)
    for g in decomp.s_a.generators:
        proj = proj @ (np.eye(dim) + g.to_matrix()) / 2
    subgroup_sum = proj * (1 << decomp.s_a.dim)
    udag = u_a.matrix.conj().T
    total = 0.0
    for a_rep, _ in decomp.coset_representatives():
        conj = u_a.matrix @ (a_rep.to_matrix() @ subgroup_sum) @ udag
        traces = pauli_transform(conj, n_a)
        resid = float(np.max(np.abs(traces.imag)))
        if resid > 1e-8:
            raise ToleranceError(f"coset trace residue {resid}")
        total += float(np.sum(traces.real**4))
    return 1.0 - total * 2.0 ** (-5 * n_a - e)
