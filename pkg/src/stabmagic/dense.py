"""Exact dense statevector / unitary arithmetic for small registers.

Amplitude index convention: bit j of the flat index is qubit j (little-endian,
matching the Pauli bit masks), so qubit 0 is the fastest-varying bit. Gate
matrices follow the same rule within their own index: bit k of a gate's
row/column index belongs to ``qubits[k]`` of the application site.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, ResourceCapError


@dataclass(frozen=True)
class Caps:
    """Memory caps for dense objects, overridable per call site.

    ``state_qubits`` bounds 2^n amplitude vectors; ``matrix_qubits`` bounds
    4^m-entry matrices and density-matrix workloads.
    """

    state_qubits: int = 14
    matrix_qubits: int = 12
    spectrum_qubits: int = 12


DEFAULT_CAPS = Caps()


def _check_state_cap(n: int, caps: Caps):
    if n > caps.state_qubits:
        raise ResourceCapError(f"{n}-qubit state exceeds cap of {caps.state_qubits}")


def _check_matrix_cap(m: int, caps: Caps):
    if m > caps.matrix_qubits:
        raise ResourceCapError(f"{m}-qubit matrix exceeds cap of {caps.matrix_qubits}")


@dataclass(frozen=True, eq=False)
class DenseState:
    """Normalized complex amplitude vector on ``n`` qubits."""

    n: int
    amplitudes: np.ndarray
    _normalized: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n,):
            raise DimensionMismatchError(
                f"expected {1 << self.n} amplitudes, got {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)
        if not self._normalized:
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > 1e-10:
                raise ValueError(f"state norm {norm} deviates from 1 beyond 1e-10")

    @classmethod
    def from_unnormalized(cls, n: int, amps) -> "DenseState":
        amps = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(n, amps / norm, _normalized=True)

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True, eq=False)
class DenseUnitary:
    """Complex 2^m x 2^m unitary matrix (U+U = I within 1e-9, max entry)."""

    m: int
    matrix: np.ndarray
    _validated: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        dim = 1 << self.m
        if mat.shape != (dim, dim):
            raise DimensionMismatchError(f"expected {dim}x{dim} matrix, got {mat.shape}")
        object.__setattr__(self, "matrix", mat)
        if not self._validated and self.m <= 9:
            err = np.max(np.abs(mat.conj().T @ mat - np.eye(dim)))
            if err > 1e-9:
                raise ValueError(f"matrix fails unitarity by {err}")

    def dagger(self) -> "DenseUnitary":
        return DenseUnitary(self.m, self.matrix.conj().T, _validated=True)


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed, a SeedSequence, or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------

def basis_state(n: int, index: int = 0, caps: Caps = DEFAULT_CAPS) -> DenseState:
    _check_state_cap(n, caps)
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return DenseState(n, amps, _normalized=True)


def haar_unitary(m: int, seed, caps: Caps = DEFAULT_CAPS) -> DenseUnitary:
    """Haar-distributed unitary via complex-Gaussian QR with the diagonal
    phase correction that removes the factorization bias."""
    if m < 1:
        raise ValueError("need at least one qubit")
    _check_matrix_cap(m, caps)
    rng = as_rng(seed)
    dim = 1 << m
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))[np.newaxis, :]
    return DenseUnitary(m, q, _validated=True)


def apply_on_qubits(state: DenseState, u: DenseUnitary, qubits) -> DenseState:
    """Apply ``u`` to the listed qubits (distinct, in range); gate index bit k
    acts on ``qubits[k]``. Norm is preserved exactly up to float rounding."""
    qubits = list(qubits)
    m = u.m
    if len(qubits) != m:
        raise DimensionMismatchError(f"gate spans {m} qubits, got {len(qubits)} targets")
    if len(set(qubits)) != m:
        raise DimensionMismatchError(f"duplicate target qubits: {qubits}")
    if any(q < 0 or q >= state.n for q in qubits):
        raise DimensionMismatchError(f"targets {qubits} out of range for n={state.n}")

    n = state.n
    psi = state.amplitudes.reshape([2] * n)  # axis a <-> qubit (n-1-a)
    front = [n - 1 - qubits[k] for k in reversed(range(m))]
    rest = [a for a in range(n) if a not in front]
    perm = front + rest
    block = psi.transpose(perm).reshape(1 << m, -1)
    block = u.matrix @ block
    out = block.reshape([2] * n).transpose(np.argsort(perm))
    return DenseState(n, np.ascontiguousarray(out).reshape(-1), _normalized=True)


def brickwork_layout(region_size: int, depth: int, gate_span: int) -> list[list[int]]:
    """Block start offsets (within the region) for each layer.

    Even layers start at offset 0, odd layers at ``gate_span // 2``; blocks
    are full-width only (open boundaries, no wraparound).
    """
    if gate_span < 2:
        raise ValueError("gate_span must be at least 2")
    if region_size < gate_span:
        raise DimensionMismatchError(
            f"region of {region_size} qubits cannot host span-{gate_span} gates"
        )
    layers = []
    for layer in range(depth):
        offset = (gate_span // 2) if layer % 2 else 0
        layers.append(list(range(offset, region_size - gate_span + 1, gate_span)))
    return layers


def brickwork_apply(
    state: DenseState,
    region,
    depth: int,
    gate_span: int,
    seed,
    caps: Caps = DEFAULT_CAPS,
) -> DenseState:
    """Alternating brick layers of independent Haar gates on the region.

    Gates are drawn layer-major, block-minor from the seeded generator, so the
    circuit is a pure function of (region, depth, gate_span, seed).
    """
    region = list(region)
    rng = as_rng(seed)
    out = state
    for layer in brickwork_layout(len(region), depth, gate_span):
        for start in layer:
            gate = haar_unitary(gate_span, rng, caps)
            out = apply_on_qubits(out, gate, region[start:start + gate_span])
    return out


def bell_pairs_state(m: int, caps: Caps = DEFAULT_CAPS) -> DenseState:
    """Bell^{(x)m} pairing qubit j with qubit m+j."""
    _check_state_cap(2 * m, caps)
    amps = np.zeros(1 << (2 * m), dtype=complex)
    coeff = 2.0 ** (-m / 2)
    for i in range(1 << m):
        amps[i | (i << m)] = coeff
    return DenseState(2 * m, amps, _normalized=True)


def choi_state(u: DenseUnitary, caps: Caps = DEFAULT_CAPS) -> DenseState:
    """Channel-state dual (U (x) I)|Bell>^{(x)m}; system qubit j pairs with
    ancilla qubit m+j."""
    _check_state_cap(2 * u.m, caps)
    return apply_on_qubits(bell_pairs_state(u.m, caps), u, list(range(u.m)))


_SPECTRUM_LAWS = ("exp", "linear", "quadratic", "cubic")


def build_nonstab_state(
    kind: str,
    k: int,
    f_a: int = 0,
    theta: float | None = None,
    law: str | None = None,
    caps: Caps = DEFAULT_CAPS,
) -> DenseState:
    """Initial states with non-stabilizer entanglement across the A|B cut.

    ``imperfect_bell``: |0>^{f_a} (x) (cos(theta)|00> + sin(theta)|11>)^{(x)k}.
    ``spectrum``: |0>^{f_a} (x) sum_i lambda_i |i>_A |i>_B with lambda_i
    proportional to e^{-i/2^k}, i, i^2 or i^3 for i = 1..2^k.

    Qubit layout: f_a filler qubits, then the k A-halves, then the k B-halves.
    """
    if k < 1:
        raise ValueError("need at least one entangled pair")
    n = f_a + 2 * k
    _check_state_cap(n, caps)
    if kind == "imperfect_bell":
        if theta is None or not 0.0 <= theta <= math.pi / 2 + 1e-12:
            raise ValueError(f"theta must lie in [0, pi/2], got {theta}")
        lam = np.array(
            [
                math.prod(
                    math.sin(theta) if (i >> j) & 1 else math.cos(theta)
                    for j in range(k)
                )
                for i in range(1 << k)
            ]
        )
    elif kind == "spectrum":
        if law not in _SPECTRUM_LAWS:
            raise ValueError(f"unknown spectrum law {law!r}; expected one of {_SPECTRUM_LAWS}")
        i = np.arange(1, (1 << k) + 1, dtype=float)
        lam = {
            "exp": np.exp(-i / (1 << k)),
            "linear": i,
            "quadratic": i**2,
            "cubic": i**3,
        }[law]
        lam = lam / np.linalg.norm(lam)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    amps = np.zeros(1 << n, dtype=complex)
    for i in range(1 << k):
        amps[(i << f_a) | (i << (f_a + k))] = lam[i]
    return DenseState.from_unnormalized(n, amps)


# ---------------------------------------------------------------------------
# Reduced density matrices and entanglement entropy (used by oracles)
# ---------------------------------------------------------------------------

def reduced_density(state: DenseState, keep) -> np.ndarray:
    """Partial trace onto the ``keep`` qubits (row/col bit k <-> keep[k])."""
    keep = sorted(keep)
    n = state.n
    rest = [q for q in range(n) if q not in keep]
    psi = state.amplitudes.reshape([2] * n)
    # axes ordered keep-first (slowest = last keep qubit), traced qubits after
    perm = [n - 1 - q for q in reversed(keep)] + [n - 1 - q for q in reversed(rest)]
    block = psi.transpose(perm).reshape(1 << len(keep), 1 << len(rest))
    return block @ block.conj().T


def entropy_bits(rho: np.ndarray, tol: float = 1e-12) -> float:
    """Von Neumann entropy in bits of a density matrix."""
    evals = np.linalg.eigvalsh(rho)
    evals = evals[evals > tol]
    return float(-np.sum(evals * np.log2(evals)))


# ---------------------------------------------------------------------------
# Named gates and JSON unitary files
# ---------------------------------------------------------------------------

_CNOT = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
)  # control = gate bit 0, target = gate bit 1


def cnot() -> DenseUnitary:
    return DenseUnitary(2, _CNOT, _validated=True)


def named_gate(name: str) -> DenseUnitary:
    """Built-in gates: T, S, H, CZ, CS, CCZ and Tn:<n> (T on each of n qubits)."""
    fixed = {
        "T": np.diag([1, np.exp(1j * np.pi / 4)]),
        "S": np.diag([1, 1j]),
        "H": np.array([[1, 1], [1, -1]]) / math.sqrt(2),
        "CZ": np.diag([1, 1, 1, -1]),
        "CS": np.diag([1, 1, 1, 1j]),
        "CCZ": np.diag([1, 1, 1, 1, 1, 1, 1, -1]),
    }
    if name in fixed:
        mat = np.asarray(fixed[name], dtype=complex)
        return DenseUnitary(int(math.log2(mat.shape[0])), mat, _validated=True)
    if name.startswith("Tn:"):
        n = int(name.split(":", 1)[1])
        if n < 1:
            raise ValueError("Tn:<n> needs n >= 1")
        idx = np.arange(1 << n, dtype=np.uint64)
        phases = np.exp(1j * np.pi / 4 * np.bitwise_count(idx).astype(float))
        return DenseUnitary(n, np.diag(phases), _validated=True)
    raise ValueError(f"unknown gate name {name!r}")


def load_unitary_json(source) -> DenseUnitary:
    """Read {"m": int, "re": [[..]], "im": [[..]]} (row-major) from a path,
    file object, or already-parsed dict."""
    if isinstance(source, dict):
        payload = source
    elif hasattr(source, "read"):
        payload = json.load(source)
    else:
        with open(source) as fh:
            payload = json.load(fh)
    mat = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(payload["im"], dtype=float)
    return DenseUnitary(int(payload["m"]), mat)
