"""Signed Pauli strings in the binary symplectic representation.

An n-qubit Pauli is stored as two n-bit masks plus a power of i:

    operator = i^phase * prod_j X_j^{x_j} Z_j^{z_j}

Bit j of ``x_bits``/``z_bits`` belongs to qubit j (little-endian). Qubit 0 is
the leftmost character in the text form. A string with k qubits where both
bits are set carries Y_j = i*X_j*Z_j, so a Hermitian operator satisfies
phase == y_count (mod 2); its overall sign is i^(phase - y_count).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError

_SIGN_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_SIGN = {"+": 0, "+i": 1, "-": 2, "-i": 3, "": 0, "i": 1, "-i ": 3}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

# Single-qubit matrices, used for dense application and by test oracles.
PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Immutable signed Pauli operator on ``n`` qubits."""

    n: int
    x_bits: int
    z_bits: int
    phase: int = 0  # power of i, mod 4

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit masks use more than n bits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- basic structure -------------------------------------------------

    @property
    def y_count(self) -> int:
        return (self.x_bits & self.z_bits).bit_count()

    @property
    def is_identity_body(self) -> bool:
        """True when the unsigned part is I...I (phase may be anything)."""
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def is_hermitian(self) -> bool:
        return (self.phase - self.y_count) % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian representatives."""
        if not self.is_hermitian:
            raise ValueError(f"{self} is not Hermitian")
        return 1 if (self.phase - self.y_count) % 4 == 0 else -1

    def key(self) -> int:
        """Sign-insensitive total order: x/z bits interleaved, qubit 0 most
        significant. Used for canonical coset representatives."""
        k = 0
        for j in range(self.n):
            k = (k << 2) | (((self.x_bits >> j) & 1) << 1) | ((self.z_bits >> j) & 1)
        return k

    def hermitian(self) -> "PauliString":
        """Positive-sign Hermitian representative of the same unsigned body."""
        return PauliString(self.n, self.x_bits, self.z_bits, self.y_count % 4)

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, self.phase + 2)

    # -- text form --------------------------------------------------------

    def __str__(self) -> str:
        letters = "".join(
            _BITS_LETTER[((self.x_bits >> j) & 1, (self.z_bits >> j) & 1)]
            for j in range(self.n)
        )
        return _SIGN_PREFIX[(self.phase - self.y_count) % 4] + letters

    # -- dense form (small n; used by builders and oracles) ---------------

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix. Index bit j of the row/column is qubit j."""
        dim = 1 << self.n
        idx = np.arange(dim, dtype=np.uint64)
        flipped = idx ^ np.uint64(self.x_bits)
        signs = 1 - 2 * (np.bitwise_count(idx & np.uint64(self.z_bits)) & 1).astype(np.int64)
        mat = np.zeros((dim, dim), dtype=complex)
        mat[flipped, idx] = (1j**self.phase) * signs
        return mat


def parse_pauli(text: str) -> PauliString:
    """Parse the text form: optional sign prefix (+, -, +i, -i) followed by
    letters in {I, X, Y, Z}, qubit 0 leftmost. Exact inverse of ``str``."""
    s = text.strip()
    prefix = 0
    for cand, val in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
        if s.startswith(cand):
            prefix = val
            s = s[len(cand):]
            break
    if not s or any(c not in _LETTER_BITS for c in s):
        raise ValueError(f"invalid Pauli literal: {text!r}")
    x = z = 0
    for j, c in enumerate(s):
        xb, zb = _LETTER_BITS[c]
        x |= xb << j
        z |= zb << j
    y_count = (x & z).bit_count()
    return PauliString(len(s), x, z, (prefix + y_count) % 4)


def identity(n: int) -> PauliString:
    return PauliString(n, 0, 0, 0)


def single(n: int, qubit: int, letter: str) -> PauliString:
    """The Pauli ``letter`` on one qubit of an n-qubit register."""
    xb, zb = _LETTER_BITS[letter]
    return PauliString(n, xb << qubit, zb << qubit, (xb & zb) % 4)


def _check_same_n(p: PauliString, q: PauliString):
    if p.n != q.n:
        raise DimensionMismatchError(f"qubit counts differ: {p.n} != {q.n}")


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    """Group product p*q with exact phase tracking.

    Moving Z^{z_p} through X^{x_q} contributes (-1) per overlapping bit.
    """
    _check_same_n(p, q)
    flips = (p.z_bits & q.x_bits).bit_count()
    return PauliString(
        p.n,
        p.x_bits ^ q.x_bits,
        p.z_bits ^ q.z_bits,
        (p.phase + q.phase + 2 * flips) % 4,
    )


def commutes(p: PauliString, q: PauliString) -> int:
    """Symplectic inner product mod 2: 0 iff the operators commute."""
    _check_same_n(p, q)
    return ((p.x_bits & q.z_bits).bit_count() + (p.z_bits & q.x_bits).bit_count()) % 2


def apply_pauli(state: "DenseState", p: PauliString) -> "DenseState":
    """Apply a Pauli to a dense state in O(2^n): X bits permute amplitude
    indices, Z bits flip signs, the i^phase global factor multiplies."""
    from .dense import DenseState  # deferred: dense depends on paulis

    if state.n != p.n:
        raise DimensionMismatchError(f"state has {state.n} qubits, Pauli has {p.n}")
    amps = state.amplitudes
    idx = np.arange(amps.size, dtype=np.uint64)
    signs = 1 - 2 * (np.bitwise_count(idx & np.uint64(p.z_bits)) & 1).astype(np.int64)
    out = np.empty_like(amps)
    out[idx ^ np.uint64(p.x_bits)] = (1j**p.phase) * signs * amps
    return DenseState(state.n, out, _normalized=True)


def restrict(p: PauliString, qubits: list[int] | tuple[int, ...]) -> PauliString:
    """Restriction of ``p`` to a sorted qubit subset, reindexed from 0.

    The full phase is kept, so when ``p`` is supported inside ``qubits`` the
    restriction is the same operator on the smaller register.
    """
    x = z = 0
    for new_j, old_j in enumerate(qubits):
        x |= ((p.x_bits >> old_j) & 1) << new_j
        z |= ((p.z_bits >> old_j) & 1) << new_j
    return PauliString(len(qubits), x, z, p.phase)


def embed(p: PauliString, n: int, qubits: list[int] | tuple[int, ...]) -> PauliString:
    """Place a small Pauli onto positions ``qubits`` of an n-qubit register."""
    x = z = 0
    for small_j, big_j in enumerate(qubits):
        x |= ((p.x_bits >> small_j) & 1) << big_j
        z |= ((p.z_bits >> small_j) & 1) << big_j
    return PauliString(n, x, z, p.phase)


def supported_on(p: PauliString, qubit_mask: int) -> bool:
    """True when all non-identity tensor factors sit inside the mask."""
    return (p.x_bits | p.z_bits) & ~qubit_mask == 0
