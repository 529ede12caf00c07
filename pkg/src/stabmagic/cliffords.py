"""Uniformly random Clifford operations.

Sampling draws a uniformly random symplectic basis over GF(2) pair by pair
(the image of X_j, then of Z_j, inside the symplectic complement of the pairs
already fixed), which is exactly uniform over Sp(2n, 2), then adds uniform
sign bits. The sampled map is realized as a product of symplectic
transvections T_v: u -> u + <u,v> v; each transvection lifts to the Clifford
unitary exp(i pi/4 V) whose conjugation sends P to P when [P,V] = 0 and to
iVP otherwise. That gives one object usable three ways: symbolic Pauli
conjugation, O(2^n) application to dense states, and a dense matrix.

Symplectic vectors are 2n-bit ints: bits 0..n-1 the X part, bits n..2n-1 the
Z part, qubit-little-endian like PauliString.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _f2
from .dense import Caps, DEFAULT_CAPS, DenseState, DenseUnitary, as_rng
from .errors import ResourceCapError
from .paulis import PauliString, apply_pauli, commutes, embed, pauli_mul, restrict


def _vec_of(p: PauliString, n: int) -> int:
    return p.x_bits | (p.z_bits << n)


def _pauli_of(v: int, n: int) -> PauliString:
    x = v & ((1 << n) - 1)
    z = v >> n
    return PauliString(n, x, z, (x & z).bit_count() % 4)


def _sp(u: int, v: int, n: int) -> int:
    mask = (1 << n) - 1
    return (((u & mask) & (v >> n)).bit_count() + (((u >> n) & mask) & (v & mask)).bit_count()) % 2


def _sp_functional(u: int, n: int) -> int:
    """Row r with parity(r & z) == <u, z> for all z (swap X and Z parts)."""
    mask = (1 << n) - 1
    return ((u & mask) << n) | (u >> n)


def _complement_basis(fixed: list[int], n: int) -> list[int]:
    """Basis of {z : <u, z> = 0 for all fixed u}."""
    if not fixed:
        return [1 << i for i in range(2 * n)]
    rows = [_sp_functional(u, n) for u in fixed]
    # kernel of the functional matrix, via coefficient tracking on columns
    basis: list[int] = []
    width = 2 * n
    cols = []
    for j in range(width):
        col = 0
        for i, r in enumerate(rows):
            col |= ((r >> j) & 1) << i
        cols.append((col << width) | (1 << j))
    out = []
    for c in cols:
        r = _f2.reduce_row(c, basis)
        if r >> width:
            basis.append(r)
            basis.sort(reverse=True)
        else:
            out.append(r & ((1 << width) - 1))
    return out


def _sample_in_span(basis: list[int], rng: np.random.Generator) -> int:
    v = 0
    for b in basis:
        if rng.integers(0, 2):
            v ^= b
    return v


def _transvections_mapping(src: int, dst: int, ortho: list[int], extra_one: list[int], n: int) -> list[int]:
    """Transvection vectors t (0, 1 or 2 of them) sending src to dst, each
    orthogonal to every vector in ``ortho`` and with <t, u> arranged so the
    vectors in ``extra_one`` are also fixed (used for the Z_j step, where the
    freshly fixed X_j image must not move)."""
    if src == dst:
        return []
    if _sp(src, dst, n) == 1:
        return [src ^ dst]
    rows = [_sp_functional(src, n), _sp_functional(dst, n)]
    rhs = [1, 1]
    for u in ortho:
        rows.append(_sp_functional(u, n))
        rhs.append(0)
    for u in extra_one:
        rows.append(_sp_functional(u, n))
        rhs.append(1)
    mid = _f2.solve(rows, rhs)
    return [src ^ mid, mid ^ dst]


def _apply_transvection(t: int, v: int, n: int) -> int:
    return v ^ (t if _sp(v, t, n) else 0)


@dataclass(frozen=True)
class CliffordOp:
    """A sampled Clifford as transvection vectors plus a sign Pauli.

    ``transvections`` are listed in conjugation order: the operator is
    U = W * C_m * ... * C_1 with C_i = exp(i pi/4 V_i), V_i the Hermitian
    Pauli of ``transvections[i-1]`` and W the sign Pauli.
    """

    n: int
    transvections: tuple[int, ...]
    sign_pauli: PauliString

    def conjugate_pauli(self, p: PauliString) -> PauliString:
        """Image U p U+ (a single signed Pauli)."""
        for t in self.transvections:
            v = _pauli_of(t, self.n)
            if commutes(p, v):
                q = pauli_mul(v, p)
                p = PauliString(self.n, q.x_bits, q.z_bits, (q.phase + 1) % 4)
        w = self.sign_pauli
        if commutes(p, w):
            p = p.negate()
        return p

    def action_table(self) -> list[tuple[PauliString, PauliString]]:
        """Images of (X_j, Z_j) for every qubit; determines the map."""
        out = []
        for j in range(self.n):
            xj = PauliString(self.n, 1 << j, 0, 0)
            zj = PauliString(self.n, 0, 1 << j, 0)
            out.append((self.conjugate_pauli(xj), self.conjugate_pauli(zj)))
        return out

    def apply_to_state(self, state: DenseState) -> DenseState:
        amps = state.amplitudes
        inv = 1 / math.sqrt(2)
        for t in self.transvections:
            v = _pauli_of(t, self.n)
            moved = apply_pauli(DenseState(self.n, amps, _normalized=True), v)
            amps = (amps + 1j * moved.amplitudes) * inv
        final = apply_pauli(DenseState(self.n, amps, _normalized=True), self.sign_pauli)
        return DenseState(self.n, final.amplitudes, _normalized=True)

    def dense_unitary(self, caps: Caps = DEFAULT_CAPS) -> DenseUnitary:
        if self.n > caps.matrix_qubits:
            raise ResourceCapError(f"{self.n}-qubit unitary exceeds cap {caps.matrix_qubits}")
        dim = 1 << self.n
        u = np.eye(dim, dtype=complex)
        inv = 1 / math.sqrt(2)
        for t in self.transvections:
            v = _pauli_of(t, self.n).to_matrix()
            u = (u + 1j * (v @ u)) * inv
        u = self.sign_pauli.to_matrix() @ u
        return DenseUnitary(self.n, u, _validated=True)


def random_clifford(n: int, seed) -> CliffordOp:
    """Uniform over the n-qubit Clifford group modulo global phase;
    deterministic in the seed."""
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = as_rng(seed)

    fixed: list[int] = []  # images already chosen, in (v1, w1, v2, w2, ...) order
    targets: list[tuple[int, int]] = []
    for _ in range(n):
        comp = _complement_basis(fixed, n)
        v = 0
        while v == 0:
            v = _sample_in_span(comp, rng)
        w = 0
        while _sp(v, w, n) == 0:
            w = _sample_in_span(comp, rng)
        targets.append((v, w))
        fixed.extend((v, w))

    # reduce the sampled frame to the standard frame; the composite of the
    # collected transvections applied in reverse realizes the sampled map
    reduction: list[int] = []
    cur = [list(t) for t in targets]
    done: list[int] = []
    def apply_all(ts: list[int], start: int):
        for t in ts:
            for k in range(start, n):
                cur[k][0] = _apply_transvection(t, cur[k][0], n)
                cur[k][1] = _apply_transvection(t, cur[k][1], n)
            reduction.append(t)

    for j in range(n):
        e = 1 << j
        f = 1 << (n + j)
        apply_all(_transvections_mapping(cur[j][0], e, done, [], n), j)
        # the Z-step must see the X-step's effect and must not move e
        apply_all(_transvections_mapping(cur[j][1], f, done, [e], n), j)
        done.extend((e, f))

    sign_vec = int(rng.integers(0, 1 << (2 * n), dtype=np.uint64)) if n <= 31 else _sample_in_span(
        [1 << i for i in range(2 * n)], rng
    )
    return CliffordOp(n, tuple(reversed(reduction)), _pauli_of(sign_vec, n))


def conjugate_on(p: PauliString, cliff: CliffordOp, qubits) -> PauliString:
    """Conjugate an n-qubit Pauli by a Clifford supported on ``qubits``."""
    qubits = list(qubits)
    local = restrict(p, qubits)
    image = cliff.conjugate_pauli(local)
    keep_mask = ~sum(1 << q for q in qubits)
    outside = PauliString(p.n, p.x_bits & keep_mask, p.z_bits & keep_mask,
                          (p.phase - local.phase) % 4)
    return pauli_mul(embed(image, p.n, qubits), outside)
