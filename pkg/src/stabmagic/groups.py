"""Stabilizer groups: tableau reduction, entanglement, coset decomposition,
and normal-form state construction.

Generators are signed Hermitian PauliStrings. Tableau row operations use
``pauli_mul`` so signs stay exact; the GF(2) structure is handled on the
``PauliString.key()`` integers (x/z bits interleaved, qubit 0 most
significant), which also defines the lexicographic order used for canonical
coset representatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _f2
from .dense import Caps, DEFAULT_CAPS, DenseState, apply_on_qubits, basis_state, cnot, named_gate
from .errors import DimensionMismatchError, InvalidGroupError, ResourceCapError
from .paulis import PauliString, apply_pauli, commutes, identity, parse_pauli, pauli_mul, restrict


@dataclass(frozen=True)
class StabilizerGroup:
    """Independent, pairwise-commuting Hermitian generator set (-I excluded)."""

    n: int
    generators: tuple[PauliString, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.n != self.n:
                raise DimensionMismatchError(f"generator {g} does not act on {self.n} qubits")
            if not g.is_hermitian:
                raise InvalidGroupError(f"generator {g} is not Hermitian")
        object.__setattr__(self, "generators", gens)

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def is_pure(self) -> bool:
        return self.dim == self.n

    @classmethod
    def from_text(cls, text: str) -> "StabilizerGroup":
        """One generator per line in PauliString text form."""
        gens = [parse_pauli(line) for line in text.splitlines() if line.strip()]
        if not gens:
            raise InvalidGroupError("no generators given")
        return cls(gens[0].n, tuple(gens))

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.generators)

    def elements(self) -> list[PauliString]:
        """All 2^dim group elements (small groups only)."""
        out = []
        for picks in itertools.product((0, 1), repeat=self.dim):
            acc = identity(self.n)
            for bit, g in zip(picks, self.generators):
                if bit:
                    acc = pauli_mul(acc, g)
            out.append(acc)
        return out


def canonicalize(group: StabilizerGroup) -> StabilizerGroup:
    """Row-echelon generator set spanning the same group; idempotent.

    Raises InvalidGroupError on dependent or anticommuting generators.
    """
    for p, q in itertools.combinations(group.generators, 2):
        if commutes(p, q):
            raise InvalidGroupError(f"generators {p} and {q} anticommute")
    rows: list[tuple[int, PauliString]] = []  # (key, element), echelon by key
    for g in group.generators:
        cur = g
        for key, row in rows:
            if cur.key() ^ key < cur.key():
                cur = pauli_mul(cur, row)
        if cur.is_identity_body:
            raise InvalidGroupError(f"generator {g} is dependent on the others")
        rows.append((cur.key(), cur))
        rows.sort(key=lambda t: t[0], reverse=True)
    # back-substitute to the unique reduced echelon form
    for i in range(len(rows)):
        key_i, row_i = rows[i]
        lead = 1 << (key_i.bit_length() - 1)
        for j in range(len(rows)):
            if j != i and rows[j][0] & lead:
                merged = pauli_mul(rows[j][1], row_i)
                rows[j] = (merged.key(), merged)
    rows.sort(key=lambda t: t[0], reverse=True)
    return StabilizerGroup(group.n, tuple(r for _, r in rows))


def _reduce_to_minimal(p: PauliString, echelon: list[PauliString]) -> PauliString:
    """Minimal-key representative of the coset p * <echelon>."""
    for row in echelon:
        if p.key() ^ row.key() < p.key():
            p = pauli_mul(p, row)
    return p


def _support_subgroup(canon: StabilizerGroup, mask: int) -> list[PauliString]:
    """Full-width generators of the subgroup fully supported inside ``mask``.

    Found as the kernel of the coefficient -> outside-restriction map.
    """
    outside = [
        ((g.x_bits & ~mask) << canon.n) | (g.z_bits & ~mask) for g in canon.generators
    ]
    combos = _f2.kernel_coefficient_masks(outside)
    out = []
    for combo in combos:
        acc = identity(canon.n)
        for i in range(len(canon.generators)):
            if combo >> i & 1:
                acc = pauli_mul(acc, canon.generators[i])
        out.append(acc)
    return out


@dataclass(frozen=True)
class CosetDecomposition:
    """Tiling of a pure bipartite stabilizer group by subsystem subgroups.

    ``logical_pairs`` holds 2E generator pairs (a_i on A, b_i on B) whose
    products generate the 4^E coset representatives a_k (x) b_k; B-side
    representatives are kept positive, A-side carries the element's sign.
    """

    cut_a: tuple[int, ...]
    cut_b: tuple[int, ...]
    s_a: StabilizerGroup
    s_b: StabilizerGroup
    logical_pairs: tuple[tuple[PauliString, PauliString], ...]
    entanglement: int

    def coset_representatives(self) -> list[tuple[PauliString, PauliString]]:
        """Canonical (minimal-key) representatives of all 4^E cosets; entry 0
        is the identity coset."""
        e2 = len(self.logical_pairs)
        ech_a = list(canonicalize(self.s_a).generators) if self.s_a.dim else []
        ech_b = list(canonicalize(self.s_b).generators) if self.s_b.dim else []
        reps = []
        for k in range(1 << e2):
            a = identity(len(self.cut_a))
            b = identity(len(self.cut_b))
            for i in range(e2):
                if k >> i & 1:
                    a = pauli_mul(a, self.logical_pairs[i][0])
                    b = pauli_mul(b, self.logical_pairs[i][1])
            # anticommuting logicals leave an i on each half; rebalance so the
            # B half is positive Hermitian and the A half absorbs the rest
            b_pos = b.hermitian()
            a = PauliString(a.n, a.x_bits, a.z_bits, (a.phase + b.phase - b_pos.phase) % 4)
            reps.append((_reduce_to_minimal(a, ech_a), _reduce_to_minimal(b_pos, ech_b)))
        return reps

    def coset_element_sets(self) -> list[set[str]]:
        """The 4^E cosets as sets of full-width unsigned Pauli letter strings
        (for set-partition comparisons; representative signs are dropped)."""
        n = len(self.cut_a) + len(self.cut_b)
        sets = []
        for a_rep, b_rep in self.coset_representatives():
            members = set()
            for sa in self.s_a.elements():
                for sb in self.s_b.elements():
                    a = pauli_mul(a_rep, sa)
                    b = pauli_mul(b_rep, sb)
                    full = _combine(n, self.cut_a, a, self.cut_b, b)
                    members.add(str(full.hermitian()))
            sets.append(members)
        return sets


def _combine(n: int, qubits_a, pa: PauliString, qubits_b, pb: PauliString) -> PauliString:
    x = z = 0
    for j, q in enumerate(qubits_a):
        x |= ((pa.x_bits >> j) & 1) << q
        z |= ((pa.z_bits >> j) & 1) << q
    for j, q in enumerate(qubits_b):
        x |= ((pb.x_bits >> j) & 1) << q
        z |= ((pb.z_bits >> j) & 1) << q
    return PauliString(n, x, z, (pa.phase + pb.phase) % 4)


def _split_sides(g: PauliString, qubits_a, qubits_b) -> tuple[PauliString, PauliString]:
    """Split a group element supported on A u B into Hermitian halves; the
    B half is made positive, the A half keeps the residual sign."""
    b = restrict(g, qubits_b).hermitian()
    a_raw = restrict(g, qubits_a)
    a = PauliString(a_raw.n, a_raw.x_bits, a_raw.z_bits, (g.phase - b.phase) % 4)
    return a, b


def entanglement_entropy(group: StabilizerGroup, cut_a) -> int:
    """Entanglement across the cut in bits: |A| - dim(S_A); integer for
    stabilizer states and symmetric in A <-> complement."""
    cut_a = sorted(set(cut_a))
    if any(q < 0 or q >= group.n for q in cut_a):
        raise DimensionMismatchError(f"cut {cut_a} out of range for n={group.n}")
    if not group.is_pure:
        raise InvalidGroupError("entanglement entropy needs a pure group")
    if not cut_a:
        return 0
    canon = canonicalize(group)
    mask = 0
    for q in cut_a:
        mask |= 1 << q
    return len(cut_a) - len(_support_subgroup(canon, mask))


def coset_decompose(group: StabilizerGroup, cut_a) -> CosetDecomposition:
    """Decompose a pure group over the A|B cut per the tiling
    S = union_k (a_k S_A) (x) (b_k S_B) with paired logical representatives."""
    cut_a = tuple(sorted(set(cut_a)))
    cut_b = tuple(q for q in range(group.n) if q not in cut_a)
    if not group.is_pure:
        raise InvalidGroupError("coset decomposition needs a pure group")
    canon = canonicalize(group)
    mask_a = sum(1 << q for q in cut_a)
    mask_b = sum(1 << q for q in cut_b)

    sa_full = _support_subgroup(canon, mask_a)
    sb_full = _support_subgroup(canon, mask_b)
    ent = len(cut_a) - len(sa_full)
    ent_b = len(cut_b) - len(sb_full)
    if ent != ent_b:
        raise InvalidGroupError(f"asymmetric support dimensions: E={ent} vs {ent_b}")

    # extend S_A (x) S_B by 2E logical elements to span the whole group
    span = [g.key() for g in sa_full + sb_full]
    basis: list[int] = []
    for k in span:
        _f2.insert_row(k, basis)
    logicals = []
    for g in canon.generators:
        if _f2.insert_row(g.key(), basis):
            logicals.append(g)
    if len(logicals) != 2 * ent:
        raise InvalidGroupError(
            f"expected {2 * ent} logical generators, found {len(logicals)}"
        )

    pairs = tuple(_split_sides(g, cut_a, cut_b) for g in logicals)
    s_a = StabilizerGroup(len(cut_a), tuple(restrict(g, cut_a) for g in sa_full))
    s_b = StabilizerGroup(len(cut_b), tuple(restrict(g, cut_b) for g in sb_full))
    return CosetDecomposition(cut_a, cut_b, s_a, s_b, pairs, ent)


# ---------------------------------------------------------------------------
# Normal-form states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TripartiteShape:
    """GHZ / Bell / single-qubit content of a tripartite normal form."""

    g: int = 0
    b_ab: int = 0
    b_ac: int = 0
    b_bc: int = 0
    f_a: int = 0
    f_b: int = 0
    f_c: int = 0

    def __post_init__(self):
        if min(self.g, self.b_ab, self.b_ac, self.b_bc, self.f_a, self.f_b, self.f_c) < 0:
            raise ValueError("all shape counts must be non-negative")

    @property
    def n_a(self) -> int:
        return self.f_a + self.b_ab + self.b_ac + self.g

    @property
    def n_b(self) -> int:
        return self.f_b + self.b_ab + self.b_bc + self.g

    @property
    def n_c(self) -> int:
        return self.f_c + self.b_ac + self.b_bc + self.g

    @property
    def n(self) -> int:
        return self.n_a + self.n_b + self.n_c


def _filler_gen(n: int, q: int, fillers: str) -> PauliString:
    letter = "X" if fillers == "plus" else "Z"
    return parse_pauli("".join(letter if j == q else "I" for j in range(n)))


def _apply_h(state: DenseState, q: int) -> DenseState:
    return apply_on_qubits(state, named_gate("H"), [q])


def _bell_gens(n: int, a: int, b: int) -> list[PauliString]:
    xx = PauliString(n, (1 << a) | (1 << b), 0, 0)
    zz = PauliString(n, 0, (1 << a) | (1 << b), 0)
    return [xx, zz]


def build_normal_state(
    f_a: int,
    e: int,
    f_b: int,
    fillers: str = "plus",
    dense: bool = True,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[StabilizerGroup, DenseState | None]:
    """Bipartite normal form: fillers^{f_a} (x) Bell^{(x)e} (x) fillers^{f_b}.

    Qubit order: A fillers, A Bell halves, B fillers, B Bell halves; subsystem
    A is the first f_a + e qubits. Fillers are |+> ("plus") or |0> ("zero");
    both give identical Pauli-spectrum statistics.
    """
    if min(f_a, e, f_b) < 0:
        raise ValueError("counts must be non-negative")
    if fillers not in ("plus", "zero"):
        raise ValueError(f"fillers must be 'plus' or 'zero', got {fillers!r}")
    n = f_a + 2 * e + f_b
    gens: list[PauliString] = []
    for q in range(f_a):
        gens.append(_filler_gen(n, q, fillers))
    for q in range(f_a + e, f_a + e + f_b):
        gens.append(_filler_gen(n, q, fillers))
    pair_qubits = [(f_a + j, f_a + e + f_b + j) for j in range(e)]
    for a, b in pair_qubits:
        gens.extend(_bell_gens(n, a, b))
    group = StabilizerGroup(n, tuple(gens))
    if not dense:
        return group, None
    state = basis_state(n, 0, caps)
    for q in range(f_a):
        if fillers == "plus":
            state = _apply_h(state, q)
    for q in range(f_a + e, f_a + e + f_b):
        if fillers == "plus":
            state = _apply_h(state, q)
    for a, b in pair_qubits:
        state = _apply_h(state, a)
        state = apply_on_qubits(state, cnot(), [a, b])
    return group, state


def build_tripartite_state(
    shape: TripartiteShape,
    fillers: str = "plus",
    dense: bool = True,
    caps: Caps = DEFAULT_CAPS,
) -> tuple[StabilizerGroup, DenseState | None]:
    """Tripartite normal form with regions laid out as
    A = [f_a][b_ab][b_ac][g], B = [f_b][b_ab][b_bc][g], C = [f_c][b_ac][b_bc][g]
    (GHZ triples occupy the last g qubits of each region)."""
    if fillers not in ("plus", "zero"):
        raise ValueError(f"fillers must be 'plus' or 'zero', got {fillers!r}")
    n = shape.n
    off_a, off_b, off_c = 0, shape.n_a, shape.n_a + shape.n_b
    bells: list[tuple[int, int]] = []
    for j in range(shape.b_ab):
        bells.append((off_a + shape.f_a + j, off_b + shape.f_b + j))
    for j in range(shape.b_ac):
        bells.append((off_a + shape.f_a + shape.b_ab + j, off_c + shape.f_c + j))
    for j in range(shape.b_bc):
        bells.append((off_b + shape.f_b + shape.b_ab + j, off_c + shape.f_c + shape.b_ac + j))
    ghz: list[tuple[int, int, int]] = [
        (off_a + shape.n_a - shape.g + j, off_b + shape.n_b - shape.g + j, off_c + shape.n_c - shape.g + j)
        for j in range(shape.g)
    ]
    fill = (
        [off_a + j for j in range(shape.f_a)]
        + [off_b + j for j in range(shape.f_b)]
        + [off_c + j for j in range(shape.f_c)]
    )

    gens: list[PauliString] = [_filler_gen(n, q, fillers) for q in fill]
    for a, b in bells:
        gens.extend(_bell_gens(n, a, b))
    for a, b, c in ghz:
        gens.append(PauliString(n, (1 << a) | (1 << b) | (1 << c), 0, 0))
        gens.append(PauliString(n, 0, (1 << a) | (1 << b), 0))
        gens.append(PauliString(n, 0, (1 << b) | (1 << c), 0))
    group = StabilizerGroup(n, tuple(gens))
    if not dense:
        return group, None
    state = basis_state(n, 0, caps)
    for q in fill:
        if fillers == "plus":
            state = _apply_h(state, q)
    for a, b in bells:
        state = _apply_h(state, a)
        state = apply_on_qubits(state, cnot(), [a, b])
    for a, b, c in ghz:
        state = _apply_h(state, a)
        state = apply_on_qubits(state, cnot(), [a, b])
        state = apply_on_qubits(state, cnot(), [a, c])
    return group, state


def ghz_group(n: int) -> StabilizerGroup:
    gens = [PauliString(n, (1 << n) - 1, 0, 0)]
    for j in range(n - 1):
        gens.append(PauliString(n, 0, (1 << j) | (1 << (j + 1)), 0))
    return StabilizerGroup(n, tuple(gens))


def group_to_state(group: StabilizerGroup, caps: Caps = DEFAULT_CAPS) -> DenseState:
    """Dense +1 common eigenstate via the projector prod_j (I + g_j)/2 applied
    to computational basis seeds until one survives."""
    if not group.is_pure:
        raise InvalidGroupError("state construction needs a pure group")
    if group.n > caps.state_qubits:
        raise ResourceCapError(f"{group.n}-qubit state exceeds cap {caps.state_qubits}")
    dim = 1 << group.n
    for seed_index in range(dim):
        state = basis_state(group.n, seed_index, caps)
        amps = state.amplitudes
        for g in group.generators:
            shifted = apply_pauli(DenseState(group.n, amps, _normalized=True), g)
            amps = (amps + shifted.amplitudes) / 2
        norm = np.linalg.norm(amps)
        if norm > 1e-9:
            return DenseState.from_unnormalized(group.n, amps)
    raise InvalidGroupError("projector annihilated every basis state")


# ---------------------------------------------------------------------------
# Named state literals ("ghz:5", "bell:2", "normal:fA,E,fB", "tri:...")
# ---------------------------------------------------------------------------

def parse_state_spec(spec: str, fillers: str = "plus", dense: bool = True,
                     caps: Caps = DEFAULT_CAPS) -> tuple[StabilizerGroup, DenseState | None]:
    kind, _, arg = spec.partition(":")
    if kind == "ghz":
        n = int(arg)
        if n < 2:
            raise ValueError("ghz:<n> needs n >= 2")
        group = ghz_group(n)
        return group, group_to_state(group, caps) if dense else None
    if kind == "bell":
        k = int(arg)
        return build_normal_state(0, k, 0, fillers=fillers, dense=dense, caps=caps)
    if kind == "normal":
        f_a, e, f_b = (int(v) for v in arg.split(","))
        return build_normal_state(f_a, e, f_b, fillers=fillers, dense=dense, caps=caps)
    if kind == "tri":
        g, b_ab, b_ac, b_bc, f_a, f_b, f_c = (int(v) for v in arg.split(","))
        shape = TripartiteShape(g, b_ab, b_ac, b_bc, f_a, f_b, f_c)
        return build_tripartite_state(shape, fillers=fillers, dense=dense, caps=caps)
    raise ValueError(f"unknown state literal {spec!r}")
