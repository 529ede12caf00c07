"""Configuration-driven, seed-reproducible Monte Carlo experiments.

Each sample derives its own generator from hash(master_seed, sample_index),
so results are bit-identical regardless of how samples are distributed over
workers; aggregation always runs over the index-ordered sample array.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction

import numpy as np

from .cliffords import CliffordOp, conjugate_on, random_clifford
from .dense import (
    Caps,
    DEFAULT_CAPS,
    DenseState,
    DenseUnitary,
    apply_on_qubits,
    brickwork_apply,
    build_nonstab_state,
    haar_unitary,
)
from .errors import ConfigError, StabmagicError
from .groups import (
    StabilizerGroup,
    TripartiteShape,
    build_normal_state,
    build_tripartite_state,
    coset_decompose,
)
from .measures import coset_reduced_y, m_alpha, pauli_spectrum, unitary_sre, y_lin_alpha
from .theory import ScenarioDims, exact_average_y, leading_average_y

SCENARIOS = (
    "bipartite_haar",
    "bipartite_product",
    "tripartite_pair",
    "tripartite_triple",
    "brickwork",
    "nonstab_bell",
    "nonstab_spectrum",
    "unitary_sre",
    "tcount_report",
)

CSV_HEADER = (
    "scenario,nA,nB,nC,E,g,bAB,bAC,bBC,fA,fB,fC,depth,gate_span,theta,lambda_law,k,"
    "samples,master_seed,estimator,prescramble,mean_y_lin,stderr_y_lin,mean_m2,"
    "stderr_m2,init_m2,delta_m2_mean,delta_m2_stderr,exact_y,leading_y,z_score"
).split(",")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment; JSON configs mirror these field names exactly."""

    scenario: str
    nA: int | None = None
    nB: int | None = None
    nC: int | None = None
    E: int | None = None
    g: int | None = None
    bAB: int | None = None
    bAC: int | None = None
    bBC: int | None = None
    fA: int | None = None
    fB: int | None = None
    fC: int | None = None
    depth: int | list | None = None
    gate_span: int | None = None
    theta: float | None = None
    lambda_law: str | None = None
    k: int | None = None
    samples: int = 500
    master_seed: int = 0
    estimator: str = "brute"
    prescramble: bool = False

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.estimator not in ("brute", "coset_reduced"):
            raise ConfigError(f"unknown estimator {self.estimator!r}")
        if self.estimator == "coset_reduced" and self.scenario != "bipartite_haar":
            raise ConfigError("coset_reduced estimator is valid only for bipartite_haar")
        if self.prescramble and self.scenario not in ("bipartite_haar", "brickwork"):
            raise ConfigError("prescramble is defined only for bipartite_haar and brickwork")
        if self.scenario == "brickwork":
            if self.depth is None:
                raise ConfigError("brickwork needs a depth (int or ascending list)")
            if self.gate_span is None:
                object.__setattr__(self, "gate_span", 2)

    @classmethod
    def from_json(cls, source) -> "ExperimentConfig":
        if isinstance(source, dict):
            payload = source
        elif hasattr(source, "read"):
            payload = json.load(source)
        else:
            with open(source) as fh:
                payload = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**payload)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class ResultRecord:
    """One aggregated Monte Carlo row (config echo plus statistics)."""

    scenario: str
    nA: int | None = None
    nB: int | None = None
    nC: int | None = None
    E: int | None = None
    g: int | None = None
    bAB: int | None = None
    bAC: int | None = None
    bBC: int | None = None
    fA: int | None = None
    fB: int | None = None
    fC: int | None = None
    depth: int | None = None
    gate_span: int | None = None
    theta: float | None = None
    lambda_law: str | None = None
    k: int | None = None
    samples: int = 0
    master_seed: int = 0
    estimator: str = "brute"
    prescramble: bool = False
    mean_y_lin: float | None = None
    stderr_y_lin: float | None = None
    mean_m2: float | None = None
    stderr_m2: float | None = None
    init_m2: float | None = None
    delta_m2_mean: float | None = None
    delta_m2_stderr: float | None = None
    exact_y: float | None = None
    leading_y: float | None = None
    z_score: float | None = None


def sample_seed(master_seed: int, index: int) -> np.random.SeedSequence:
    """Stable per-sample seed; independent of worker scheduling."""
    return np.random.SeedSequence((int(master_seed), int(index)))


# ---------------------------------------------------------------------------
# Scenario construction
# ---------------------------------------------------------------------------

def _require(cfg: ExperimentConfig, *names: str):
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"scenario {cfg.scenario!r} needs field {name!r}")


def _tripartite_shape(cfg: ExperimentConfig) -> TripartiteShape:
    _require(cfg, "g", "bAB", "bAC", "bBC", "fA", "fB", "fC")
    return TripartiteShape(cfg.g, cfg.bAB, cfg.bAC, cfg.bBC, cfg.fA, cfg.fB, cfg.fC)


def _bipartite_setup(cfg: ExperimentConfig, caps: Caps):
    _require(cfg, "nA", "nB", "E")
    if cfg.E > min(cfg.nA, cfg.nB):
        raise ConfigError(f"E={cfg.E} exceeds min(nA, nB)")
    group, state = build_normal_state(cfg.nA - cfg.E, cfg.E, cfg.nB - cfg.E, caps=caps)
    return group, state


def _scramble(group: StabilizerGroup, state: DenseState, cut_a, rng) -> tuple[StabilizerGroup, DenseState, CliffordOp]:
    """Random local Clifford on subsystem A applied to both representations
    (the matching B-side Clifford would not change any Pauli statistics)."""
    cut_a = list(cut_a)
    cliff = random_clifford(len(cut_a), rng)
    gens = tuple(conjugate_on(g, cliff, cut_a) for g in group.generators)
    new_state = apply_on_qubits(state, cliff.dense_unitary(), cut_a)
    return StabilizerGroup(group.n, gens), new_state, cliff


def random_clifford_t_circuit(n: int, t_gates: int, rng) -> DenseUnitary:
    """Random Clifford+T circuit with exactly ``t_gates`` inserted T gates:
    alternating uniform Cliffords and T on a random qubit."""
    u = random_clifford(n, rng).dense_unitary().matrix
    if t_gates:
        t_phase = np.exp(1j * np.pi / 4)
        dim = 1 << n
        idx = np.arange(dim)
        for _ in range(t_gates):
            q = int(rng.integers(0, n))
            diag = np.where((idx >> q) & 1, t_phase, 1.0)
            u = (diag[:, None] * u)
            u = random_clifford(n, rng).dense_unitary().matrix @ u
    return DenseUnitary(n, u, _validated=True)


# ---------------------------------------------------------------------------
# Per-sample pipelines (top-level functions so process pools can pickle them)
# ---------------------------------------------------------------------------

def _measure(state: DenseState, caps: Caps) -> tuple[float, float]:
    spec = pauli_spectrum(state, caps)
    y = y_lin_alpha(spec, 2)
    return y, m_alpha(spec, 2)


def _sample_state_scenario(cfg: ExperimentConfig, index: int, caps: Caps) -> list[tuple[float, float]]:
    """Returns a list of (y_lin, m2) pairs: one entry per record the scenario
    emits (brickwork sweeps emit one per depth, others exactly one)."""
    rng = np.random.default_rng(sample_seed(cfg.master_seed, index))

    if cfg.scenario in ("bipartite_haar", "brickwork"):
        group, state = _bipartite_setup(cfg, caps)
        cut_a = list(range(cfg.nA))
        if cfg.prescramble:
            group, state, _ = _scramble(group, state, cut_a, rng)
        if cfg.scenario == "bipartite_haar":
            u_a = haar_unitary(cfg.nA, rng, caps)
            if cfg.estimator == "coset_reduced":
                y = coset_reduced_y(coset_decompose(group, cut_a), u_a)
                return [(y, -math.log2(1.0 - y))]
            return [_measure(apply_on_qubits(state, u_a, cut_a), caps)]
        depths = cfg.depth if isinstance(cfg.depth, list) else [cfg.depth]
        if any(d is None or d < 0 for d in depths) or sorted(depths) != list(depths):
            raise ConfigError("brickwork depth must be a non-negative int or ascending list")
        span = cfg.gate_span or 2
        out = []
        prev = 0
        for d in depths:
            state = brickwork_apply(state, cut_a, d - prev, span, rng, caps)
            prev = d
            out.append(_measure(state, caps))
        return out

    if cfg.scenario == "bipartite_product":
        group, state = _bipartite_setup(cfg, caps)
        state = apply_on_qubits(state, haar_unitary(cfg.nA, rng, caps), range(cfg.nA))
        state = apply_on_qubits(
            state, haar_unitary(cfg.nB, rng, caps), range(cfg.nA, cfg.nA + cfg.nB)
        )
        return [_measure(state, caps)]

    if cfg.scenario in ("tripartite_pair", "tripartite_triple"):
        shape = _tripartite_shape(cfg)
        _, state = build_tripartite_state(shape, caps=caps)
        regions = [
            range(shape.n_a),
            range(shape.n_a, shape.n_a + shape.n_b),
            range(shape.n_a + shape.n_b, shape.n),
        ]
        acted = regions[:2] if cfg.scenario == "tripartite_pair" else regions
        for region in acted:
            state = apply_on_qubits(state, haar_unitary(len(region), rng, caps), region)
        return [_measure(state, caps)]

    if cfg.scenario in ("nonstab_bell", "nonstab_spectrum"):
        state = _nonstab_initial(cfg, caps)
        n_a = (cfg.fA or 0) + cfg.k
        state = apply_on_qubits(state, haar_unitary(n_a, rng, caps), range(n_a))
        return [_measure(state, caps)]

    if cfg.scenario == "unitary_sre":
        _require(cfg, "nA")
        u = haar_unitary(cfg.nA, rng, caps)
        h2 = unitary_sre(u, 2, caps)
        return [(1.0 - 2.0**-h2, h2)]

    if cfg.scenario == "tcount_report":
        _require(cfg, "nA", "k")
        u = random_clifford_t_circuit(cfg.nA, cfg.k, rng)
        h2 = unitary_sre(u, 2, caps)
        return [(1.0 - 2.0**-h2, h2)]

    raise ConfigError(f"scenario {cfg.scenario!r} not handled")


def _nonstab_initial(cfg: ExperimentConfig, caps: Caps) -> DenseState:
    _require(cfg, "k")
    if cfg.scenario == "nonstab_bell":
        _require(cfg, "theta")
        return build_nonstab_state("imperfect_bell", cfg.k, cfg.fA or 0, theta=cfg.theta, caps=caps)
    _require(cfg, "lambda_law")
    return build_nonstab_state("spectrum", cfg.k, cfg.fA or 0, law=cfg.lambda_law, caps=caps)


def _sample_worker(args) -> list[tuple[float, float]]:
    cfg_dict, index = args
    return _sample_state_scenario(ExperimentConfig(**cfg_dict), index, DEFAULT_CAPS)


# ---------------------------------------------------------------------------
# Reference values
# ---------------------------------------------------------------------------

def _references(cfg: ExperimentConfig, depth: int | None) -> tuple[float | None, float | None]:
    """(exact_y, leading_y) for one emitted record, where defined."""
    try:
        if cfg.scenario in ("bipartite_haar", "brickwork"):
            lead = leading_average_y("bipartite_haar", n_a=cfg.nA, e=cfg.E).y
            exact = float(exact_average_y(ScenarioDims.bipartite_haar(cfg.nA, cfg.E)))
            return exact, lead
        if cfg.scenario == "bipartite_product":
            lead = leading_average_y("bipartite_product", n_a=cfg.nA, n_b=cfg.nB, e=cfg.E).y
            exact = float(exact_average_y(ScenarioDims.bipartite_product(cfg.nA, cfg.nB, cfg.E)))
            return exact, lead
        if cfg.scenario in ("tripartite_pair", "tripartite_triple"):
            shape = _tripartite_shape(cfg)
            kind = "tripartite_pair" if cfg.scenario == "tripartite_pair" else "tripartite_triple"
            lead = leading_average_y(
                kind, n_a=shape.n_a, n_b=shape.n_b, n_c=shape.n_c,
                g=cfg.g, b_ab=cfg.bAB, b_ac=cfg.bAC, b_bc=cfg.bBC,
            ).y
            if cfg.scenario == "tripartite_pair":
                dims = ScenarioDims.tripartite_pair(
                    shape.n_a, shape.n_b, cfg.g, cfg.bAB, cfg.bAC, cfg.bBC
                )
                return float(exact_average_y(dims)), lead
            return None, lead
        if cfg.scenario == "nonstab_bell" and cfg.theta is not None:
            n_a = (cfg.fA or 0) + cfg.k
            lead = leading_average_y("bipartite_haar", n_a=n_a, e=cfg.k).y
            if abs(cfg.theta - math.pi / 4) < 1e-12:
                return float(exact_average_y(ScenarioDims.bipartite_haar(n_a, cfg.k))), lead
            return None, None
        if cfg.scenario == "unitary_sre":
            exact = float(exact_average_y(ScenarioDims.bipartite_haar(cfg.nA, cfg.nA)))
            return exact, leading_average_y("bipartite_haar", n_a=cfg.nA, e=cfg.nA).y
    except StabmagicError:
        return None, None
    return None, None


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------

def _stats(values: np.ndarray) -> tuple[float, float | None]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, None
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def run_experiment(cfg: ExperimentConfig, workers: int = 1, caps: Caps = DEFAULT_CAPS) -> list[ResultRecord]:
    """Run all samples and aggregate; one record per scenario output (one per
    depth for brickwork sweeps), reproducible bit-for-bit in master_seed."""
    indices = list(range(cfg.samples))
    if workers > 1:
        cfg_dict = asdict(cfg)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_sample = list(pool.map(_sample_worker, [(cfg_dict, i) for i in indices]))
    else:
        per_sample = [_sample_state_scenario(cfg, i, caps) for i in indices]

    n_records = len(per_sample[0])
    init_m2 = None
    if cfg.scenario in ("nonstab_bell", "nonstab_spectrum"):
        init_m2 = m_alpha(pauli_spectrum(_nonstab_initial(cfg, caps), caps), 2)
    elif cfg.scenario in (
        "bipartite_haar", "bipartite_product", "tripartite_pair", "tripartite_triple", "brickwork",
    ):
        init_m2 = 0.0  # stabilizer initial state

    depths = None
    if cfg.scenario == "brickwork":
        depths = cfg.depth if isinstance(cfg.depth, list) else [cfg.depth]

    shape = _tripartite_shape(cfg) if cfg.scenario.startswith("tripartite") else None

    records = []
    for slot in range(n_records):
        ys = np.array([per_sample[i][slot][0] for i in indices])
        m2s = np.array([per_sample[i][slot][1] for i in indices])
        mean_y, stderr_y = _stats(ys)
        mean_m2, stderr_m2 = _stats(m2s)
        depth = depths[slot] if depths is not None else None
        exact, leading = _references(cfg, depth)
        z = None
        if exact is not None and stderr_y not in (None, 0.0):
            z = (mean_y - exact) / stderr_y
        delta_mean = delta_stderr = None
        if init_m2 is not None:
            delta_mean, delta_stderr = mean_m2 - init_m2, stderr_m2
        records.append(
            ResultRecord(
                scenario=cfg.scenario,
                nA=cfg.nA if cfg.nA is not None else (shape.n_a if shape else None),
                nB=cfg.nB if cfg.nB is not None else (shape.n_b if shape else None),
                nC=shape.n_c if shape else cfg.nC,
                E=cfg.E,
                g=cfg.g, bAB=cfg.bAB, bAC=cfg.bAC, bBC=cfg.bBC,
                fA=cfg.fA, fB=cfg.fB, fC=cfg.fC,
                depth=depth,
                gate_span=cfg.gate_span,
                theta=cfg.theta,
                lambda_law=cfg.lambda_law,
                k=cfg.k,
                samples=cfg.samples,
                master_seed=cfg.master_seed,
                estimator=cfg.estimator,
                prescramble=cfg.prescramble,
                mean_y_lin=mean_y,
                stderr_y_lin=stderr_y,
                mean_m2=mean_m2,
                stderr_m2=stderr_m2,
                init_m2=init_m2,
                delta_m2_mean=delta_mean,
                delta_m2_stderr=delta_stderr,
                exact_y=exact,
                leading_y=leading,
                z_score=z,
            )
        )
    return records


# ---------------------------------------------------------------------------
# Comparison report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComparisonRow:
    label: str
    mean: float
    exact: float
    stderr: float | None
    gap: float
    z: float | None
    ok: bool


@dataclass(frozen=True)
class ComparisonReport:
    rows: list[ComparisonRow]
    passed: bool


def compare_mc_exact(records: list[ResultRecord], z_max: float = 4.0, gap_floor: float = 0.01) -> ComparisonReport:
    """Per-row verdicts: a row passes when its gap to the exact value is
    within z_max standard errors or below the absolute floor (the floor
    guards against vanishing-stderr false precision, the z test against
    under-sampled flukes)."""
    rows = []
    for rec in records:
        if rec.exact_y is None:
            raise ConfigError(f"record {rec.scenario} carries no exact reference")
        gap = rec.mean_y_lin - rec.exact_y
        z = None if rec.stderr_y_lin in (None, 0.0) else gap / rec.stderr_y_lin
        tol = max(z_max * (rec.stderr_y_lin or 0.0), gap_floor)
        label = f"{rec.scenario}(nA={rec.nA},nB={rec.nB},E={rec.E},g={rec.g},bAB={rec.bAB})"
        rows.append(
            ComparisonRow(
                label=label,
                mean=rec.mean_y_lin,
                exact=rec.exact_y,
                stderr=rec.stderr_y_lin,
                gap=gap,
                z=z,
                ok=abs(gap) <= tol,
            )
        )
    return ComparisonReport(rows=rows, passed=all(r.ok for r in rows))


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------

_INT_FIELDS = {"nA", "nB", "nC", "E", "g", "bAB", "bAC", "bBC", "fA", "fB", "fC",
               "depth", "gate_span", "k", "samples", "master_seed"}
_FLOAT_FIELDS = {"theta", "mean_y_lin", "stderr_y_lin", "mean_m2", "stderr_m2",
                 "init_m2", "delta_m2_mean", "delta_m2_stderr", "exact_y",
                 "leading_y", "z_score"}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records(records: list[ResultRecord], path, fmt: str = "csv"):
    """CSV with the fixed column order, or JSON as an array of flat objects;
    values round-trip exactly through ``read_records``."""
    if fmt == "csv":
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_HEADER)
                for rec in records:
                    d = asdict(rec)
                    writer.writerow([_cell(d[name]) for name in CSV_HEADER])
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc}") from exc
    elif fmt == "json":
        try:
            with open(path, "w") as fh:
                json.dump([asdict(rec) for rec in records], fh, indent=1)
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc}") from exc
    else:
        raise ConfigError(f"unknown format {fmt!r}")


def _parse_cell(name: str, text: str):
    if text == "":
        return None
    if name == "prescramble":
        return text == "true" or text == "True"
    if name in _INT_FIELDS:
        return int(text)
    if name in _FLOAT_FIELDS:
        return float(text)
    return text


def read_records(path) -> list[ResultRecord]:
    """Read back either persisted format (sniffed from the first byte)."""
    try:
        with open(path) as fh:
            head = fh.read(1)
            fh.seek(0)
            if head == "[":
                return [ResultRecord(**row) for row in json.load(fh)]
            reader = csv.reader(fh)
            header = next(reader)
            if header != CSV_HEADER:
                raise ConfigError(f"unexpected CSV header in {path}")
            return [
                ResultRecord(**{name: _parse_cell(name, cell) for name, cell in zip(header, row)})
                for row in reader
            ]
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
