"""Command line entry point.

Exit codes: 0 success, 2 comparison failure, 3 config error, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .cliffords import random_clifford
from .dense import load_unitary_json, named_gate
from .errors import ConfigError, ResourceCapError, StabmagicError
from .groups import coset_decompose, parse_state_spec
from .harness import ExperimentConfig, compare_mc_exact, read_records, run_experiment, write_records
from .measures import t_count_bounds, unitary_sre
from .theory import ScenarioDims, exact_average_y, leading_average_y


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exit code collides with ours
        raise ConfigError(message)


def _parse_dims(pairs: list[str]) -> dict[str, int]:
    out = {}
    for chunk in pairs:
        for item in chunk.split(","):
            if not item:
                continue
            key, _, val = item.partition("=")
            if not val:
                raise ConfigError(f"--dims entries must look like key=value, got {item!r}")
            out[key] = int(val)
    return out


_LEADING_KEYS = {"nA": "n_a", "nB": "n_b", "nC": "n_c", "E": "e",
                 "g": "g", "bAB": "b_ab", "bAC": "b_ac", "bBC": "b_bc"}


def _cmd_exact(args) -> int:
    dims = _parse_dims(args.dims)
    scenario = args.scenario
    lead_args = {_LEADING_KEYS[k]: v for k, v in dims.items() if k in _LEADING_KEYS}
    lead = leading_average_y(scenario, **lead_args)
    if scenario == "bipartite_haar":
        sd = ScenarioDims.bipartite_haar(dims["nA"], dims["E"])
    elif scenario == "bipartite_product":
        sd = ScenarioDims.bipartite_product(dims["nA"], dims["nB"], dims["E"])
    elif scenario == "tripartite_pair":
        sd = ScenarioDims.tripartite_pair(
            dims["nA"], dims["nB"], dims.get("g", 0),
            dims.get("bAB", 0), dims.get("bAC", 0), dims.get("bBC", 0),
        )
    else:
        sd = None
    print(f"scenario: {scenario}  dims: {dims}")
    if sd is not None:
        exact = exact_average_y(sd)
        print(f"exact   Y = {exact} = {float(exact):.12g}   M2 = {-math.log2(1 - float(exact)):.12g}")
    else:
        print("exact   : no closed form (leading order only)")
    flag = "" if lead.reliable else "   [leading-order unreliable: correction > 0.5]"
    print(f"leading Y = {lead.y:.12g}   M2 = {lead.m2:.12g}{flag}")
    return 0


def _cmd_mc(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    records = run_experiment(cfg, workers=args.workers)
    write_records(records, args.out, fmt=args.format)
    for rec in records:
        ref = f"  exact={rec.exact_y:.6g} z={rec.z_score:+.2f}" if rec.exact_y is not None and rec.z_score is not None else ""
        depth = f" depth={rec.depth}" if rec.depth is not None else ""
        print(f"{rec.scenario}{depth}: mean_y={rec.mean_y_lin:.6g} "
              f"stderr={rec.stderr_y_lin if rec.stderr_y_lin is not None else float('nan'):.3g}{ref}")
    print(f"wrote {len(records)} record(s) to {args.out}")
    return 0


def _cmd_compare(args) -> int:
    report = compare_mc_exact(read_records(getattr(args, "in")))
    for row in report.rows:
        z = "n/a" if row.z is None else f"{row.z:+.2f}"
        print(f"{'PASS' if row.ok else 'FAIL'}  {row.label}: mean={row.mean:.6g} "
              f"exact={row.exact:.6g} gap={row.gap:+.3g} z={z}")
    print("comparison:", "PASS" if report.passed else "FAIL")
    return 0 if report.passed else 2


def _load_gate(args):
    if args.gate and args.matrix:
        raise ConfigError("give --gate or --matrix, not both")
    if args.gate:
        return named_gate(args.gate)
    if args.matrix:
        return load_unitary_json(args.matrix)
    raise ConfigError("need --gate or --matrix")


def _cmd_unitary(args) -> int:
    u = _load_gate(args)
    alpha = math.inf if args.alpha == "inf" else int(args.alpha)
    h = unitary_sre(u, alpha)
    print(f"H_{args.alpha}(U) = {h:.12g} bits  ({u.m} qubits)")
    return 0


def _cmd_bounds(args) -> int:
    u = _load_gate(args)
    rep = t_count_bounds(u)
    print(f"H_2 = {rep.h2:.12g} bits")
    print(f"H_0 = {rep.h0:.12g} bits")
    print(f"nullity = {rep.nullity}")
    print(f"T-count lower bound: {rep.t_lower}")
    return 0


def _cmd_decompose(args) -> int:
    group, _ = parse_state_spec(args.state, dense=False)
    cut = list(range(args.cut))
    dec = coset_decompose(group, cut)
    print(f"cut A = qubits {list(dec.cut_a)}, B = qubits {list(dec.cut_b)}")
    print(f"entanglement E = {dec.entanglement} bits ({4 ** dec.entanglement} cosets)")
    print("S_A generators:", ", ".join(str(g) for g in dec.s_a.generators) or "(trivial)")
    print("S_B generators:", ", ".join(str(g) for g in dec.s_b.generators) or "(trivial)")
    for i, (a, b) in enumerate(dec.logical_pairs):
        print(f"logical pair {i}: {a} (x) {b}")
    for i, (a, b) in enumerate(dec.coset_representatives()):
        print(f"coset {i}: {a} S_A (x) {b} S_B")
    return 0


def _cmd_sample_clifford(args) -> int:
    op = random_clifford(args.n, args.seed)
    for j, (x_img, z_img) in enumerate(op.action_table()):
        print(f"X_{j} -> {x_img}    Z_{j} -> {z_img}")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="stabmagic", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="closed-form Haar averages")
    p.add_argument("--scenario", required=True,
                   choices=["bipartite_haar", "bipartite_product", "tripartite_pair", "tripartite_triple"])
    p.add_argument("--dims", nargs="+", required=True,
                   help="key=value pairs, e.g. nA=3 E=2 (comma separation also accepted)")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("mc", help="run a Monte Carlo experiment from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("compare", help="check stored records against exact values")
    p.add_argument("--in", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("unitary", help="unitary stabilizer Renyi entropy")
    p.add_argument("--gate")
    p.add_argument("--matrix")
    p.add_argument("--alpha", default="2")
    p.set_defaults(func=_cmd_unitary)

    p = sub.add_parser("bounds", help="T-count lower bounds for a unitary")
    p.add_argument("--gate")
    p.add_argument("--matrix")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("decompose", help="coset-decompose a named stabilizer state")
    p.add_argument("--state", required=True)
    p.add_argument("--cut", type=int, required=True, help="size of subsystem A (first qubits)")
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("clifford", help="sample a random Clifford action table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_sample_clifford)

    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except StabmagicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
