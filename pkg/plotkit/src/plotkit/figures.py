"""Figure rendering from stabmagic result CSVs.

The CSV column layout is the interface contract with the experiment harness;
this package never imports it. Three figure kinds are supported:

* ``y_vs_E_semilog``  - 1 - mean_y_lin vs E on a log2 axis, Monte Carlo points
  with error bars, exact/leading reference values overlaid as dashed curves.
* ``delta_m2_vs_E``   - injected magic vs E (vs k for rows without an E).
* ``depth_sweep``     - 1 - mean_y_lin vs circuit depth; rows without a depth
  contribute horizontal dashed asymptotes at their exact reference value.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

CSV_HEADER = (
    "scenario,nA,nB,nC,E,g,bAB,bAC,bBC,fA,fB,fC,depth,gate_span,theta,lambda_law,k,"
    "samples,master_seed,estimator,prescramble,mean_y_lin,stderr_y_lin,mean_m2,"
    "stderr_m2,init_m2,delta_m2_mean,delta_m2_stderr,exact_y,leading_y,z_score"
).split(",")

KINDS = ("y_vs_E_semilog", "delta_m2_vs_E", "depth_sweep")


class FigureError(ValueError):
    pass


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    input_csv: str
    output_path: str
    series_column: str = "nA"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise FigureError(f"unknown figure kind {self.kind!r}")
        if self.series_column not in CSV_HEADER:
            raise FigureError(f"series column {self.series_column!r} not in the CSV header")


def read_table(path: str) -> list[dict]:
    """Rows as dicts; empty cells become None, numeric cells are parsed."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FigureError(f"{path} is empty") from None
        if header != CSV_HEADER:
            raise FigureError(f"{path} does not carry the expected result header")
        rows = []
        for raw in reader:
            row = {}
            for name, cell in zip(header, raw):
                if cell == "":
                    row[name] = None
                else:
                    try:
                        row[name] = float(cell) if ("." in cell or "e" in cell or cell in ("inf", "-inf")) else int(cell)
                    except ValueError:
                        row[name] = cell
            rows.append(row)
    return rows


def _series_groups(rows: list[dict], column: str) -> dict:
    groups: dict = {}
    for row in rows:
        groups.setdefault(row.get(column), []).append(row)
    return groups


def _sorted_xy(rows, x_key, y_fn):
    pts = sorted((r[x_key], y_fn(r)) for r in rows)
    return [p[0] for p in pts], [p[1] for p in pts]


def build_figure(spec: FigureSpec):
    """Build the matplotlib figure; returns (figure, axes) for inspection."""
    rows = read_table(spec.input_csv)
    fig, ax = plt.subplots(figsize=(5.2, 3.6), dpi=150)

    if spec.kind == "y_vs_E_semilog":
        usable = [r for r in rows if r["E"] is not None and r["mean_y_lin"] is not None]
        if not usable:
            raise FigureError("empty selection: no rows with both E and mean_y_lin")
        for key, grp in sorted(_series_groups(usable, spec.series_column).items(), key=str):
            label = f"{spec.series_column}={key}"
            xs, ys = _sorted_xy(grp, "E", lambda r: 1 - r["mean_y_lin"])
            errs = [r["stderr_y_lin"] or 0.0 for r in sorted(grp, key=lambda r: r["E"])]
            ax.errorbar(xs, ys, yerr=errs, marker="o", linestyle="none", capsize=2, label=label)
            with_exact = [r for r in grp if r["exact_y"] is not None]
            if with_exact:
                xs, ys = _sorted_xy(with_exact, "E", lambda r: 1 - r["exact_y"])
                ax.plot(xs, ys, linestyle="--", label=f"{label} exact")
            with_lead = [r for r in grp if r["leading_y"] is not None]
            if with_lead:
                xs, ys = _sorted_xy(with_lead, "E", lambda r: 1 - r["leading_y"])
                ax.plot(xs, ys, linestyle=":", label=f"{label} leading")
        ax.set_yscale("log", base=2)
        ax.set_xlabel("entanglement E (bits)")
        ax.set_ylabel(r"$1 - \overline{Y}$")

    elif spec.kind == "delta_m2_vs_E":
        usable = [r for r in rows if r["delta_m2_mean"] is not None
                  and (r["E"] is not None or r["k"] is not None)]
        if not usable:
            raise FigureError("empty selection: no rows with delta_m2_mean")
        x_key = "E" if any(r["E"] is not None for r in usable) else "k"
        usable = [r for r in usable if r[x_key] is not None]
        for key, grp in sorted(_series_groups(usable, spec.series_column).items(), key=str):
            xs, ys = _sorted_xy(grp, x_key, lambda r: r["delta_m2_mean"])
            errs = [r["delta_m2_stderr"] or 0.0 for r in sorted(grp, key=lambda r: r[x_key])]
            ax.errorbar(xs, ys, yerr=errs, marker="s", capsize=2,
                        label=f"{spec.series_column}={key}")
        ax.set_xlabel(f"{x_key} ")
        ax.set_ylabel(r"$\Delta \overline{M_2}$ (bits)")

    else:  # depth_sweep
        with_depth = [r for r in rows if r["depth"] is not None and r["mean_y_lin"] is not None]
        asymptotes = [r for r in rows if r["depth"] is None and r["exact_y"] is not None]
        if not with_depth and not asymptotes:
            raise FigureError("empty selection: no depth rows and no reference rows")
        for key, grp in sorted(_series_groups(with_depth, spec.series_column).items(), key=str):
            xs, ys = _sorted_xy(grp, "depth", lambda r: 1 - r["mean_y_lin"])
            errs = [r["stderr_y_lin"] or 0.0 for r in sorted(grp, key=lambda r: r["depth"])]
            ax.errorbar(xs, ys, yerr=errs, marker="o", capsize=2,
                        label=f"{spec.series_column}={key}")
        seen = set()
        for r in asymptotes:
            level = 1 - r["exact_y"]
            if level not in seen:
                seen.add(level)
                ax.axhline(level, linestyle="--", linewidth=1,
                           label=f"Haar exact ({spec.series_column}={r.get(spec.series_column)})")
        ax.set_yscale("log", base=2)
        ax.set_xlabel("circuit depth")
        ax.set_ylabel(r"$1 - \overline{Y}$")

    ax.legend(fontsize=7)
    fig.tight_layout()
    return fig, ax


def render_figures(spec: FigureSpec) -> str:
    """Render to ``spec.output_path``; deterministic for fixed inputs and
    library versions. Returns the output path."""
    fig, _ = build_figure(spec)
    try:
        fig.savefig(spec.output_path, metadata={"Software": "stabmagic-plotkit"})
    finally:
        plt.close(fig)
    return spec.output_path
