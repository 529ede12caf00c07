"""stabmagic-plot: render figures from stabmagic result CSVs."""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureError, FigureSpec, render_figures


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="stabmagic-plot", description=__doc__)
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="input_csv", required=True)
    parser.add_argument("--out", dest="output_path", required=True)
    parser.add_argument("--series", default="nA", help="column that groups series")
    args = parser.parse_args(argv)
    try:
        path = render_figures(
            FigureSpec(args.kind, args.input_csv, args.output_path, args.series)
        )
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
