"""betcs-plot: render figures from betcs records CSVs.

    betcs-plot --panel widths --in out/records.csv --out fig.png
    betcs-plot --panel intervals --in out/records.csv --mu 0.5 --out fig.png
    betcs-plot --panel cp_compare --in d10/records.csv d05/records.csv \
               --deltas 0.1,0.05 --out fig.png

Exit codes: 0 success, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import PANELS, DataError, FigureSpec, SchemaError, render


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="betcs-plot", description=__doc__)
    parser.add_argument("--panel", required=True, choices=PANELS)
    parser.add_argument(
        "--in", dest="inputs", required=True, nargs="+", help="records.csv paths"
    )
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--algos", default=None, help="comma-separated algorithm subset")
    parser.add_argument("--mu", type=float, default=None, help="true mean annotation")
    parser.add_argument(
        "--deltas", default=None, help="comma-separated delta annotations, one per input"
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        deltas = tuple(float(d) for d in args.deltas.split(",")) if args.deltas else ()
        algos = ()
        if args.algos is not None:
            algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
            if not algos:
                raise SchemaError("empty algorithm subset")
        spec = FigureSpec(
            inputs=tuple(args.inputs),
            output=args.out,
            panel=args.panel,
            deltas=deltas,
            mu=args.mu,
            algos=algos,
        )
        out = render(spec)
        print(out)
        return 0
    except (SchemaError, DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
