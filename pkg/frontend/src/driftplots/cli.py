"""Command-line entry point: CSV paths in, one stacked-panel image out."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .figure import DEFAULT_PANELS, FigureSpec, MissingColumnError, render_figure

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def _parse_panels(text: str):
    """Semicolon-separated panels of comma-separated column names."""
    panels = tuple(tuple(c.strip() for c in group.split(",") if c.strip())
                   for group in text.split(";") if group.strip())
    if not panels:
        raise argparse.ArgumentTypeError(f"no panels in {text!r}")
    return panels


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="driftplots",
        description="Render stacked log10 drift-error panels from solver "
                    "diagnostic CSVs.")
    parser.add_argument("csv", nargs="+", help="input diagnostic CSV path(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--panels", type=_parse_panels, default=DEFAULT_PANELS,
                        metavar="a,b;c,d",
                        help="column groups, one panel per ';' group "
                             "(default: errK,errMK;errI,errMI)")
    try:
        ns = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        result = render_figure(FigureSpec(csv_paths=tuple(ns.csv),
                                          out_path=ns.out, panels=ns.panels))
    except MissingColumnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA

    print(f"wrote {ns.out}: {result.row_count} rows, "
          f"series {', '.join(f'{k}={v}' for k, v in result.plotted.items())}; "
          f"{result.caption}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
