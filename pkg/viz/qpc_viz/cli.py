"""Command-line entry: qpc-viz --locus a.csv --trace b.csv --out fig.png"""

from __future__ import annotations

import argparse
import sys

from .render import CsvFormatError, PlotJob, PROJECTIONS, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qpc-viz",
        description="Render qpc CSV exports (loci, traces, umbilics) as a "
                    "static 3D figure.")
    p.add_argument("--locus", action="append", default=[],
                   help="locus CSV from `qpc umbilic` (repeatable)")
    p.add_argument("--trace", action="append", default=[],
                   help="trace CSV from `qpc trace` (repeatable)")
    p.add_argument("--umbilics", action="append", default=[],
                   help="umbilic-point CSV from `qpc umbilic3` (repeatable)")
    p.add_argument("--projection", default="drop_t", choices=PROJECTIONS)
    p.add_argument("--semiaxes2", help="squared semiaxes for chart projection")
    p.add_argument("--title", default="")
    p.add_argument("--out", required=True, help="PNG or SVG path")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    semiaxes_sq = None
    if args.semiaxes2:
        semiaxes_sq = tuple(float(v) for v in args.semiaxes2.split(","))
    try:
        job = PlotJob(
            locus_csvs=args.locus,
            trace_csvs=args.trace,
            umbilic_csvs=args.umbilics,
            projection=args.projection,
            out=args.out,
            semiaxes_sq=semiaxes_sq,
            title=args.title,
        )
        render(job)
    except CsvFormatError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
