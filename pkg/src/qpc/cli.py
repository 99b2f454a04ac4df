"""Command-line surface: curvature queries, locus/trace exports, validation.

File outputs are written atomically (temp file + rename), always UTF-8 with
LF line endings and 17-significant-digit floats, and every artifact gets a
sidecar manifest so a run can be reproduced bit for bit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import numpy as np

from . import __version__
from .core import (
    OffSurfaceError,
    QpcError,
    QuadricSpec,
    SpecError,
    evaluate,
    principal_data,
    project_to_surface,
)
from .locus import partially_umbilic_locus, sample_locus
from .r3 import r3_umbilics
from .tracer import DegenerateDirectionError, TraceConfig, trace_leaf
from .validate import run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qpc-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_manifest(out_path: str, args: argparse.Namespace,
                    extra: dict | None = None) -> None:
    manifest = {
        "tool": "qpc",
        "version": __version__,
        "command": args.command,
        "family": getattr(args, "family", None),
        "semiaxes_sq": getattr(args, "_semiaxes_sq", None),
        "seed": getattr(args, "seed", None),
        "out": out_path,
        "tolerances": getattr(args, "_tolerances", {}),
    }
    if extra:
        manifest.update(extra)
    _atomic_write(out_path + ".manifest.json",
                  json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _build_spec(args) -> QuadricSpec:
    if args.semiaxes2 is not None:
        squares = _parse_floats(args.semiaxes2)
    elif args.semiaxes is not None:
        squares = tuple(v * v for v in _parse_floats(args.semiaxes))
    else:
        raise SpecError("one of --semiaxes2 / --semiaxes is required")
    args._semiaxes_sq = list(squares)
    return QuadricSpec(args.family, squares)


def _add_spec_flags(p: argparse.ArgumentParser, families) -> None:
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--semiaxes2", help="squared semiaxes a2,b2,c2[,d2]")
    p.add_argument("--semiaxes", help="semiaxes a,b,c[,d] (squared internally)")


def cmd_curvature(args) -> int:
    spec = _build_spec(args)
    point = np.array(_parse_floats(args.point))
    if len(point) != spec.ambient_dim:
        raise SpecError(f"point must have {spec.ambient_dim} coordinates")
    res = evaluate(spec, point)
    if abs(res) > spec.on_surface_tol:
        print(f"point off-surface: residual {res:.3e} exceeds "
              f"{spec.on_surface_tol:.3e}", file=sys.stderr)
        return EXIT_DOMAIN
    pd = principal_data(spec, point)
    payload = {
        "family": spec.family,
        "semiaxes_sq": list(spec.semiaxes_sq),
        "point": [float(v) for v in point],
        "residual": res,
        "curvatures": list(pd.curvatures),
        "gaps": list(pd.gaps),
        "directions": [[float(v) for v in d] for d in pd.directions],
    }
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_umbilic(args) -> int:
    spec = _build_spec(args)
    if spec.ambient_dim != 4:
        print("umbilic expects an R^4 family; use umbilic3", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    for curve in partially_umbilic_locus(spec):
        for smp in sample_locus(curve, args.n):
            _, tau = curve.curvature_torsion_at(smp.s)
            x, y, z, t = smp.point.coords
            k1, k2, k3 = smp.principal.curvatures
            g12, g23 = smp.principal.gaps
            rows.append([curve.curve_id, curve.kind, smp.s, x, y, z, t,
                         k1, k2, k3, g12, g23, tau])
    header = ["curve_id", "kind", "s", "x", "y", "z", "t",
              "k1", "k2", "k3", "gap12", "gap23", "torsion"]
    _write_csv(args.out, header, rows)
    _write_manifest(args.out, args, {"n": args.n})
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_umbilic3(args) -> int:
    spec = _build_spec(args)
    if spec.ambient_dim != 3:
        print("umbilic3 expects an R^3 family; use umbilic", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    for i, sp in enumerate(r3_umbilics(spec)):
        pd = principal_data(spec, sp.coords)
        x, y, z = sp.coords
        rows.append([f"U{i + 1}", x, y, z, pd.curvatures[0], pd.curvatures[1],
                     pd.gaps[0]])
    _write_csv(args.out, ["point_id", "x", "y", "z", "k1", "k2", "gap"], rows)
    _write_manifest(args.out, args)
    print(f"wrote {len(rows)} umbilic points to {args.out}")
    return EXIT_OK


def cmd_trace(args) -> int:
    spec = _build_spec(args)
    start = np.array(_parse_floats(args.start))
    if len(start) != spec.ambient_dim:
        raise SpecError(f"start must have {spec.ambient_dim} coordinates")
    if abs(evaluate(spec, start)) > 1e-6:
        print(f"start point too far off-surface: residual "
              f"{evaluate(spec, start):.3e} > 1e-06", file=sys.stderr)
        return EXIT_DOMAIN
    overrides = {}
    for key in ("h0", "min_step", "max_step", "gap_stop", "escape_radius",
                "max_arclength", "close_tol", "projection_tol"):
        val = getattr(args, key)
        if val is not None:
            overrides[key] = val
    cfg = TraceConfig.for_spec(spec, args.foliation, **overrides)
    args._tolerances = {
        "h0": cfg.h0, "min_step": cfg.min_step, "max_step": cfg.max_step,
        "projection_tol": cfg.projection_tol, "gap_stop": cfg.gap_stop,
        "escape_radius": cfg.escape_radius, "max_arclength": cfg.max_arclength,
        "close_tol": cfg.close_tol,
    }
    try:
        start_on = project_to_surface(spec, start, tol=cfg.projection_tol)
        leaf = trace_leaf(spec, start_on, cfg)
    except DegenerateDirectionError as exc:
        print(f"degenerate start: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    coords = ["x", "y", "z", "t"][: spec.ambient_dim]
    rows = []
    s_acc = 0.0
    prev = None
    for p in leaf.points:
        if prev is not None:
            s_acc += float(np.linalg.norm(p - prev))
        rows.append([s_acc] + [float(v) for v in p])
        prev = p
    _write_csv(args.out, ["s"] + coords, rows)
    verdict = {
        "verdict": leaf.verdict,
        "arclength": leaf.arclength,
        "return_gap": leaf.return_gap,
        "min_eigen_gap": leaf.min_eigen_gap,
        "foliation": leaf.foliation,
        "n_points": len(leaf.points),
        "diagnostics": leaf.diagnostics,
    }
    _atomic_write(args.out + ".verdict.json",
                  json.dumps(verdict, sort_keys=True, indent=2) + "\n")
    _write_manifest(args.out, args, {"foliation": args.foliation,
                                     "start": [float(v) for v in start]})
    print(json.dumps({"verdict": leaf.verdict,
                      "arclength": leaf.arclength,
                      "return_gap": leaf.return_gap}, sort_keys=True))
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        results = run_suite(args.suite, seed=args.seed)
    except KeyError as exc:
        print(str(exc.args[0]), file=sys.stderr)
        return EXIT_USAGE
    all_pass = True
    for suite in results:
        for check in suite.checks:
            line = dict(suite=suite.name, **check.as_dict())
            print(json.dumps(line, sort_keys=True))
            all_pass = all_pass and check.passed
    summary = {"suites": {s.name: s.passed for s in results},
               "all_pass": all_pass, "seed": args.seed}
    print(json.dumps({"summary": summary}, sort_keys=True))
    return EXIT_OK if all_pass else EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpc",
        description="Principal-curvature configurations of quadric "
                    "hypersurfaces: curvature queries, partially umbilic "
                    "loci, principal-foliation traces, validation suites.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curvature", help="principal data at a surface point")
    _add_spec_flags(p, ("Q0", "Q1", "Q2", "Q3", "q0", "q1", "q2"))
    p.add_argument("--point", required=True)
    p.set_defaults(fn=cmd_curvature)

    p = sub.add_parser("umbilic", help="CSV of partially umbilic locus samples")
    _add_spec_flags(p, ("Q0", "Q1", "Q2", "Q3", "q0", "q1", "q2"))
    p.add_argument("--n", type=int, default=100, help="samples per curve")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_umbilic)

    p = sub.add_parser("umbilic3", help="CSV of R^3 umbilic points")
    _add_spec_flags(p, ("q0", "q1", "q2"))
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_umbilic3)

    p = sub.add_parser("trace", help="trace one principal-foliation leaf")
    _add_spec_flags(p, ("Q0", "Q1", "Q2", "Q3", "q0", "q1", "q2"))
    p.add_argument("--foliation", type=int, required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--out", required=True)
    for key in ("h0", "min-step", "max-step", "gap-stop", "escape-radius",
                "max-arclength", "close-tol", "projection-tol"):
        p.add_argument(f"--{key}", dest=key.replace("-", "_"), type=float)
    p.set_defaults(fn=cmd_trace)

    p = sub.add_parser("validate", help="run acceptance suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(fn=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SpecError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except OffSurfaceError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN
    except QpcError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
