"""Render qpc CSV exports as static figures.

Consumes the CLI's file formats verbatim (locus samples, trace polylines,
R^3 umbilic points, plus the trace verdict sidecars for foliation indices)
and draws them with the standard color convention:

    black  = L1 leaves      red   = L2 leaves     blue = L3 leaves
    green  = P12 arcs       cyan  = P23 arcs

Rendering is a pure function of the CSV bytes and the style flags: fixed
figure geometry, no timestamps, deterministic output bytes.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FOLIATION_COLORS = {1: "black", 2: "red", 3: "blue"}
KIND_COLORS = {"P12": "green", "P23": "cyan"}

LOCUS_COLUMNS = ["curve_id", "kind", "s", "x", "y", "z", "t",
                 "k1", "k2", "k3", "gap12", "gap23", "torsion"]
TRACE_COLUMNS_R4 = ["s", "x", "y", "z", "t"]
TRACE_COLUMNS_R3 = ["s", "x", "y", "z"]
UMBILIC3_COLUMNS = ["point_id", "x", "y", "z", "k1", "k2", "gap"]

PROJECTIONS = ("drop_x", "drop_y", "drop_z", "drop_t", "chart")
_AXIS_INDEX = {"x": 0, "y": 1, "z": 2, "t": 3}


class CsvFormatError(ValueError):
    """Malformed input; message carries the offending row number."""


@dataclass
class PlotJob:
    """One figure: input CSVs, a projection, style overrides, output path."""

    locus_csvs: list[str] = field(default_factory=list)
    trace_csvs: list[str] = field(default_factory=list)
    umbilic_csvs: list[str] = field(default_factory=list)
    projection: str = "drop_t"
    out: str = "figure.png"
    semiaxes_sq: tuple[float, ...] | None = None  # for the chart projection
    foliation_override: dict[str, int] = field(default_factory=dict)
    title: str = ""

    def __post_init__(self):
        if self.projection not in PROJECTIONS:
            raise CsvFormatError(f"unknown projection {self.projection!r}")
        if self.projection == "chart" and self.semiaxes_sq is None:
            raise CsvFormatError("chart projection needs --semiaxes2")


def _read_rows(path: str, expected: list[str] | None = None):
    """Parse a CSV strictly; returns (header, rows of floats/strs)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return [], []
        if expected is not None and header != expected:
            unknown = [c for c in header if c not in expected]
            if unknown:
                raise CsvFormatError(
                    f"{path}: unknown columns {unknown} (row 1)")
            raise CsvFormatError(
                f"{path}: header {header} != expected {expected} (row 1)")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if not raw:
                continue
            if len(raw) != len(header):
                raise CsvFormatError(
                    f"{path}: wrong field count at row {lineno}")
            rows.append((lineno, raw))
        return header, rows


def _floats(path, lineno, cells):
    try:
        return [float(c) for c in cells]
    except ValueError as exc:
        raise CsvFormatError(f"{path}: bad float at row {lineno}: {exc}")


def read_locus(path: str):
    """-> list of (curve_id, kind, points[n,4])"""
    header, rows = _read_rows(path, LOCUS_COLUMNS if _has_header(path) else None)
    groups: dict[str, tuple[str, list]] = {}
    for lineno, raw in rows:
        vals = _floats(path, lineno, raw[2:])
        cid, kind = raw[0], raw[1]
        groups.setdefault(cid, (kind, []))[1].append(vals[1:5])
    return [(cid, kind, np.array(pts)) for cid, (kind, pts) in groups.items()]


def _has_header(path: str) -> bool:
    return os.path.getsize(path) > 0


def read_trace(path: str):
    """-> (points[n, dim], foliation index or None from the sidecar)"""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        first = fh.readline().strip().split(",")
    if first == [""] or first == []:
        return np.empty((0, 4)), None
    expected = TRACE_COLUMNS_R4 if len(first) == 5 else TRACE_COLUMNS_R3
    header, rows = _read_rows(path, expected)
    pts = [_floats(path, lineno, raw)[1:] for lineno, raw in rows]
    foliation = None
    sidecar = path + ".verdict.json"
    if os.path.exists(sidecar):
        with open(sidecar, encoding="utf-8") as fh:
            foliation = json.load(fh).get("foliation")
    return np.array(pts) if pts else np.empty((0, len(expected) - 1)), foliation


def read_umbilics(path: str):
    header, rows = _read_rows(path, UMBILIC3_COLUMNS if _has_header(path) else None)
    return np.array([_floats(path, lineno, raw[1:4])
                     for lineno, raw in rows])


def _project(points: np.ndarray, job: PlotJob) -> np.ndarray:
    if points.size == 0:
        return points.reshape(0, 3)
    if points.shape[1] == 3:
        return points
    if job.projection == "chart":
        semi = np.sqrt(np.array(job.semiaxes_sq, dtype=float))
        scaled = points / semi
        return scaled[:, :3]
    axis = _AXIS_INDEX[job.projection.split("_")[1]]
    keep = [i for i in range(points.shape[1]) if i != axis]
    return points[:, keep]


def _split_on_jumps(pts: np.ndarray) -> list[np.ndarray]:
    """Break a polyline where consecutive samples jump (closed-conic wrap)."""
    if len(pts) < 3:
        return [pts]
    d = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    med = np.median(d[d > 0]) if np.any(d > 0) else 0.0
    cuts = np.where(d > 10 * max(med, 1e-12))[0]
    pieces = []
    start = 0
    for c in cuts:
        pieces.append(pts[start:c + 1])
        start = c + 1
    pieces.append(pts[start:])
    return [p for p in pieces if len(p) > 0]


def render(job: PlotJob) -> str:
    """Draw the job to `job.out` (PNG or SVG); returns the output path."""
    fig = plt.figure(figsize=(7.0, 6.0), dpi=120)
    ax = fig.add_subplot(111, projection="3d")
    labeled: set[str] = set()

    def plot_curve(p3, color, label):
        show = label if label not in labeled else None
        for piece in _split_on_jumps(p3):
            ax.plot(piece[:, 0], piece[:, 1], piece[:, 2],
                    color=color, linewidth=1.0, label=show)
            show = None
        labeled.add(label)

    for path in job.locus_csvs:
        for cid, kind, pts in read_locus(path):
            color = KIND_COLORS.get(kind, "green")
            plot_curve(_project(pts, job), color, f"{kind} locus")

    for path in job.trace_csvs:
        pts, foliation = read_trace(path)
        if path in job.foliation_override:
            foliation = job.foliation_override[path]
        color = FOLIATION_COLORS.get(foliation, "gray")
        label = f"L{foliation} leaf" if foliation else "leaf"
        if pts.size:
            plot_curve(_project(pts, job), color, label)

    for path in job.umbilic_csvs:
        pts = read_umbilics(path)
        if pts.size:
            p3 = _project(pts, job)
            ax.scatter(p3[:, 0], p3[:, 1], p3[:, 2], color="darkorange",
                       s=30, label="umbilic points", depthshade=False)

    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_zlabel("z")
    if job.title:
        ax.set_title(job.title)
    if labeled or job.umbilic_csvs:
        ax.legend(loc="upper right", fontsize=8)
    ax.view_init(elev=18.0, azim=-60.0)

    savefig_kwargs = {"metadata": _clean_metadata(job.out)}
    fig.savefig(job.out, **savefig_kwargs)
    plt.close(fig)
    return job.out


def _clean_metadata(out: str) -> dict:
    # strip run-dependent metadata so reruns are byte-identical
    if out.endswith(".svg"):
        matplotlib.rcParams["svg.hashsalt"] = "qpc-viz"
        return {"Date": None, "Creator": "qpc-viz"}
    return {"Software": "qpc-viz"}
