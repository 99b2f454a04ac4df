"""Numerical integration of the principal line fields.

Leaves are traced on the implicit surface directly (no charts): the field is
the unit eigenvector of the requested sorted-curvature slot, followed with
directional continuity (principal line fields are not globally orientable),
integrated with an adaptive Dormand-Prince 4(5) pair and projected back to
the level set after every accepted step.  Closure is detected by first
return to the Poincare section through the seed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    QpcError,
    QuadricSpec,
    _shape_in_basis,
    project_to_surface,
)
from .eigen import eigh_small, fix_sign

VERDICT_CLOSED = "Closed"
VERDICT_ESCAPED = "Escaped"
VERDICT_UMBILIC = "UmbilicApproach"
VERDICT_STEP_FAILURE = "StepFailure"


class DegenerateDirectionError(QpcError):
    """Line field undefined: adjacent eigenvalue gap below the stop threshold."""


@dataclass(frozen=True)
class TraceConfig:
    """Tracing controls; defaults scale with the quadric size."""

    foliation: int
    h0: float
    min_step: float
    max_step: float
    projection_tol: float
    gap_stop: float = 1e-5
    escape_radius: float = 0.0
    max_arclength: float = 0.0
    close_tol: float = 0.0
    rtol: float = 1e-9
    atol: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.min_step <= self.h0 <= self.max_step):
            raise ValueError("need 0 < min_step <= h0 <= max_step")
        if self.close_tol <= self.projection_tol:
            raise ValueError("close_tol must exceed the projection tolerance")

    @classmethod
    def for_spec(cls, spec: QuadricSpec, foliation: int, **overrides) -> "TraceConfig":
        scale = spec.scale
        base = dict(
            foliation=foliation,
            h0=1e-3 * scale,
            min_step=1e-8 * scale,
            max_step=1.0 * scale,
            projection_tol=1e-10 * spec.scale_sq,
            gap_stop=1e-5,
            escape_radius=100.0 * scale,
            max_arclength=1e3 * scale,
            close_tol=1e-4 * scale,
            rtol=1e-9,
            atol=1e-11 * scale,
        )
        base.update(overrides)
        return cls(**base)


@dataclass
class LeafTrace:
    """Traced leaf: polyline, verdict, and the observed degeneracy margin."""

    points: np.ndarray
    arclength: float
    verdict: str
    return_gap: float | None
    min_eigen_gap: float
    foliation: int
    diagnostics: dict = field(default_factory=dict)


def _direction_gap(spec: QuadricSpec, p: np.ndarray, i: int,
                   prev: np.ndarray | None) -> tuple[np.ndarray, float]:
    s_mat, basis = _shape_in_basis(spec, p)
    vals, vecs = eigh_small(s_mat)
    n_fields = len(vals)
    if not 1 <= i <= n_fields:
        raise ValueError(f"foliation index {i} out of range 1..{n_fields}")
    if n_fields == 2:
        gap = vals[1] - vals[0]
    elif i == 1:
        gap = vals[1] - vals[0]
    elif i == n_fields:
        gap = vals[-1] - vals[-2]
    else:
        gap = min(vals[1] - vals[0], vals[2] - vals[1])
    direction = basis @ vecs[:, i - 1]
    direction = direction / np.linalg.norm(direction)
    if prev is not None:
        if float(direction @ prev) < 0.0:
            direction = -direction
    else:
        direction = fix_sign(direction)
    return direction, float(gap)


def direction_at(spec: QuadricSpec, p: Sequence[float], i: int,
                 previous_direction: Sequence[float] | None = None,
                 gap_floor: float = 1e-5) -> np.ndarray:
    """Unit tangent of the i-th sorted principal line field at p."""
    prev = None if previous_direction is None else np.asarray(previous_direction, float)
    direction, gap = _direction_gap(spec, np.asarray(p, dtype=float), i, prev)
    if gap <= gap_floor:
        raise DegenerateDirectionError(
            f"eigenvalue gap {gap:.3e} <= {gap_floor:.1e}: line field undefined"
        )
    return direction


# Dormand-Prince 4(5) tableau.
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)


class _HalfTrace:
    """Forward integration of one half-leaf from a seed point."""

    def __init__(self, spec: QuadricSpec, cfg: TraceConfig,
                 p0: np.ndarray, dir0: np.ndarray,
                 section: tuple[np.ndarray, np.ndarray] | None):
        self.spec = spec
        self.cfg = cfg
        self.p0 = p0
        self.dir0 = dir0
        self.section = section
        self.points = [p0.copy()]
        self.arclength = 0.0
        self.min_gap = math.inf
        self.return_gap: float | None = None
        self.verdict: str | None = None
        self.diag: dict = {}

    def _field(self, q: np.ndarray, prev: np.ndarray) -> np.ndarray:
        d, gap = _direction_gap(self.spec, q, self.cfg.foliation, prev)
        self.min_gap = min(self.min_gap, gap)
        return d

    def _rk_step(self, p: np.ndarray, h: float, prev: np.ndarray):
        ks = []
        for stage in range(7):
            q = p if stage == 0 else p + h * sum(
                a * ks[j] for j, a in enumerate(_DP_A[stage])
            )
            ref = prev if stage == 0 else ks[stage - 1]
            ks.append(self._field(q, ref))
        y5 = p + h * sum(b * k for b, k in zip(_DP_B5, ks))
        y4 = p + h * sum(b * k for b, k in zip(_DP_B4, ks))
        err = float(np.linalg.norm(y5 - y4))
        return y5, err, ks

    def run(self) -> None:
        cfg = self.cfg
        p = self.p0.copy()
        try:
            prev = self._field(p, self.dir0)
        except Exception:
            self.verdict = VERDICT_UMBILIC
            return
        if self.min_gap <= cfg.gap_stop:
            self.verdict = VERDICT_UMBILIC
            return
        h = cfg.h0
        armed = False
        arm_dist = max(10.0 * cfg.close_tol, 5.0 * cfg.h0)
        # the crossing point can sit up to a step away from the accepted
        # endpoint, so the capture window scales with the step bound
        capture = 2.0 * cfg.max_step + 10.0 * cfg.close_tol
        g_prev = 0.0
        while True:
            if self.arclength > cfg.max_arclength:
                self.verdict = VERDICT_STEP_FAILURE
                self.diag["reason"] = "arclength budget exhausted"
                return
            accepted = False
            while not accepted:
                try:
                    y5, err, ks = self._rk_step(p, h, prev)
                except DegenerateDirectionError:
                    self.verdict = VERDICT_UMBILIC
                    return
                tol = cfg.atol + cfg.rtol * max(1.0, float(np.linalg.norm(p)))
                if self.min_gap <= cfg.gap_stop:
                    self.verdict = VERDICT_UMBILIC
                    return
                if err <= tol:
                    accepted = True
                else:
                    h = max(0.25 * h, 0.9 * h * (tol / err) ** 0.2)
                    if h < cfg.min_step:
                        self.verdict = VERDICT_STEP_FAILURE
                        self.diag["reason"] = "step underflow"
                        return
            step_len = h
            p_new = project_to_surface(self.spec, y5, tol=cfg.projection_tol)
            self.points.append(p_new.copy())
            self.arclength += step_len
            # FSAL-style orientation carry: k7 is the field at y5, and the
            # projection displacement is far below a step
            prev_new = ks[-1]

            if self.section is not None:
                q0, t0 = self.section
                dist = float(np.linalg.norm(p_new - q0))
                if not armed and dist > arm_dist:
                    armed = True
                    g_prev = float((p_new - q0) @ t0)
                elif armed:
                    g_new = float((p_new - q0) @ t0)
                    if g_prev < 0.0 <= g_new and dist < capture:
                        gap, aligned = self._refine_crossing(p, prev, h, q0, t0)
                        if gap is not None and gap <= cfg.close_tol and aligned:
                            self.return_gap = gap
                            self.verdict = VERDICT_CLOSED
                            return
                    g_prev = g_new

            if float(np.linalg.norm(p_new)) > cfg.escape_radius:
                self.verdict = VERDICT_ESCAPED
                return
            # step-size growth for the next step
            tol = cfg.atol + cfg.rtol * max(1.0, float(np.linalg.norm(p)))
            if err > 0:
                h = min(cfg.max_step, max(cfg.min_step,
                                          0.9 * h * (tol / err) ** 0.2))
            else:
                h = min(cfg.max_step, 2.0 * h)
            p = p_new
            prev = prev_new

    def _refine_crossing(self, p_from, dir_from, h, q0, t0):
        """Sub-step bisection to the section crossing; returns (gap, aligned)."""

        def advance(alpha: float) -> np.ndarray:
            # single RK4 sub-step of size alpha*h from p_from
            hh = alpha * h
            if hh == 0.0:
                return p_from
            k1 = self._field(p_from, dir_from)
            k2 = self._field(p_from + 0.5 * hh * k1, k1)
            k3 = self._field(p_from + 0.5 * hh * k2, k2)
            k4 = self._field(p_from + hh * k3, k3)
            q = p_from + (hh / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            return project_to_surface(self.spec, q, tol=self.cfg.projection_tol)

        def g(alpha: float) -> float:
            return float((advance(alpha) - q0) @ t0)

        lo, hi = 0.0, 1.0
        g_lo, g_hi = g(lo), g(hi)
        if g_lo == 0.0:
            alpha_star = 0.0
        elif g_lo * g_hi > 0.0:
            return None, False
        else:
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                gm = g(mid)
                if g_lo * gm <= 0.0:
                    hi, g_hi = mid, gm
                else:
                    lo, g_lo = mid, gm
            alpha_star = 0.5 * (lo + hi)
        q_star = advance(alpha_star)
        gap = float(np.linalg.norm(q_star - q0))
        try:
            tangent = self._field(q_star, dir_from)
            aligned = float(tangent @ t0) > 0.999
        except DegenerateDirectionError:
            aligned = False
        return gap, aligned


def trace_leaf(spec: QuadricSpec, p0: Sequence[float], cfg: TraceConfig) -> LeafTrace:
    """Trace the full leaf through p0; see the module docstring.

    Closed leaves are detected on the forward half; otherwise the two
    half-leaves are unified into one polyline with consistent orientation.
    """
    p0 = project_to_surface(spec, np.asarray(p0, dtype=float),
                            tol=cfg.projection_tol)
    t0 = direction_at(spec, p0, cfg.foliation, None, gap_floor=cfg.gap_stop)

    fwd = _HalfTrace(spec, cfg, p0, t0, section=(p0, t0))
    fwd.run()
    if fwd.verdict == VERDICT_CLOSED:
        pts = np.asarray(fwd.points)
        return LeafTrace(pts, fwd.arclength, VERDICT_CLOSED, fwd.return_gap,
                         fwd.min_gap, cfg.foliation, fwd.diag)

    bwd = _HalfTrace(spec, cfg, p0, -t0, section=None)
    bwd.run()
    pts = np.vstack([np.asarray(bwd.points)[::-1], np.asarray(fwd.points)[1:]])
    verdicts = {fwd.verdict, bwd.verdict}
    if VERDICT_STEP_FAILURE in verdicts:
        verdict = VERDICT_STEP_FAILURE
    elif VERDICT_UMBILIC in verdicts:
        verdict = VERDICT_UMBILIC
    else:
        verdict = VERDICT_ESCAPED
    diag = {"forward": fwd.verdict, "backward": bwd.verdict}
    diag.update({f"fwd_{k}": v for k, v in fwd.diag.items()})
    diag.update({f"bwd_{k}": v for k, v in bwd.diag.items()})
    return LeafTrace(pts, fwd.arclength + bwd.arclength, verdict, None,
                     min(fwd.min_gap, bwd.min_gap), cfg.foliation, diag)


@dataclass
class CensusReport:
    family: str
    foliation: int
    verdicts: list[str]
    fractions: dict[str, float]
    worst_return_gap: float | None
    min_eigen_gap: float

    @property
    def all_closed(self) -> bool:
        return all(v == VERDICT_CLOSED for v in self.verdicts)

    @property
    def all_escaped(self) -> bool:
        return all(v == VERDICT_ESCAPED for v in self.verdicts)


def qpc_threads() -> int:
    try:
        return max(1, int(os.environ.get("QPC_THREADS", "1")))
    except ValueError:
        return 1


def leaf_census(spec: QuadricSpec, i: int, seeds: Sequence[Sequence[float]],
                cfg: TraceConfig | None = None) -> CensusReport:
    """Trace every seed, aggregate verdicts; deterministic seed -> job order."""
    cfg = cfg or TraceConfig.for_spec(spec, i)
    if cfg.foliation != i:
        cfg = TraceConfig.for_spec(spec, i)

    def job(seed):
        return trace_leaf(spec, np.asarray(seed, dtype=float), cfg)

    workers = qpc_threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(job, seeds))
    else:
        traces = [job(s) for s in seeds]
    verdicts = [t.verdict for t in traces]
    fractions = {v: verdicts.count(v) / len(verdicts) for v in set(verdicts)}
    gaps = [t.return_gap for t in traces if t.return_gap is not None]
    return CensusReport(
        family=spec.family,
        foliation=i,
        verdicts=verdicts,
        fractions=fractions,
        worst_return_gap=max(gaps) if gaps else None,
        min_eigen_gap=min(t.min_eigen_gap for t in traces),
    )


def census_seeds(spec: QuadricSpec, n: int, seed: int,
                 margin: float = 0.15, span_cap: float | None = None) -> np.ndarray:
    """Deterministic on-surface seeds from chart-interior coordinates.

    Coordinates are drawn uniformly from the middle of each slot interval
    (unbounded slots capped), so seeds stay away from the partially umbilic
    walls; orthants are drawn uniformly.
    """
    from .charts import chart_intervals, _point_from_lams

    rng = np.random.default_rng(seed)
    intervals = chart_intervals(spec)
    cap = span_cap if span_cap is not None else 2.0 * spec.scale_sq
    pts = np.empty((n, spec.ambient_dim))
    for row in range(n):
        lams = []
        for lo, hi in intervals:
            if math.isinf(hi):
                lo_eff, hi_eff = lo + margin * cap, lo + cap
            else:
                width = hi - lo
                lo_eff, hi_eff = lo + margin * width, hi - margin * width
            lams.append(rng.uniform(lo_eff, hi_eff))
        orthant = tuple(int(s) for s in rng.choice([-1, 1], spec.ambient_dim))
        pts[row] = _point_from_lams(spec, np.array(lams), orthant).coords
    return pts
