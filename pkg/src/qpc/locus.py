"""Partially umbilic loci: conics in graph charts, sampling, torsion.

Each locus is a coincidence set of two confocal slots frozen at a common
value m_c while the third sweeps its interval; partial fractions make every
ambient coordinate square affine in the sweeping coordinate, which yields
smooth global parametrizations (trigonometric for the closed conics,
coordinate-parametrized for the unbounded arcs, glued hyperbolic pieces for
the ellipsoid's boundary-crossing curves).  Torsion comes from exact
third-order jets of these parametrizations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .charts import SLOT_NAMES, chart_intervals
from .conformal import build_transfer
from .core import (
    PrincipalData,
    QpcError,
    QuadricSpec,
    SurfacePoint,
    principal_data,
    surface_point,
)
from .jets import (
    Jet3,
    frenet_torsion,
    jet_const,
    jet_cos,
    jet_cosh,
    jet_sin,
    jet_sinh,
    jet_var,
)

#: Two curvatures are "coincident" below this absolute gap.
COINCIDENCE_GAP = 1e-8

#: ... while the remaining gap must stay above this floor.
SEPARATION_GAP = 1e-3

#: Relative parameter clamp away from arc endpoints / glue points.
PARAM_CLAMP = 1e-4

#: Unbounded arcs are windowed to |point| <= BOX_FACTOR * scale.
BOX_FACTOR = 5.0

AXIS_NAMES = ("x", "y", "z", "t")


class NonBiregularError(QpcError):
    """Curve curvature dropped below the biregularity floor."""


# ---------------------------------------------------------------------------
# graph charts


@dataclass(frozen=True)
class GraphChart:
    """Quadric as a graph of one ambient coordinate over the other three.

    Graph coordinates are the scaled ambient ones (x_i / axis_i) on `axes`;
    the lifted coordinate is lift_sign * axis_lift * sqrt(D) with
    D = const + sum_i signs_i * t_i^2.
    """

    family: str
    axes: tuple[int, int, int]
    lift_axis: int
    const: float
    signs: tuple[int, int, int]

    def radicand(self, uvw: Sequence[float]) -> float:
        t = np.asarray(uvw, dtype=float)
        return float(self.const + np.sum(np.array(self.signs) * t * t))


_GRAPH_TABLE = {
    "Q0": ((0, 1, 2), 3, 1.0, (-1, -1, -1)),
    "Q1": ((0, 1, 2), 3, -1.0, (1, 1, 1)),
    "Q2": ((0, 1, 2), 3, -1.0, (1, 1, -1)),
    "Q3": ((1, 2, 3), 0, 1.0, (1, 1, 1)),
}


def graph_chart(spec: QuadricSpec) -> GraphChart:
    axes, lift, const, signs = _GRAPH_TABLE[spec.family]
    return GraphChart(spec.family, axes, lift, const, signs)


def graph_point(spec: QuadricSpec, uvw: Sequence[float], lift_sign: int = 1) -> np.ndarray:
    gc = graph_chart(spec)
    semi = spec.semiaxes
    d_val = gc.radicand(uvw)
    if d_val < 0:
        raise ValueError(f"lift radicand {d_val} negative at {uvw}")
    p = np.zeros(spec.ambient_dim)
    for k, ax in enumerate(gc.axes):
        p[ax] = semi[ax] * uvw[k]
    p[gc.lift_axis] = lift_sign * semi[gc.lift_axis] * math.sqrt(d_val)
    return p


def graph_chart_forms(spec: QuadricSpec, uvw: Sequence[float],
                      lift_sign: int = 1, eps: float = 1e-10):
    """Full (non-diagonal) g_ij, b_ij of the graph chart.

    b is taken against the paper's sqrt(D)-scaled normal
    nu = eta * abcd * grad(Q) / (2 sqrt(D)) with eta fixing the lift
    component positive; closed forms:
        g_ij = delta_ij axis_i^2 + axis_L^2 s_i t_i s_j t_j / D
        b_ij = lift_sign * abcd * (s_i delta_ij D - s_i s_j t_i t_j) / D^{3/2}
    For Q2 this reproduces the displayed block entry for entry.
    """
    from .charts import FundamentalForms

    gc = graph_chart(spec)
    t = np.asarray(uvw, dtype=float)
    d_val = gc.radicand(t)
    if d_val <= eps:
        raise ValueError(f"graph-chart boundary: D = {d_val} <= {eps}")
    semi = spec.semiaxes
    ax = np.array([semi[a] for a in gc.axes])
    lift = semi[gc.lift_axis]
    s = np.array(gc.signs, dtype=float)
    prod_axes = spec.axis_product
    g = np.diag(ax * ax) + lift * lift * np.outer(s * t, s * t) / d_val
    b = lift_sign * prod_axes * (np.diag(s) * d_val - np.outer(s * t, s * t)) \
        / d_val ** 1.5
    return FundamentalForms(
        g=tuple(float(g[i, i]) for i in range(3)),
        b=tuple(float(b[i, i]) for i in range(3)),
        offdiag_g=(float(g[0, 1]), float(g[0, 2]), float(g[1, 2])),
        offdiag_b=(float(b[0, 1]), float(b[0, 2]), float(b[1, 2])),
    )


def locus_defining_residual(spec: QuadricSpec, uv: Sequence[float],
                            lift_sign: int = 1) -> float:
    """Defining equation of the w = 0 partially umbilic conic, graph chart.

    At w = 0 the graph chart decouples into the (u, v) block plus the
    pure-w direction with eigenvalue kappa = b33/g33; the locus is where a
    block eigenvalue meets kappa: det(b_block - kappa * g_block) = 0.
    (The 2x2-proportionality minors characterize a coincidence inside the
    block, which is not this locus.)
    """
    ff = graph_chart_forms(spec, (uv[0], uv[1], 0.0), lift_sign)
    kappa = ff.b[2] / ff.g[2]
    m00 = ff.b[0] - kappa * ff.g[0]
    m11 = ff.b[1] - kappa * ff.g[1]
    m01 = ff.offdiag_b[0] - kappa * ff.offdiag_g[0]
    return m00 * m11 - m01 * m01


# ---------------------------------------------------------------------------
# curve parametrizations


@dataclass
class CurveSegment:
    """One smooth piece of a locus curve.

    jets_fn returns ambient Jet3 coordinates; speed may blow up like an
    inverse square root at a singular end (chart-boundary glue points).
    """

    t_lo: float
    t_hi: float
    jets_fn: Callable[[float], list[Jet3]]
    singular_lo: bool = False
    singular_hi: bool = False
    crossings: tuple[tuple[float, int], ...] = ()

    def point(self, t: float) -> np.ndarray:
        return np.array([j.f for j in self.jets_fn(t)])

    def speed(self, t: float) -> float:
        return math.sqrt(sum(j.d1 ** 2 for j in self.jets_fn(t)))


@dataclass
class PartiallyUmbilicCurve:
    """One component of the partially umbilic set with its parametrization."""

    spec: QuadricSpec
    curve_id: str
    kind: str                      # measured: 'P12' or 'P23'
    paper_label: str               # the paper's name for the conic
    hyperplane_axis: int           # ambient coordinate that vanishes
    aux_spec: QuadricSpec          # R^3 quadric the curve lies on
    aux_axes: tuple[int, int, int]
    conic: dict
    closed: bool
    segments: list[CurveSegment]
    component: str = ""
    _maps: list = field(default_factory=list, repr=False)

    def _transfer_maps(self):
        if not self._maps:
            for seg in self.segments:
                self._maps.append(build_transfer(seg.speed, seg.t_lo, seg.t_hi))
        return self._maps

    @property
    def arclength(self) -> float:
        return sum(m.total for m in self._transfer_maps())

    def locate(self, s: float) -> tuple[int, float]:
        """Segment index and parameter at global arclength s."""
        maps = self._transfer_maps()
        total = sum(m.total for m in maps)
        if self.closed:
            s = s % total
        s = min(max(s, 0.0), total)
        for i, m in enumerate(maps):
            if s <= m.total or i == len(maps) - 1:
                return i, m.x_of(min(s, m.total))
            s -= m.total
        raise RuntimeError("unreachable")

    def point_at(self, s: float) -> np.ndarray:
        i, t = self.locate(s)
        return self.segments[i].point(t)

    def hyperplane_jets(self, seg_idx: int, t: float):
        jets = self.segments[seg_idx].jets_fn(t)
        return tuple(j for k, j in enumerate(jets) if k != self.hyperplane_axis)

    def curvature_torsion_at(self, s: float) -> tuple[float, float]:
        i, t = self.locate(s)
        t = self._clamped(i, t)
        return frenet_torsion(self.hyperplane_jets(i, t))

    def _clamped(self, i: int, t: float) -> float:
        seg = self.segments[i]
        margin = PARAM_CLAMP * (seg.t_hi - seg.t_lo)
        lo = seg.t_lo + (margin if seg.singular_lo else 0.0)
        hi = seg.t_hi - (margin if seg.singular_hi else 0.0)
        return min(max(t, lo), hi)

    def sample_arclengths(self, n: int) -> np.ndarray:
        total = self.arclength
        if self.closed:
            return np.arange(n) * total / n
        margin = PARAM_CLAMP * total
        return np.linspace(margin, total - margin, n)


@dataclass(frozen=True)
class LocusSample:
    s: float
    point: SurfacePoint
    principal: PrincipalData


def _affine_square_coeffs(spec: QuadricSpec, frozen_slots: tuple[int, int],
                          m_c: float) -> tuple[np.ndarray, np.ndarray]:
    """x_i^2 = alpha_i + beta_i * m along a coincidence locus.

    With two slots frozen at m_c, the residue formula collapses to
    x_i^2 = P_i * (s_i - m) where P_i = -s_i (s_i - m_c)^2 / prod(s_i - s_j).
    """
    s = spec.poles
    n = len(s)
    alpha = np.empty(n)
    beta = np.empty(n)
    for i in range(n):
        den = np.prod([s[i] - s[j] for j in range(n) if j != i])
        p_i = -s[i] * (s[i] - m_c) ** 2 / den
        alpha[i] = p_i * s[i]
        beta[i] = -p_i
    return alpha, beta


def _sqrt_jet(alpha: float, beta: float, m_jet: Jet3, sign: float) -> Jet3:
    inner = jet_const(alpha) + jet_const(beta) * m_jet
    if inner.f <= 0:
        # Exactly-zero hyperplane coordinates are handled by the caller.
        raise ValueError(f"nonpositive square {inner.f}")
    return jet_const(sign) * inner.sqrt()


def _trig_conic_segment(spec, graph_axes, lift_axis, hyperplane_axis,
                        radii, d_const, d_signs, lift_sign, ambient_signs):
    """Closed conic segment theta in [0, 2pi] in one graph chart."""
    semi = spec.semiaxes
    ax1, ax2 = graph_axes
    r1, r2 = radii
    s1, s2 = d_signs

    def jets(theta: float):
        cu = jet_cos(theta) * jet_const(r1)
        sv = jet_sin(theta) * jet_const(r2)
        d_jet = jet_const(d_const) + jet_const(s1) * cu * cu + jet_const(s2) * sv * sv
        out = [jet_const(0.0)] * spec.ambient_dim
        out[ax1] = jet_const(ambient_signs[0] * semi[ax1]) * cu
        out[ax2] = jet_const(ambient_signs[1] * semi[ax2]) * sv
        out[lift_axis] = jet_const(lift_sign * semi[lift_axis]) * d_jet.sqrt()
        out[hyperplane_axis] = jet_const(0.0)
        return out

    crossings = (
        (math.pi / 2, ax1), (3 * math.pi / 2, ax1),
        (0.0, ax2), (math.pi, ax2), (2 * math.pi, ax2),
    )
    return CurveSegment(0.0, 2.0 * math.pi, jets, crossings=crossings)


def _coord_param_segments(spec, frozen_slots, m_c, param_axis, signs_by_axis,
                          hyperplane_axis):
    """Unbounded arc parametrized by one ambient coordinate.

    m(ell) = (ell^2 - alpha_p) / beta_p; every other coordinate is
    sign * sqrt(alpha_i + beta_i m).  Windowed to |point| <= 5 * scale.
    """
    alpha, beta = _affine_square_coeffs(spec, frozen_slots, m_c)
    a_p, b_p = alpha[param_axis], beta[param_axis]

    def jets(ell: float):
        jl = jet_var(ell)
        m_jet = (jl * jl - jet_const(a_p)) * jet_const(1.0 / b_p)
        out = []
        for i in range(spec.ambient_dim):
            if i == hyperplane_axis:
                out.append(jet_const(0.0))
            elif i == param_axis:
                out.append(jl)
            else:
                out.append(_sqrt_jet(alpha[i], beta[i], m_jet, signs_by_axis[i]))
        return out

    def radius(ell: float) -> float:
        pt = np.array([j.f for j in jets(ell)])
        return float(np.linalg.norm(pt))

    target = BOX_FACTOR * spec.scale
    t_hi = spec.scale
    for _ in range(200):
        if radius(t_hi) > target:
            break
        t_hi *= 2.0
    t_hi = brentq(lambda e: radius(e) - target, 0.0, t_hi)
    return [CurveSegment(-t_hi, t_hi, jets, crossings=((0.0, param_axis),))]


def _glued_hyperbola_segments(spec, graph_axes, lift_axis, hyperplane_axis,
                              radii, branch_sign):
    """Q0-style closed curve: hyperbola branch glued across the t=0 circle."""
    semi = spec.semiaxes
    ax_u, ax_w = graph_axes
    r_u, r_w = radii
    # chart boundary u^2 + w^2 = 1 intersects the branch at +-sigma_star
    cosh_sq = (1.0 + r_w ** 2) / (r_u ** 2 + r_w ** 2)
    sigma_star = math.acosh(math.sqrt(cosh_sq))

    def make_jets(lift_sign: float, flip: float):
        def jets(sig: float):
            cu = jet_cosh(flip * sig) * jet_const(r_u * branch_sign)
            sw = jet_sinh(flip * sig) * jet_const(r_w)
            d_jet = jet_const(1.0) - cu * cu - sw * sw
            out = [jet_const(0.0)] * spec.ambient_dim
            out[ax_u] = jet_const(semi[ax_u]) * cu
            out[ax_w] = jet_const(semi[ax_w]) * sw
            out[lift_axis] = jet_const(lift_sign * semi[lift_axis]) * d_jet.sqrt()
            out[hyperplane_axis] = jet_const(0.0)
            return out

        return jets

    seg_plus = CurveSegment(
        -sigma_star, sigma_star, make_jets(+1.0, +1.0),
        singular_lo=True, singular_hi=True, crossings=((0.0, ax_w),),
    )
    seg_minus = CurveSegment(
        -sigma_star, sigma_star, make_jets(-1.0, -1.0),
        singular_lo=True, singular_hi=True, crossings=((0.0, ax_w),),
    )
    return [seg_plus, seg_minus]


# ---------------------------------------------------------------------------
# locus assembly


def measure_kind(spec: QuadricSpec, point: np.ndarray, flip: bool = False) -> str:
    """Classify a coincidence point from the sorted eigenvalue gaps.

    With the orientation reversed (flip=True) the classification swaps,
    since negating the spectrum reverses the sorted order.
    """
    pd = principal_data(spec, point)
    g12, g23 = pd.gaps
    if flip:
        g12, g23 = g23, g12
    if g12 < COINCIDENCE_GAP and g23 > SEPARATION_GAP:
        return "P12"
    if g23 < COINCIDENCE_GAP and g12 > SEPARATION_GAP:
        return "P23"
    raise QpcError(f"ambiguous coincidence gaps {pd.gaps} at {point}")


def _finish_curve(spec, segments, closed, paper_label, hyperplane_axis,
                  aux_spec, aux_axes, conic, suffix):
    seg = segments[0]
    t_mid = 0.5 * (seg.t_lo + seg.t_hi)
    # For the trig conics the midpoint sits on a hyperplane crossing; probe
    # off-crossing instead.
    t_probe = seg.t_lo + 0.37 * (seg.t_hi - seg.t_lo)
    pt = seg.point(t_probe if closed else t_mid)
    kind = measure_kind(spec, pt)
    curve = PartiallyUmbilicCurve(
        spec=spec,
        curve_id=f"{spec.family}-{kind}-{paper_label}-{suffix}",
        kind=kind,
        paper_label=paper_label,
        hyperplane_axis=hyperplane_axis,
        aux_spec=aux_spec,
        aux_axes=aux_axes,
        conic=conic,
        closed=closed,
        segments=segments,
        component=suffix,
    )
    return curve


def partially_umbilic_locus(spec: QuadricSpec) -> list[PartiallyUmbilicCurve]:
    """All partially umbilic curves of an R^4 family, kinds measured."""
    if spec.ambient_dim != 4:
        raise QpcError("partially_umbilic_locus expects an R^4 family")
    a2, b2, c2, d2 = spec.semiaxes_sq
    curves: list[PartiallyUmbilicCurve] = []

    if spec.family == "Q0":
        cu, cv = (a2 - d2) / (a2 - c2), (b2 - d2) / (b2 - c2)
        conic_e = {"plane": "z=0", "x": cu, "y": cv, "constraint": None}
        aux_e = QuadricSpec("q0", (a2, b2, d2))
        for lift in (1, -1):
            seg = _trig_conic_segment(spec, (0, 1), 3, 2,
                                      (cu ** -0.5, cv ** -0.5), 1.0, (-1, -1),
                                      lift, (1.0, 1.0))
            curves.append(_finish_curve(
                spec, [seg], True, "ellipse", 2, aux_e, (0, 1, 3),
                conic_e, "t+" if lift > 0 else "t-"))
        ch_u, ch_w = (a2 - d2) / (a2 - b2), (c2 - d2) / (b2 - c2)
        conic_h = {"plane": "y=0", "x": ch_u, "z": -ch_w,
                   "constraint": "u^2+w^2<=1"}
        aux_h = QuadricSpec("q0", (a2, c2, d2))
        for branch in (1, -1):
            segs = _glued_hyperbola_segments(
                spec, (0, 2), 3, 1, (ch_u ** -0.5, ch_w ** -0.5), branch)
            curves.append(_finish_curve(
                spec, segs, True, "hyperbole", 1, aux_h, (0, 2, 3),
                conic_h, "x+" if branch > 0 else "x-"))

    elif spec.family == "Q1":
        cu, cw = (a2 + d2) / (a2 - b2), (c2 + d2) / (b2 - c2)
        conic = {"plane": "y=0", "x": cu, "z": -cw, "constraint": "u^2+w^2>=1"}
        aux = QuadricSpec("q1", (a2, c2, d2))
        for sx in (1, -1):
            for sz in (1, -1):
                signs = {0: float(sx), 2: float(sz)}
                segs = _coord_param_segments(spec, (1, 2), -b2, 3, signs, 1)
                curves.append(_finish_curve(
                    spec, segs, False, "hyperbole", 1, aux, (0, 2, 3), conic,
                    f"x{'+' if sx > 0 else '-'}z{'+' if sz > 0 else '-'}"))

    elif spec.family == "Q2":
        cu, cv = (d2 + a2) / (c2 + a2), (b2 + d2) / (b2 + c2)
        conic = {"plane": "z=0", "x": cu, "y": cv, "constraint": None}
        aux = QuadricSpec("q1", (a2, b2, d2))
        for lift in (1, -1):
            seg = _trig_conic_segment(spec, (0, 1), 3, 2,
                                      (cu ** -0.5, cv ** -0.5), -1.0, (1, 1),
                                      lift, (1.0, 1.0))
            curves.append(_finish_curve(
                spec, [seg], True, "E", 2, aux, (0, 1, 3), conic,
                "t+" if lift > 0 else "t-"))

    elif spec.family == "Q3":
        ce_v, ce_w = (a2 + c2) / (b2 - c2), (a2 + d2) / (b2 - d2)
        conic_e = {"plane": "y=0", "z": ce_v, "t": ce_w, "constraint": None}
        aux_e = QuadricSpec("q2", (a2, c2, d2))
        for sheet in (1, -1):
            seg = _trig_conic_segment(spec, (2, 3), 0, 1,
                                      (ce_v ** -0.5, ce_w ** -0.5), 1.0, (1, 1),
                                      sheet, (1.0, 1.0))
            curves.append(_finish_curve(
                spec, [seg], True, "E", 1, aux_e, (0, 2, 3), conic_e,
                "x+" if sheet > 0 else "x-"))
        ch_u, ch_w = (a2 + b2) / (b2 - c2), (a2 + d2) / (c2 - d2)
        conic_h = {"plane": "z=0", "y": -ch_u, "t": ch_w, "constraint": None}
        aux_h = QuadricSpec("q2", (a2, b2, d2))
        for sheet in (1, -1):
            for st in (1, -1):
                signs = {0: float(sheet), 3: float(st)}
                segs = _coord_param_segments(spec, (1, 2), c2, 1, signs, 2)
                curves.append(_finish_curve(
                    spec, segs, False, "H", 2, aux_h, (0, 1, 3), conic_h,
                    f"x{'+' if sheet > 0 else '-'}t{'+' if st > 0 else '-'}"))
    else:
        raise QpcError(f"unsupported family {spec.family}")
    return curves


def sample_locus(curve: PartiallyUmbilicCurve, n: int) -> list[LocusSample]:
    """n samples parametrized by conic arclength, endpoint-avoiding on arcs."""
    if n < 2:
        raise ValueError("n must be at least 2")
    out = []
    for s in curve.sample_arclengths(n):
        pt = curve.point_at(float(s))
        sp = surface_point(curve.spec, pt, tol=1e-10 * curve.spec.scale_sq)
        out.append(LocusSample(float(s), sp, principal_data(curve.spec, pt)))
    return out


def locus_torsion_profile(curve: PartiallyUmbilicCurve, n: int,
                          biregular_floor: float = 1e-10) -> list[tuple[float, float]]:
    """(arclength, torsion) profile; errors if the curve stops being biregular."""
    if n < 32:
        raise ValueError("torsion profile needs n >= 32")
    profile = []
    for s in curve.sample_arclengths(n):
        kappa, tau = curve.curvature_torsion_at(float(s))
        if kappa < biregular_floor:
            raise NonBiregularError(
                f"curvature {kappa:.2e} below {biregular_floor} on {curve.curve_id}")
        profile.append((float(s), tau))
    return profile


def torsion_zeros(curve: PartiallyUmbilicCurve, n_scan: int = 720) -> list[dict]:
    """Torsion zeros located by sign change + bisection, in arclength.

    Zeros at chart-glue points (where the parametrization speed blows up)
    are reported at the exact glue arclength when the torsion changes sign
    across the glue.
    """
    maps = curve._transfer_maps()
    zeros = []
    seg_offsets = np.concatenate([[0.0], np.cumsum([m.total for m in maps])])

    def tau_at(i_seg: int, t: float) -> float:
        return frenet_torsion(curve.hyperplane_jets(i_seg, t))[1]

    boundary_vals = []
    scan_edges = []
    for i, (seg, m) in enumerate(zip(curve.segments, maps)):
        margin = PARAM_CLAMP * (seg.t_hi - seg.t_lo)
        lo = seg.t_lo + (margin if seg.singular_lo else 1e-12)
        hi = seg.t_hi - (margin if seg.singular_hi else 1e-12)
        ts = np.linspace(lo, hi, n_scan)
        taus = np.array([tau_at(i, t) for t in ts])
        for k in range(len(ts) - 1):
            if taus[k] == 0.0:
                zeros.append({"segment": i, "t": float(ts[k])})
            elif taus[k] * taus[k + 1] < 0.0:
                t0 = brentq(lambda t: tau_at(i, t), ts[k], ts[k + 1],
                            xtol=1e-13, rtol=8.9e-16)
                zeros.append({"segment": i, "t": float(t0)})
        boundary_vals.append((taus[0], taus[-1]))
        scan_edges.append((float(ts[0]), float(ts[-1])))

    # sign changes across segment boundaries (glue points) and, for closed
    # curves, across the periodic wrap
    n_seg = len(curve.segments)
    pairs = [(i, i + 1) for i in range(n_seg - 1)]
    if curve.closed:
        pairs.append((n_seg - 1, 0))
    for i, j in pairs:
        if boundary_vals[i][1] * boundary_vals[j][0] >= 0.0:
            continue
        seg_i, seg_j = curve.segments[i], curve.segments[j]
        if i == j and not (seg_i.singular_hi or seg_i.singular_lo):
            # smooth periodic wrap of a one-segment closed curve
            period = seg_i.t_hi - seg_i.t_lo

            def wrapped(psi: float) -> float:
                t = psi if psi <= seg_i.t_hi else psi - period
                return tau_at(i, t)

            hi_b = seg_i.t_hi + (scan_edges[j][0] - seg_j.t_lo)
            t0 = brentq(wrapped, scan_edges[i][1], hi_b,
                        xtol=1e-13, rtol=8.9e-16)
            t0 = t0 if t0 <= seg_i.t_hi else t0 - period
            zeros.append({"segment": i, "t": float(t0)})
        else:
            # chart glue: parametrization is singular there, but the zero
            # location (the boundary point itself) is exact
            zeros.append({"segment": i, "t": seg_i.t_hi, "glue": True})

    out = []
    for z in zeros:
        i = z["segment"]
        m = maps[i]
        t = min(max(z["t"], m.lo), m.hi)
        s_val = seg_offsets[i] + m.s_of(t)
        out.append({"s": float(s_val), "segment": i, "t": float(z["t"]),
                    "glue": z.get("glue", False)})
    out.sort(key=lambda d: d["s"])
    return out


def crossing_arclengths(curve: PartiallyUmbilicCurve) -> list[tuple[float, int]]:
    """Arclengths of the curve's coordinate-hyperplane crossings."""
    maps = curve._transfer_maps()
    seg_offsets = np.concatenate([[0.0], np.cumsum([m.total for m in maps])])
    out = []
    for i, seg in enumerate(curve.segments):
        for t, axis in seg.crossings:
            if seg.t_lo <= t <= seg.t_hi:
                s_val = seg_offsets[i] + maps[i].s_of(t)
                out.append((float(s_val), axis))
        if seg.singular_hi:
            # glue point: the lift coordinate vanishes there
            out.append((float(seg_offsets[i] + maps[i].total),
                        graph_chart(curve.spec).lift_axis))
    total = sum(m.total for m in maps)

    def circ_close(s_a: float, s_b: float) -> bool:
        d = abs(s_a - s_b)
        if curve.closed:
            d = min(d, total - d)
        return d < 1e-9 * total

    dedup: list[tuple[float, int]] = []
    for s_val, axis in sorted(out):
        wrapped = s_val % total if curve.closed else s_val
        if not any(circ_close(wrapped, s0) and ax == axis for s0, ax in dedup):
            dedup.append((wrapped, axis))
    dedup.sort()
    return dedup
