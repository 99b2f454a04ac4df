"""Quadric surfaces of R^3: principal charts, umbilics, conformal rectangle.

Shares the residue-chart machinery with the R^4 families; adds the closed
forms specific to the classical surfaces (umbilic points of the ellipsoid
and of the two-sheeted hyperboloid, the trigonometric conformal map).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .charts import (
    ChartRangeError,
    chart_intervals,
    check_in_range,
    invert_chart,
    _point_from_lams,
)
from .conformal import (
    ConformalStructure,
    build_transfer,
    sqrt_substituted_quad,
    tanh_sinh_quad,
)
from .core import QuadricSpec, R3_FAMILIES, SurfacePoint, surface_point


@dataclass(frozen=True)
class R3Chart:
    """Confocal pair (u, v) with u > v, plus the orthant sign vector."""

    u: float
    v: float
    orthant: tuple[int, ...]

    @property
    def lams(self) -> np.ndarray:
        return np.array([self.u, self.v])


@dataclass(frozen=True)
class ConformalRect:
    """Half-widths of the conformal rectangle and the trig-map constants."""

    s1: float
    s2: float
    a1: float
    b1: float

    def __post_init__(self):
        if not (0.0 < self.a1 < 1.0 and 0.0 < self.b1 < 1.0):
            raise ValueError("A1, B1 must lie in (0, 1)")
        if abs(self.a1 + self.b1 - 1.0) > 1e-12:
            raise ValueError("A1 + B1 must equal 1")


def _require_r3(spec: QuadricSpec) -> None:
    if spec.family not in R3_FAMILIES:
        raise ChartRangeError(f"{spec.family} is not an R^3 family")


def r3_point_from_chart(spec: QuadricSpec, chart: R3Chart) -> SurfacePoint:
    _require_r3(spec)
    check_in_range(spec, chart.lams)
    return _point_from_lams(spec, chart.lams, chart.orthant)


def r3_chart_from_point(spec: QuadricSpec, p: Sequence[float] | SurfacePoint) -> R3Chart:
    _require_r3(spec)
    coords = p.coords if isinstance(p, SurfacePoint) else np.asarray(p, dtype=float)
    roots, orthant = invert_chart(spec, coords)
    return R3Chart(roots[0], roots[1], orthant)


def r3_umbilics(spec: QuadricSpec) -> list[SurfacePoint]:
    """Umbilic points in closed form: 4 for q0 and q2, none for q1."""
    _require_r3(spec)
    a2, b2, c2 = spec.semiaxes_sq
    if spec.family == "q1":
        return []
    if spec.family == "q0":
        x = math.sqrt(a2 * (a2 - b2) / (a2 - c2))
        z = math.sqrt(c2 * (b2 - c2) / (a2 - c2))
    else:  # q2; two points per sheet
        x = math.sqrt(a2 * (a2 + b2) / (c2 + a2))
        z = math.sqrt(c2 * (b2 - c2) / (c2 + a2))
    pts = []
    for sx in (1.0, -1.0):
        for sz in (1.0, -1.0):
            pts.append(surface_point(spec, np.array([sx * x, 0.0, sz * z])))
    return pts


def conformal_rect(spec: QuadricSpec) -> ConformalRect:
    """Rectangle half-widths s1, s2 plus A1 = (a^2-b^2)/(a^2-c^2), B1 = 1-A1."""
    structure = conformal_reparametrization(spec)
    a2, b2, c2 = spec.semiaxes_sq
    a1 = (a2 - b2) / (a2 - c2)
    return ConformalRect(structure.s1, structure.s2, a1, 1.0 - a1)


def _separable_weights(spec: QuadricSpec):
    """Weights w1, w2 with ds_i = w_i dx on the two confocal intervals.

    From g_uu = u (u-v) / (4 pi(u)) and g_vv = v (v-u) / (4 pi(v)):
    w1 = sqrt(u / (4 pi(u))), w2 = sqrt(-v / (4 pi(v))), both positive on
    their intervals.
    """
    poles = spec.poles

    def pi(lam: float) -> float:
        return float(np.prod(lam - poles))

    def w1(u: float) -> float:
        return math.sqrt(0.25 * u / pi(u))

    def w2(v: float) -> float:
        return math.sqrt(-0.25 * v / pi(v))

    return w1, w2


def conformal_reparametrization(spec: QuadricSpec) -> ConformalStructure:
    """Conformal (s1, s2) structure of the ellipsoid q0.

    Transfer maps are built by cumulative singular quadrature; the composed
    chart is conformal (E = G, F = 0) with factor u - v.
    """
    _require_r3(spec)
    if spec.family != "q0":
        raise ChartRangeError("conformal reparametrization needs an ellipsoid (q0)")
    (u_lo, u_hi), (v_lo, v_hi) = chart_intervals(spec)
    w1, w2 = _separable_weights(spec)
    t1 = build_transfer(w1, u_lo, u_hi)
    t2 = build_transfer(w2, v_lo, v_hi)

    def chart_point(u: float, v: float, orthant) -> SurfacePoint:
        return _point_from_lams(spec, np.array([u, v]), orthant)

    return ConformalStructure(t1, t2, chart_point)


def slice_conformal_structure(slc) -> ConformalStructure:
    """Conformal structure of an ellipsoid-type confocal slice.

    The slice metric separates the same way with an extra (t - lambda)
    factor in each weight; valid whenever both factors stay positive on the
    free intervals (the ellipsoid-like slices of the R^4 families).
    """
    spec = slc.spec
    poles = spec.poles
    lam = slc.lam
    (i1, i2) = slc.free_intervals
    if not (math.isfinite(i1[1]) and math.isfinite(i2[1])):
        raise ChartRangeError("slice has an unbounded free interval")

    def pi(x: float) -> float:
        return float(np.prod(x - poles))

    def w1(t: float) -> float:
        return math.sqrt(0.25 * t * (t - lam) / pi(t))

    def w2(t: float) -> float:
        return math.sqrt(-0.25 * t * (t - lam) / pi(t))

    t1 = build_transfer(w1, i1[0], i1[1])
    t2 = build_transfer(w2, i2[0], i2[1])

    def chart_point(x1: float, x2: float, orthant) -> SurfacePoint:
        return slc.point(x1, x2, orthant)

    return ConformalStructure(t1, t2, chart_point)


def _offset_weight(poles: np.ndarray, anchor: float, direction: float,
                   numer_sign: float):
    """Weight as a function of the distance from `anchor`, cancellation-free.

    direction=+1 walks right from the left endpoint, -1 left from the right
    one; u - s_i is computed as (anchor - s_i) + direction*xi so the factor
    vanishing at the anchor is exactly xi.  numer_sign matches the +-u in
    the separable weight.
    """
    d = anchor - poles

    def g(xi: float) -> float:
        prod = 4.0
        for di in d:
            prod *= di + direction * xi
        val = numer_sign * (anchor + direction * xi) / prod
        return math.sqrt(max(val, 0.0))

    return g


def dual_quadrature_check(spec: QuadricSpec) -> tuple[float, float, float, float]:
    """s1, s2 by the two independent quadrature routes.

    Returns (s1_sub, s1_ts, s2_sub, s2_ts): substituted Gauss-Kronrod vs
    tanh-sinh (the latter on endpoint-anchored halves, where the
    double-exponential nodes reach the singularity at full precision).
    """
    _require_r3(spec)
    w1, w2 = _separable_weights(spec)
    out = []
    for w, numer_sign, (lo, hi) in zip((w1, w2), (1.0, -1.0),
                                       chart_intervals(spec)):
        sub = sqrt_substituted_quad(w, lo, hi)
        half = 0.5 * (hi - lo)
        g_lo = _offset_weight(spec.poles, lo, +1.0, numer_sign)
        g_hi = _offset_weight(spec.poles, hi, -1.0, numer_sign)
        ts = tanh_sinh_quad(g_lo, 0.0, half) + tanh_sinh_quad(g_hi, 0.0, half)
        out.extend([sub, ts])
    return tuple(out)  # type: ignore[return-value]


def ellipsoid_conformal_map(spec: QuadricSpec, big_u: float, big_v: float) -> SurfacePoint:
    """Explicit trigonometric parametrization of the ellipsoid.

    Angles in the closed square [0, pi]^2; the four corners land exactly on
    the four umbilic points.  Coordinate curves follow the confocal net:
    u = -b^2 + (b^2-c^2) sin^2(V), v = -b^2 - (a^2-b^2) sin^2(U).
    """
    _require_r3(spec)
    if spec.family != "q0":
        raise ChartRangeError("the explicit conformal map is for q0 only")
    if not (0.0 <= big_u <= math.pi and 0.0 <= big_v <= math.pi):
        raise ChartRangeError("angles must lie in the closed square [0, pi]^2")
    a2, b2, c2 = spec.semiaxes_sq
    a, b, c = spec.semiaxes
    a1 = (a2 - b2) / (a2 - c2)
    b1 = (b2 - c2) / (a2 - c2)
    cu, su = math.cos(big_u), math.sin(big_u)
    cv, sv = math.cos(big_v), math.sin(big_v)
    coords = np.array([
        a * cu * math.sqrt(a1 * cv * cv + sv * sv),
        b * su * sv,
        c * cv * math.sqrt(b1 * cu * cu + su * su),
    ])
    return surface_point(spec, coords, tol=1e-12 * spec.scale_sq)
