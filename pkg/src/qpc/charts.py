"""Confocal coordinates and closed-form principal charts.

Every family's chart comes from one construction.  Write the quadric as
sum_i x_i^2/A_i = 1 and its confocal family as F(lam) = sum_i x_i^2/(A_i+lam);
the poles sit at s_i = -A_i and F is strictly decreasing between consecutive
poles, so F(lam) = 1 has exactly one root per gap (plus one beyond the last
pole).  On the surface lam = 0 is a root; the remaining roots are the chart
coordinates, and partial fractions give the inverse in closed form:

    x_i^2 = -s_i * prod_k (s_i - lam_k) / prod_{j != i} (s_i - s_j).

The same identity yields the diagonal metric, the second form, and the
principal curvatures; see `fundamental_forms` and `closed_form_curvatures`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .core import (
    InternalError,
    QpcError,
    QuadricSpec,
    SurfacePoint,
    surface_point,
)

#: Chart-interior margin from interval endpoints, times scale^2.
CHART_EPS = 1e-8

SLOT_NAMES = ("u", "v", "w")


class ChartRangeError(ValueError, QpcError):
    """Chart coordinate outside its open family interval."""


class ChartDegenerateError(QpcError):
    """Point on a coordinate hyperplane: the confocal chart degenerates."""


class RootBracketError(QpcError):
    """A confocal root escaped its bracket (numerical failure)."""


@dataclass(frozen=True)
class ChartCoords:
    """Confocal coordinates in canonical slot order u > v > w, plus orthant."""

    u: float
    v: float
    w: float
    orthant: tuple[int, ...]

    @property
    def lams(self) -> np.ndarray:
        return np.array([self.u, self.v, self.w])


@dataclass(frozen=True)
class ConfocalFamily:
    """One member Q(., lam) of the confocal family of `spec`."""

    spec: QuadricSpec
    lam: float

    def __post_init__(self):
        eps = CHART_EPS * self.spec.scale_sq
        if np.min(np.abs(self.lam - self.spec.poles)) <= eps:
            raise ChartRangeError(f"lambda={self.lam} within eps of a pole")

    def value(self, p: Sequence[float]) -> float:
        p = np.asarray(p, dtype=float)
        return float(np.sum(p * p / (self.spec.signed_denoms + self.lam)) - 1.0)


@dataclass(frozen=True)
class FundamentalForms:
    """Diagonal g, b in a principal chart (off-diagonals identically zero)."""

    g: tuple[float, ...]
    b: tuple[float, ...]
    offdiag_g: tuple[float, ...]
    offdiag_b: tuple[float, ...]


def chart_intervals(spec: QuadricSpec) -> list[tuple[float, float]]:
    """Open coordinate intervals in slot order (u first, descending).

    Computed from the sorted poles: one root lives in each gap between
    consecutive poles and one beyond the largest pole; the gap containing
    lam = 0 belongs to the surface itself and is excluded.
    """
    poles = np.sort(spec.poles)
    gaps: list[tuple[float, float]] = [
        (float(poles[i]), float(poles[i + 1])) for i in range(len(poles) - 1)
    ]
    gaps.append((float(poles[-1]), math.inf))
    slots = [(lo, hi) for lo, hi in gaps if not (lo < 0.0 < hi)]
    if len(slots) != len(poles) - 1:
        raise InternalError("0 is not interior to exactly one pole gap")
    return slots[::-1]


def chart_eps(spec: QuadricSpec) -> float:
    return CHART_EPS * spec.scale_sq


def check_in_range(spec: QuadricSpec, lams: Sequence[float],
                   eps: float | None = None) -> None:
    eps = chart_eps(spec) if eps is None else eps
    for name, lam, (lo, hi) in zip(SLOT_NAMES, lams, chart_intervals(spec)):
        if not (lo + eps <= lam <= (hi - eps if math.isfinite(hi) else math.inf)):
            raise ChartRangeError(
                f"{name}={lam} outside ({lo}, {hi}) for {spec.family}"
            )


def _residue_squares(spec: QuadricSpec, lams: np.ndarray) -> np.ndarray:
    """x_i^2 from the partial-fraction identity; radicands asserted, not clamped."""
    s = spec.poles
    floor = -1e-12 * max(1.0, spec.scale_sq) ** (spec.ambient_dim - 1)
    out = np.empty(len(s))
    for i in range(len(s)):
        num = -s[i] * np.prod(s[i] - lams)
        den = np.prod([s[i] - s[j] for j in range(len(s)) if j != i])
        r = num / den
        if r < floor:
            raise InternalError(
                f"negative radicand {r:.3e} for coordinate {i} at {lams}"
            )
        out[i] = max(r, 0.0)
    return out


def _point_from_lams(spec: QuadricSpec, lams: np.ndarray,
                     orthant: Sequence[int]) -> SurfacePoint:
    if len(orthant) != spec.ambient_dim or any(o not in (-1, 1) for o in orthant):
        raise ChartRangeError(f"orthant {orthant} invalid for {spec.family}")
    sq = _residue_squares(spec, lams)
    coords = np.asarray(orthant, dtype=float) * np.sqrt(sq)
    return surface_point(spec, coords, tol=1e-12 * spec.scale_sq)


def point_from_chart(spec: QuadricSpec, coords: ChartCoords) -> SurfacePoint:
    """Forward principal chart; lands on the quadric to 1e-12*scale^2."""
    lams = coords.lams
    check_in_range(spec, lams)
    return _point_from_lams(spec, lams, coords.orthant)


def _cleared_cubic(spec: QuadricSpec, sq: np.ndarray) -> Callable[[float], float]:
    """C(lam) = [sum_i x_i^2 prod_{j!=i}(lam-s_j) - prod_j(lam-s_j)] / (-lam).

    Polynomial in lam (0 is always a root of the bracket), finite at poles;
    evaluated directly, which keeps full precision near the poles where the
    roots live.
    """
    s = spec.poles

    def c(lam: float) -> float:
        total = -np.prod(lam - s)
        for i in range(len(s)):
            total += sq[i] * np.prod([lam - s[j] for j in range(len(s)) if j != i])
        return total / (-lam)

    return c


def _confocal_f(spec: QuadricSpec, sq: np.ndarray):
    s = spec.poles

    def f(lam: float) -> float:
        return float(np.sum(sq / (lam - s)) - 1.0)

    def fp(lam: float) -> float:
        return float(-np.sum(sq / (lam - s) ** 2))

    return f, fp


def _upper_bracket(spec: QuadricSpec, cubic, lo: float) -> float:
    hi = lo + spec.scale_sq
    for _ in range(200):
        if cubic(lo) * cubic(hi) < 0:
            return hi
        hi = lo + 2.0 * (hi - lo)
    raise RootBracketError(f"no sign change above {lo} (reached {hi})")


def invert_chart(spec: QuadricSpec, coords: np.ndarray) -> tuple[list[float], tuple[int, ...]]:
    """Confocal roots in canonical slot order plus the recovered orthant.

    Brackets each root in its pole gap, solves with Brent, then polishes with
    safeguarded Newton on the confocal function to 1e-12 relative.
    """
    if np.min(np.abs(coords)) <= 1e-7 * spec.scale:
        raise ChartDegenerateError(
            "point on a coordinate hyperplane: confocal chart undefined"
        )
    sq = coords * coords
    cubic = _cleared_cubic(spec, sq)
    f, fp = _confocal_f(spec, sq)
    roots = []
    for lo, hi in chart_intervals(spec):
        hi_b = _upper_bracket(spec, cubic, lo) if math.isinf(hi) else hi
        if cubic(lo) * cubic(hi_b) > 0:
            raise RootBracketError(
                f"no sign change of cleared cubic in ({lo}, {hi_b}) for {spec}"
            )
        lam = brentq(cubic, lo, hi_b, xtol=1e-15 * max(1.0, spec.scale_sq),
                     rtol=8.9e-16)
        # Newton polish, safeguarded to the pole gap.
        for _ in range(3):
            d = fp(lam)
            if d == 0.0:
                break
            step = f(lam) / d
            cand = lam - step
            if not (lo < cand < hi_b):
                break
            lam = cand
            if abs(step) <= 1e-12 * max(abs(lam), 1e-300):
                break
        roots.append(lam)
    orthant = tuple(1 if x > 0 else -1 for x in coords)
    return roots, orthant


def chart_from_point(spec: QuadricSpec, p: Sequence[float] | SurfacePoint) -> ChartCoords:
    """Invert the R^4 principal chart; see `invert_chart`."""
    coords = p.coords if isinstance(p, SurfacePoint) else np.asarray(p, dtype=float)
    if spec.ambient_dim != 4:
        raise ChartRangeError("chart_from_point expects an R^4 family; see r3")
    roots, orthant = invert_chart(spec, coords)
    return ChartCoords(roots[0], roots[1], roots[2], orthant)


def chart_from_points_batch(spec: QuadricSpec, pts: np.ndarray) -> np.ndarray:
    """Vectorized chart inversion (bracketed bisection + safeguarded Newton).

    Same bracketing idea as the scalar path; used for the large roundtrip
    sweeps.  Returns an array of shape (npts, ndim-1) in slot order.
    """
    pts = np.asarray(pts, dtype=float)
    if np.min(np.abs(pts)) <= 1e-7 * spec.scale:
        raise ChartDegenerateError("batch contains a hyperplane point")
    s = spec.poles
    sq = pts * pts
    n = len(s)

    def cubic(lam):
        # lam: (npts,) -> cleared cubic values, vectorized
        total = -np.prod(lam[:, None] - s[None, :], axis=1)
        for i in range(n):
            others = [j for j in range(n) if j != i]
            total += sq[:, i] * np.prod(lam[:, None] - s[None, others], axis=1)
        return total / (-lam)

    out = np.empty((len(pts), n - 1))
    for slot, (lo, hi) in enumerate(chart_intervals(spec)):
        lo_v = np.full(len(pts), lo)
        if math.isinf(hi):
            hi_v = np.full(len(pts), lo + spec.scale_sq)
            clo = cubic(lo_v)
            for _ in range(200):
                bad = cubic(hi_v) * clo > 0
                if not bad.any():
                    break
                hi_v[bad] = lo + 2.0 * (hi_v[bad] - lo)
            else:
                raise RootBracketError("batch upper bracket failed")
        else:
            hi_v = np.full(len(pts), hi)
        sign_lo = np.sign(cubic(lo_v))
        a, b = lo_v.copy(), hi_v.copy()
        for _ in range(80):
            mid = 0.5 * (a + b)
            smid = np.sign(cubic(mid))
            left = smid == sign_lo
            a = np.where(left, mid, a)
            b = np.where(left, b, mid)
        lam = 0.5 * (a + b)
        for _ in range(3):
            fv = np.sum(sq / (lam[:, None] - s[None, :]), axis=1) - 1.0
            dv = -np.sum(sq / (lam[:, None] - s[None, :]) ** 2, axis=1)
            step = np.where(dv != 0.0, fv / dv, 0.0)
            cand = lam - step
            ok = (cand > lo_v) & (cand < hi_v)
            lam = np.where(ok, cand, lam)
        out[:, slot] = lam
    return out


def closed_form_curvatures(spec: QuadricSpec, coords) -> tuple[tuple[float, ...], tuple[str, ...]]:
    """Sorted closed-form curvatures plus the producing slot per sorted index.

    k_slot = sigma / (lam_slot * r) with r = |grad|/2 expressed confocally:
    r^2 = (-1)^m prod(lam) / prod(A), m = number of chart slots.
    """
    lams = coords.lams if isinstance(coords, ChartCoords) else np.asarray(coords, float)
    check_in_range(spec, lams)
    return _curvatures_from_lams(spec, lams)


def _curvatures_from_lams(spec: QuadricSpec, lams: np.ndarray):
    m = len(lams)
    rad = (-1.0) ** m * np.prod(lams) / np.prod(spec.signed_denoms)
    if rad <= 0:
        raise InternalError(f"nonpositive normal radicand {rad} at {lams}")
    r = math.sqrt(rad)
    ks = spec.orientation / (lams * r)
    order = np.argsort(ks, kind="stable")
    return (
        tuple(float(ks[i]) for i in order),
        tuple(SLOT_NAMES[i] for i in order),
    )


def fundamental_forms(spec: QuadricSpec, coords) -> FundamentalForms:
    """Closed-form diagonal first and second fundamental forms.

    g_mm = lam_m * prod_{k != m}(lam_m - lam_k) / (4 * pi(lam_m)) with
    pi(lam) = prod_i (lam - s_i); b_mm = g_mm * k_m (the simultaneous
    diagonalization identity k_m = b_mm/g_mm, which the FD oracle checks
    independently).
    """
    lams = coords.lams if isinstance(coords, ChartCoords) else np.asarray(coords, float)
    check_in_range(spec, lams)
    s = spec.poles
    m = len(lams)
    g = []
    for i in range(m):
        pi_lam = np.prod(lams[i] - s)
        num = lams[i] * np.prod([lams[i] - lams[k] for k in range(m) if k != i])
        g.append(0.25 * num / pi_lam)
    g = tuple(float(v) for v in g)
    if min(g) <= 0:
        raise InternalError(f"nonpositive metric coefficient {g} at {lams}")
    ks_sorted, slots = _curvatures_from_lams(spec, lams)
    k_by_slot = {sl: k for k, sl in zip(ks_sorted, slots)}
    b = tuple(g[i] * k_by_slot[SLOT_NAMES[i]] for i in range(m))
    zeros = (0.0,) * (3 if m == 3 else 1)
    return FundamentalForms(g, b, zeros, zeros)


@dataclass(frozen=True)
class ConfocalSlice:
    """Two-parameter slice of a quadric: one chart slot frozen at lambda.

    Images lie on the quadric and on the confocal member Q(., lambda); the
    coordinate curves are curvature lines of the slice.
    """

    spec: QuadricSpec
    lam: float
    fixed_slot: int

    @property
    def free_slots(self) -> tuple[int, ...]:
        return tuple(i for i in range(3) if i != self.fixed_slot)

    @property
    def free_intervals(self) -> list[tuple[float, float]]:
        iv = chart_intervals(self.spec)
        return [iv[i] for i in self.free_slots]

    def point(self, t1: float, t2: float, orthant: Sequence[int]) -> SurfacePoint:
        lams = np.empty(3)
        lams[self.fixed_slot] = self.lam
        lams[self.free_slots[0]] = t1
        lams[self.free_slots[1]] = t2
        check_in_range(self.spec, lams)
        return _point_from_lams(self.spec, lams, orthant)

    def residual_pair(self, p: SurfacePoint) -> tuple[float, float]:
        from .core import evaluate

        return (
            abs(evaluate(self.spec, p.coords)),
            abs(ConfocalFamily(self.spec, self.lam).value(p.coords)),
        )


def confocal_slice(spec: QuadricSpec, lam: float, fixed_slot: int | str) -> ConfocalSlice:
    """Slice with `fixed_slot` (index or name 'u'/'v'/'w') frozen at lam."""
    if spec.ambient_dim != 4:
        raise ChartRangeError("confocal slices are defined for the R^4 families")
    slot = SLOT_NAMES.index(fixed_slot) if isinstance(fixed_slot, str) else fixed_slot
    lo, hi = chart_intervals(spec)[slot]
    eps = chart_eps(spec)
    if not (lo + eps <= lam <= (hi - eps if math.isfinite(hi) else math.inf)):
        raise ChartRangeError(f"lambda={lam} outside slot {SLOT_NAMES[slot]} interval")
    return ConfocalSlice(spec, lam, slot)
