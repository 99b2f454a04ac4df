"""Arclength-like conformal coordinates via singular quadrature.

The confocal metric of an ellipsoid-type surface separates as
I = (u - v) * (e(u) du^2 + f(v) dv^2); the substitutions ds1 = sqrt(e) du,
ds2 = sqrt(f) dv make the chart conformal with factor (u - v).  The weights
blow up like 1/sqrt(distance) at the interval endpoints, so every integral
here runs through the t = sqrt(endpoint - x) substitution; an independent
tanh-sinh rule provides the dual-quadrature oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

QUAD_TOL = 1e-10

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def sqrt_substituted_quad(w: Callable[[float], float], lo: float, hi: float) -> float:
    """Integral of w over (lo, hi) with 1/sqrt endpoint substitutions.

    Splits at the midpoint and substitutes x = lo + t^2 (resp. hi - t^2) on
    each half, which removes inverse-square-root endpoint singularities.
    """
    mid = 0.5 * (lo + hi)

    def left(t: float) -> float:
        return 2.0 * t * w(lo + t * t)

    def right(t: float) -> float:
        return 2.0 * t * w(hi - t * t)

    a, _ = quad(left, 0.0, math.sqrt(mid - lo), epsabs=QUAD_TOL,
                epsrel=QUAD_TOL, limit=200)
    b, _ = quad(right, 0.0, math.sqrt(hi - mid), epsabs=QUAD_TOL,
                epsrel=QUAD_TOL, limit=200)
    return a + b


def tanh_sinh_quad(w: Callable[[float], float], lo: float, hi: float,
                   max_level: int = 11, tol: float = 1e-12) -> float:
    """Double-exponential quadrature on (lo, hi); endpoint-singularity safe.

    Independent of scipy's adaptive Gauss-Kronrod path on purpose: this is
    the second route of the dual-quadrature check.
    """
    rad = 0.5 * (hi - lo)
    t_cut = 6.6  # weight underflows past this for float64

    def eval_at(t: float) -> float:
        s = math.sinh(t)
        y = math.pi * s  # 2 * (pi/2) * s
        if abs(y) > 700.0:
            return 0.0
        # distance to the nearer endpoint, cancellation-free
        if s <= 0.0:
            x = lo + rad * 2.0 / (1.0 + math.exp(-y))
        else:
            x = hi - rad * 2.0 / (1.0 + math.exp(y))
        dx = rad * 0.5 * math.pi * math.cosh(t) / math.cosh(0.5 * y) ** 2
        if not (lo < x < hi) or dx == 0.0:
            return 0.0
        return w(x) * dx

    h = 1.0
    total = h * sum(eval_at(k * h) for k in range(-7, 8))
    prev = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        add = 0.0
        k = 1
        while True:
            t = k * h
            if t > t_cut:
                break
            add += eval_at(t) + eval_at(-t)
            k += 2  # only the new (odd) nodes at this level
        total = 0.5 * total + h * add
        if abs(total - prev) < tol * max(1.0, abs(total)) and level >= 4:
            break
        prev = total
    return total


@dataclass(frozen=True)
class TransferMap:
    """Monotone coordinate transfer x <-> s with s(x) = int_lo^x w.

    Panel-local Gauss-Legendre in square-root-substituted variables: the
    integrand is analytic on every panel, so both directions and the
    derivative (the weight itself) are accurate to quadrature precision.
    """

    lo: float
    hi: float
    grid: np.ndarray
    cum: np.ndarray
    weight: Callable[[float], float]

    @property
    def total(self) -> float:
        return float(self.cum[-1])

    def _seg_integral(self, a: float, b: float) -> float:
        """Integral of w over [a, b]; both ends inside one half-interval."""
        if a == b:
            return 0.0
        mid = 0.5 * (self.lo + self.hi)
        if 0.5 * (a + b) <= mid:
            ta, tb = math.sqrt(a - self.lo), math.sqrt(b - self.lo)
            ctr, rad = 0.5 * (ta + tb), 0.5 * (tb - ta)
            ts = ctr + rad * _GL_NODES
            vals = [2.0 * t * self.weight(self.lo + t * t) for t in ts]
        else:
            ta, tb = math.sqrt(self.hi - b), math.sqrt(self.hi - a)
            ctr, rad = 0.5 * (ta + tb), 0.5 * (tb - ta)
            ts = ctr + rad * _GL_NODES
            vals = [2.0 * t * self.weight(self.hi - t * t) for t in ts]
        return float(rad * np.dot(_GL_WEIGHTS, vals))

    def s_of(self, x: float) -> float:
        if not (self.lo <= x <= self.hi):
            raise ValueError(f"{x} outside [{self.lo}, {self.hi}]")
        j = int(np.clip(np.searchsorted(self.grid, x) - 1, 0, len(self.grid) - 2))
        return float(self.cum[j] + self._seg_integral(float(self.grid[j]), x))

    def x_of(self, s: float) -> float:
        if not (-1e-12 * self.total <= s <= (1.0 + 1e-12) * self.total):
            raise ValueError(f"{s} outside [0, {self.total}]")
        if s <= 0.0:
            return self.lo
        if s >= self.total:
            return self.hi
        j = int(np.clip(np.searchsorted(self.cum, s) - 1, 0, len(self.cum) - 2))
        a, b = float(self.grid[j]), float(self.grid[j + 1])
        frac = (s - self.cum[j]) / max(self.cum[j + 1] - self.cum[j], 1e-300)
        # initial guess linear in the substituted variable (where s is smooth)
        mid = 0.5 * (self.lo + self.hi)
        if 0.5 * (a + b) <= mid:
            ta, tb = math.sqrt(a - self.lo), math.sqrt(b - self.lo)
            x = self.lo + (ta + (tb - ta) * frac) ** 2
        else:
            ta, tb = math.sqrt(self.hi - b), math.sqrt(self.hi - a)
            x = self.hi - (tb + (ta - tb) * frac) ** 2
        x = min(max(x, a), b)
        for _ in range(4):
            resid = self.cum[j] + self._seg_integral(a, x) - s
            if resid == 0.0:
                break
            wx = self.weight(x) if self.lo < x < self.hi else math.inf
            if not math.isfinite(wx) or wx <= 0.0:
                break
            step = resid / wx
            x_new = x - step
            if not (a <= x_new <= b):
                x_new = 0.5 * (x + (a if step > 0 else b))
            x = x_new
            if abs(step) < 1e-14 * (self.hi - self.lo):
                break
        return float(x)


def build_transfer(w: Callable[[float], float], lo: float, hi: float,
                   nodes: int = 160) -> TransferMap:
    """Cumulative transfer map for a weight with 1/sqrt endpoint behavior."""
    j = np.arange(nodes + 1)
    grid = lo + (hi - lo) * np.sin(0.5 * np.pi * j / nodes) ** 2
    grid[0], grid[-1] = lo, hi
    tm = TransferMap(lo, hi, grid, np.zeros(nodes + 1), w)
    cum = np.zeros(nodes + 1)
    for i in range(nodes):
        cum[i + 1] = cum[i] + tm._seg_integral(float(grid[i]), float(grid[i + 1]))
    return TransferMap(lo, hi, grid, cum, w)


@dataclass(frozen=True)
class ConformalStructure:
    """Conformal (s1, s2) coordinates for a separable principal chart.

    `point(s1, s2, orthant)` composes the transfers with the chart map; in
    these coordinates the induced metric satisfies E = G, F = 0 up to the
    quadrature error.
    """

    transfer_1: TransferMap
    transfer_2: TransferMap
    chart_point: Callable  # (x1, x2, orthant) -> SurfacePoint

    @property
    def s1(self) -> float:
        return self.transfer_1.total

    @property
    def s2(self) -> float:
        return self.transfer_2.total

    def point(self, s1: float, s2: float, orthant):
        x1 = self.transfer_1.x_of(s1)
        x2 = self.transfer_2.x_of(s2)
        return self.chart_point(x1, x2, orthant)
