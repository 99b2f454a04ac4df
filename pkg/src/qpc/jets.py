"""Third-order univariate jets: exact derivatives for Frenet torsion.

A Jet3 carries (f, f', f'', f''') at one parameter value; arithmetic follows
the Leibniz rules, so curve coordinates built from trig/hyperbolic functions
and square roots carry exact third derivatives without symbolic machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Jet3:
    f: float
    d1: float
    d2: float
    d3: float

    def __add__(self, other):
        o = _lift(other)
        return Jet3(self.f + o.f, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)

    __radd__ = __add__

    def __neg__(self):
        return Jet3(-self.f, -self.d1, -self.d2, -self.d3)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) + (-self)

    def __mul__(self, other):
        o = _lift(other)
        return Jet3(
            self.f * o.f,
            self.d1 * o.f + self.f * o.d1,
            self.d2 * o.f + 2.0 * self.d1 * o.d1 + self.f * o.d2,
            self.d3 * o.f + 3.0 * self.d2 * o.d1 + 3.0 * self.d1 * o.d2 + self.f * o.d3,
        )

    __rmul__ = __mul__

    def sqrt(self) -> "Jet3":
        s = math.sqrt(self.f)
        if s == 0.0:
            raise ZeroDivisionError("jet sqrt at zero")
        s1 = self.d1 / (2.0 * s)
        s2 = (self.d2 - 2.0 * s1 * s1) / (2.0 * s)
        s3 = (self.d3 - 6.0 * s1 * s2) / (2.0 * s)
        return Jet3(s, s1, s2, s3)


def _lift(x) -> Jet3:
    if isinstance(x, Jet3):
        return x
    return Jet3(float(x), 0.0, 0.0, 0.0)


def jet_var(t: float) -> Jet3:
    return Jet3(t, 1.0, 0.0, 0.0)


def jet_const(c: float) -> Jet3:
    return Jet3(float(c), 0.0, 0.0, 0.0)


def jet_cos(t: float) -> Jet3:
    c, s = math.cos(t), math.sin(t)
    return Jet3(c, -s, -c, s)


def jet_sin(t: float) -> Jet3:
    c, s = math.cos(t), math.sin(t)
    return Jet3(s, c, -s, -c)


def jet_cosh(t: float) -> Jet3:
    c, s = math.cosh(t), math.sinh(t)
    return Jet3(c, s, c, s)


def jet_sinh(t: float) -> Jet3:
    c, s = math.cosh(t), math.sinh(t)
    return Jet3(s, c, s, c)


def frenet_torsion(jets: tuple[Jet3, Jet3, Jet3]) -> tuple[float, float]:
    """(curvature, torsion) of a space curve from coordinate jets.

    kappa = |r' x r''| / |r'|^3, tau = det(r', r'', r''') / |r' x r''|^2.
    """
    r1 = [j.d1 for j in jets]
    r2 = [j.d2 for j in jets]
    r3 = [j.d3 for j in jets]
    cx = r1[1] * r2[2] - r1[2] * r2[1]
    cy = r1[2] * r2[0] - r1[0] * r2[2]
    cz = r1[0] * r2[1] - r1[1] * r2[0]
    cross_sq = cx * cx + cy * cy + cz * cz
    speed = math.sqrt(r1[0] ** 2 + r1[1] ** 2 + r1[2] ** 2)
    kappa = math.sqrt(cross_sq) / speed**3
    det = cx * r3[0] + cy * r3[1] + cz * r3[2]
    tau = det / cross_sq if cross_sq > 0 else math.nan
    return kappa, tau
