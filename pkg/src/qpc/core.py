"""Implicit representation of the seven quadric families.

A family is the unit level set of sum_i x_i^2 / A_i - 1 with signed
denominators A_i; everything downstream (normals, shape operators, confocal
charts) is driven by the signed vector A and the orientation sign of the
family's distinguished unit normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .eigen import eigh_small, eigvals2, eigvals3, fix_sign

#: Default relative separation floor for the strict semiaxis inequalities.
SEPARATION_FLOOR = 1e-9

#: On-surface tolerance factor (times scale^2, scale = max semiaxis).
ON_SURFACE_TOL = 1e-10


class QpcError(Exception):
    """Base class for library errors."""


class SpecError(ValueError, QpcError):
    """Semiaxis ordering violation; message names the broken inequality."""


class OffSurfaceError(QpcError):
    """Point does not satisfy the defining equation within tolerance."""


class InternalError(QpcError):
    """Numerical state the construction provably excludes."""


# family -> (signed denominator pattern, orientation sign, ordering chains)
# Each chain is a tuple of semiaxis labels that must be strictly decreasing
# (squares compared); a trailing "0" requires positivity of the last label.
_FAMILY_TABLE = {
    "Q0": ((+1, +1, +1, +1), -1.0, (("a", "b", "c", "d", "0"),)),
    "Q1": ((+1, +1, +1, -1), -1.0, (("a", "b", "c", "0"), ("d", "0"))),
    "Q2": ((+1, +1, -1, -1), +1.0, (("a", "b", "0"), ("c", "d", "0"))),
    "Q3": ((+1, -1, -1, -1), +1.0, (("a", "0"), ("b", "c", "d", "0"))),
    "q0": ((+1, +1, +1), -1.0, (("a", "b", "c", "0"),)),
    "q1": ((+1, +1, -1), -1.0, (("a", "b", "0"), ("c", "0"))),
    "q2": ((+1, -1, -1), +1.0, (("a", "0"), ("b", "c", "0"))),
}

_LABELS = ("a", "b", "c", "d")

R4_FAMILIES = ("Q0", "Q1", "Q2", "Q3")
R3_FAMILIES = ("q0", "q1", "q2")
ALL_FAMILIES = R4_FAMILIES + R3_FAMILIES


@dataclass(frozen=True)
class QuadricSpec:
    """One quadric family plus its semiaxes (stored squared).

    `semiaxes_sq` are the squares (a^2, b^2, c^2[, d^2]); every closed-form
    expression in the library consumes squares, so they are the stored truth.
    """

    family: str
    semiaxes_sq: tuple[float, ...]
    separation_floor: float = SEPARATION_FLOOR

    def __post_init__(self):
        if self.family not in _FAMILY_TABLE:
            raise SpecError(f"unknown family {self.family!r}")
        signs, _, chains = _FAMILY_TABLE[self.family]
        vals = tuple(float(v) for v in self.semiaxes_sq)
        if len(vals) != len(signs):
            raise SpecError(
                f"{self.family} expects {len(signs)} semiaxes, got {len(vals)}"
            )
        object.__setattr__(self, "semiaxes_sq", vals)
        floor = self.separation_floor * max(vals)
        named = dict(zip(_LABELS, vals))
        for chain in chains:
            for hi, lo in zip(chain, chain[1:]):
                left = named[hi]
                right = 0.0 if lo == "0" else named[lo]
                if left - right <= floor:
                    what = f"{hi}>{lo}" if lo != "0" else f"{hi}>0"
                    raise SpecError(f"{what} violated for {self.family}")

    @classmethod
    def from_semiaxes(cls, family: str, semiaxes: Sequence[float]) -> "QuadricSpec":
        return cls(family, tuple(float(s) ** 2 for s in semiaxes))

    @property
    def ambient_dim(self) -> int:
        return len(self.semiaxes_sq)

    @property
    def signed_denoms(self) -> np.ndarray:
        """Signed A_i with the defining function sum x_i^2/A_i - 1."""
        signs, _, _ = _FAMILY_TABLE[self.family]
        return np.array(signs, dtype=float) * np.array(self.semiaxes_sq)

    @property
    def orientation(self) -> float:
        """Sign s in N = s * grad/|grad| for the family's positive normal."""
        return _FAMILY_TABLE[self.family][1]

    @property
    def poles(self) -> np.ndarray:
        """Confocal pole locations -A_i, one per ambient coordinate."""
        return -self.signed_denoms

    @property
    def semiaxes(self) -> tuple[float, ...]:
        return tuple(float(np.sqrt(v)) for v in self.semiaxes_sq)

    @property
    def scale(self) -> float:
        return float(np.sqrt(max(self.semiaxes_sq)))

    @property
    def scale_sq(self) -> float:
        return float(max(self.semiaxes_sq))

    @property
    def axis_product(self) -> float:
        """abcd (or abc in R^3)."""
        return float(np.sqrt(np.prod(self.semiaxes_sq)))

    @property
    def on_surface_tol(self) -> float:
        return ON_SURFACE_TOL * self.scale_sq

    def __str__(self) -> str:
        return f"{self.family}{self.semiaxes_sq}"


@dataclass(frozen=True, eq=False)
class SurfacePoint:
    """Ambient point together with its defining-function residual."""

    coords: np.ndarray
    residual: float

    @property
    def x(self) -> np.ndarray:
        return self.coords


@dataclass(frozen=True, eq=False)
class PrincipalData:
    """Sorted principal curvatures with orthonormal principal directions.

    `directions[i]` is the ambient unit eigenvector for `curvatures[i]`,
    sign-fixed so its first nonzero component is positive.
    """

    curvatures: tuple[float, ...]
    directions: np.ndarray
    gaps: tuple[float, ...]


def evaluate(spec: QuadricSpec, p: Sequence[float]) -> float:
    """Defining quadratic form minus one; zero exactly on the quadric."""
    p = np.asarray(p, dtype=float)
    return float(np.sum(p * p / spec.signed_denoms) - 1.0)


def gradient(spec: QuadricSpec, p: Sequence[float]) -> np.ndarray:
    return 2.0 * np.asarray(p, dtype=float) / spec.signed_denoms


def surface_point(spec: QuadricSpec, coords: Sequence[float],
                  tol: float | None = None) -> SurfacePoint:
    """Validate |residual| against the on-surface tolerance."""
    coords = np.asarray(coords, dtype=float)
    res = evaluate(spec, coords)
    limit = spec.on_surface_tol if tol is None else tol
    if abs(res) > limit:
        raise OffSurfaceError(
            f"residual {res:.3e} exceeds tolerance {limit:.3e} on {spec}"
        )
    return SurfacePoint(coords, res)


def project_to_surface(spec: QuadricSpec, p: Sequence[float],
                       tol: float | None = None, max_iter: int = 12) -> np.ndarray:
    """Newton projection along the gradient onto the level set."""
    q = np.asarray(p, dtype=float).copy()
    limit = spec.on_surface_tol if tol is None else tol
    for _ in range(max_iter):
        f = evaluate(spec, q)
        if abs(f) <= limit:
            return q
        g = gradient(spec, q)
        g2 = g @ g
        if g2 < 1e-24:
            raise InternalError("vanishing gradient during projection")
        q = q - (f / g2) * g
    f = evaluate(spec, q)
    if abs(f) <= limit:
        return q
    raise OffSurfaceError(f"projection stalled at residual {f:.3e}")


def unit_normal(spec: QuadricSpec, p: Sequence[float]) -> np.ndarray:
    """Family-oriented unit normal (signs per the orientation conventions)."""
    g = gradient(spec, p)
    n = np.linalg.norm(g)
    if n < 1e-12:
        raise InternalError("gradient below 1e-12 on the unit level set")
    return spec.orientation * g / n


def tangent_basis(normal: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal tangent basis, columns orthogonal to normal.

    Householder reflection sending the normal onto its largest coordinate
    axis; the remaining columns of the reflector span the tangent space.
    """
    n = np.asarray(normal, dtype=float)
    k = int(np.argmax(np.abs(n)))
    v = n.copy()
    v[k] += 1.0 if n[k] >= 0 else -1.0
    h = np.eye(len(n)) - 2.0 * np.outer(v, v) / (v @ v)
    return np.delete(h, k, axis=1)


def _shape_in_basis(spec: QuadricSpec, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Shape operator matrix in a tangent basis, plus the basis columns.

    S = -dN restricted to the tangent space; for the quadratic level set this
    is -sigma * B^T diag(1/A) B / sqrt(sum x_i^2/A_i^2), exactly.
    """
    p = np.asarray(p, dtype=float)
    A = spec.signed_denoms
    g = 2.0 * p / A
    norm_g = np.linalg.norm(g)
    if norm_g < 1e-12:
        raise InternalError("gradient below 1e-12 on the unit level set")
    basis = tangent_basis(spec.orientation * g / norm_g)
    scaled = basis / A[:, None]
    s_mat = (-spec.orientation * 2.0 / norm_g) * (basis.T @ scaled)
    return 0.5 * (s_mat + s_mat.T), basis


def shape_operator(spec: QuadricSpec, p: Sequence[float]) -> np.ndarray:
    """Symmetric shape-operator matrix in an orthonormal tangent basis."""
    return _shape_in_basis(spec, np.asarray(p, dtype=float))[0]


def principal_data(spec: QuadricSpec, p: Sequence[float]) -> PrincipalData:
    """Sorted curvatures and ambient principal directions at a surface point."""
    p = np.asarray(p, dtype=float)
    s_mat, basis = _shape_in_basis(spec, p)
    vals, vecs = eigh_small(s_mat)
    ambient = basis @ vecs
    dirs = np.array([fix_sign(ambient[:, i]) for i in range(ambient.shape[1])])
    gaps = tuple(float(vals[i + 1] - vals[i]) for i in range(len(vals) - 1))
    return PrincipalData(tuple(float(v) for v in vals), dirs, gaps)


def curvatures_batch(spec: QuadricSpec, pts: np.ndarray) -> np.ndarray:
    """Sorted principal curvatures for a batch of on-surface points.

    Vectorized over the leading axis; uses the same closed-form eigenvalue
    path as the scalar solver.
    """
    pts = np.asarray(pts, dtype=float)
    A = spec.signed_denoms
    n = pts.shape[-1]
    g = 2.0 * pts / A
    norm_g = np.linalg.norm(g, axis=-1)
    nhat = spec.orientation * g / norm_g[:, None]
    k = np.argmax(np.abs(nhat), axis=-1)
    v = nhat.copy()
    rows = np.arange(len(pts))
    v[rows, k] += np.where(nhat[rows, k] >= 0, 1.0, -1.0)
    h = np.eye(n)[None, :, :] - 2.0 * v[:, :, None] * v[:, None, :] / (
        np.sum(v * v, axis=-1)[:, None, None]
    )
    keep = np.ones((len(pts), n), dtype=bool)
    keep[rows, k] = False
    basis = h.transpose(0, 2, 1)[keep].reshape(len(pts), n - 1, n).transpose(0, 2, 1)
    scaled = basis / A[None, :, None]
    s_mat = np.einsum("pij,pik->pjk", basis, scaled)
    s_mat = (-spec.orientation * 2.0 / norm_g)[:, None, None] * s_mat
    s_mat = 0.5 * (s_mat + s_mat.transpose(0, 2, 1))
    if n - 1 == 3:
        return eigvals3(s_mat)
    return eigvals2(s_mat)


def gap_batch(spec: QuadricSpec, pts: np.ndarray) -> np.ndarray:
    """Adjacent sorted-curvature gaps for a batch of points."""
    k = curvatures_batch(spec, pts)
    return np.diff(k, axis=-1)
