"""Closed-form symmetric eigensolvers for shape-operator spectra.

The 3x3 eigenvalues come from the trigonometric form of the characteristic
cubic, which is branch-stable and vectorizes over batches.  Eigenvectors are
built from cross products of rows of (S - lam*I); that construction is well
conditioned only away from eigenvalue coincidence, so near-degenerate spectra
fall back to cyclic Jacobi sweeps.  Everything here is deterministic,
including eigenvector signs.
"""

from __future__ import annotations

import numpy as np

# Relative eigenvalue gap below which the cross-product eigenvector
# construction is abandoned for Jacobi sweeps.
JACOBI_FALLBACK_GAP = 1e-6

# Trig-method discriminant clamp (r is pushed into [-1, 1] within this slack).
_DISC_TOL = 1e-12


def eigvals2(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a symmetric 2x2 matrix (closed form).

    The discriminant is evaluated as hypot((a-c)/2, b), which keeps the
    eigenvalue gap accurate to roundoff even at near-coincidence (the
    tr^2/4 - det form loses half the digits there).
    """
    half_diff = 0.5 * (m[..., 0, 0] - m[..., 1, 1])
    half_tr = 0.5 * (m[..., 0, 0] + m[..., 1, 1])
    disc = np.hypot(half_diff, m[..., 0, 1])
    return np.stack([half_tr - disc, half_tr + disc], axis=-1)


def eigh2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns, 2x2 case."""
    w = eigvals2(m)
    a, b, c = m[0, 0], m[0, 1], m[1, 1]
    if abs(b) < _DISC_TOL * max(1.0, abs(a), abs(c)):
        vecs = np.eye(2)
        if a > c:
            vecs = vecs[:, ::-1].copy()
    else:
        # Rotation diagonalizing [[a, b], [b, c]]; angle from the stable
        # half-angle formula.
        theta = 0.5 * np.arctan2(2.0 * b, a - c)
        ct, st = np.cos(theta), np.sin(theta)
        hi = np.array([ct, st])          # eigenvector of the larger eigenvalue
        lo = np.array([-st, ct])
        vecs = np.column_stack([lo, hi])
    # Ensure the column order matches the ascending eigenvalues.
    if abs(vecs[:, 0] @ m @ vecs[:, 0] - w[0]) > abs(vecs[:, 1] @ m @ vecs[:, 1] - w[0]):
        vecs = vecs[:, ::-1].copy()
    return w, vecs


def eigvals3(m: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of symmetric 3x3 matrices, trigonometric method.

    Accepts a single matrix or a batch with shape (..., 3, 3).
    """
    m = np.asarray(m, dtype=float)
    a00, a11, a22 = m[..., 0, 0], m[..., 1, 1], m[..., 2, 2]
    a01, a02, a12 = m[..., 0, 1], m[..., 0, 2], m[..., 1, 2]
    p1 = a01 * a01 + a02 * a02 + a12 * a12
    q = (a00 + a11 + a22) / 3.0
    d0, d1, d2 = a00 - q, a11 - q, a22 - q
    p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1
    p = np.sqrt(p2 / 6.0)
    safe_p = np.where(p > 0.0, p, 1.0)
    # det((M - q I)/p) evaluated directly from the shifted entries.
    detb = (
        d0 * (d1 * d2 - a12 * a12)
        - a01 * (a01 * d2 - a12 * a02)
        + a02 * (a01 * a12 - d1 * a02)
    ) / (safe_p ** 3)
    r = np.clip(detb / 2.0, -1.0, 1.0)
    phi = np.arccos(r) / 3.0
    big = q + 2.0 * p * np.cos(phi)
    small = q + 2.0 * p * np.cos(phi + 2.0 * np.pi / 3.0)
    mid = 3.0 * q - big - small
    w = np.stack([small, mid, big], axis=-1)
    if p1.ndim == 0 and float(p1) == 0.0:
        return np.sort(np.stack([a00, a11, a22], axis=-1), axis=-1)
    diag_only = p2 == 0.0
    if np.any(diag_only):
        diag = np.sort(np.stack([a00, a11, a22], axis=-1), axis=-1)
        w = np.where(diag_only[..., None], diag, w)
    return w


def _jacobi(m: np.ndarray, sweeps: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi for small symmetric matrices; ascending order."""
    n = m.shape[0]
    a = np.array(m, dtype=float)
    v = np.eye(n)
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(a[p, q]))
        if off < 1e-15 * max(1.0, np.max(np.abs(np.diag(a)))):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    order = np.argsort(np.diag(a), kind="stable")
    return np.diag(a)[order], v[:, order]


def eigh3(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of one symmetric 3x3 matrix.

    Returns ascending eigenvalues and orthonormal eigenvector columns.
    Uses the trigonometric eigenvalues plus cross-product eigenvectors,
    switching wholesale to Jacobi when any relative gap is below
    JACOBI_FALLBACK_GAP (the partially umbilic regime).
    """
    m = np.asarray(m, dtype=float)
    w = eigvals3(m)
    span = max(abs(w[0]), abs(w[2]), 1e-300)
    if min(w[1] - w[0], w[2] - w[1]) < JACOBI_FALLBACK_GAP * span:
        return _jacobi(m)
    vecs = np.empty((3, 3))
    for pos, lam in ((0, w[0]), (2, w[2])):
        shifted = m - lam * np.eye(3)
        crosses = [
            np.cross(shifted[i], shifted[j]) for i, j in ((0, 1), (0, 2), (1, 2))
        ]
        norms = [np.linalg.norm(c) for c in crosses]
        best = int(np.argmax(norms))
        if norms[best] == 0.0:
            return _jacobi(m)
        vecs[:, pos] = crosses[best] / norms[best]
    mid = np.cross(vecs[:, 2], vecs[:, 0])
    nm = np.linalg.norm(mid)
    if nm == 0.0:
        return _jacobi(m)
    vecs[:, 1] = mid / nm
    # Re-orthogonalize the extreme pair against each other (cheap insurance).
    vecs[:, 2] -= (vecs[:, 2] @ vecs[:, 0]) * vecs[:, 0]
    vecs[:, 2] /= np.linalg.norm(vecs[:, 2])
    vecs[:, 1] = np.cross(vecs[:, 2], vecs[:, 0])
    return w, vecs


def eigh_small(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Dispatch to the closed-form 2x2 or 3x3 symmetric solver."""
    if m.shape[0] == 2:
        return eigh2(m)
    if m.shape[0] == 3:
        return eigh3(m)
    raise ValueError(f"unsupported size {m.shape}")


def fix_sign(vec: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Flip so the first component with |entry| > tol is positive."""
    for x in vec:
        if abs(x) > tol:
            return vec if x > 0 else -vec
    return vec
