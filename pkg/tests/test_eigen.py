import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpc.eigen import eigh2, eigh3, eigvals2, eigvals3, fix_sign


def _random_sym(rng, n):
    m = rng.normal(size=(n, n))
    return 0.5 * (m + m.T)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_eigh3_matches_lapack(seed):
    m = _random_sym(np.random.default_rng(seed), 3)
    vals, vecs = eigh3(m)
    ref = np.linalg.eigvalsh(m)
    assert np.allclose(vals, ref, rtol=1e-12, atol=1e-12)
    assert np.allclose(vecs.T @ vecs, np.eye(3), atol=1e-12)
    assert np.allclose(m @ vecs, vecs @ np.diag(vals), atol=1e-10)


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_eigh2_matches_lapack(seed):
    m = _random_sym(np.random.default_rng(seed), 2)
    vals, vecs = eigh2(m)
    assert np.allclose(vals, np.linalg.eigvalsh(m), atol=1e-13)
    assert np.allclose(m @ vecs, vecs @ np.diag(vals), atol=1e-12)


def test_near_degenerate_pair_stays_orthonormal():
    # double eigenvalue split by 1e-12: the Jacobi fallback must engage
    q, _ = np.linalg.qr(np.random.default_rng(3).normal(size=(3, 3)))
    m = q @ np.diag([1.0, 1.0 + 1e-12, 2.0]) @ q.T
    vals, vecs = eigh3(0.5 * (m + m.T))
    assert np.allclose(vecs.T @ vecs, np.eye(3), atol=1e-10)
    assert np.allclose(np.sort(vals), np.linalg.eigvalsh(0.5 * (m + m.T)),
                       atol=1e-10)


def test_exactly_degenerate_triple():
    vals, vecs = eigh3(2.5 * np.eye(3))
    assert np.allclose(vals, 2.5)
    assert np.allclose(vecs.T @ vecs, np.eye(3), atol=1e-14)


def test_batch_eigvals3_agrees_with_scalar(rng):
    ms = np.array([_random_sym(rng, 3) for _ in range(64)])
    batch = eigvals3(ms)
    singles = np.array([eigh3(m)[0] for m in ms])
    assert np.allclose(batch, singles, atol=1e-12)


def test_batch_eigvals2(rng):
    ms = np.array([_random_sym(rng, 2) for _ in range(32)])
    assert np.allclose(eigvals2(ms),
                       np.array([np.linalg.eigvalsh(m) for m in ms]),
                       atol=1e-13)


def test_fix_sign_convention():
    assert fix_sign(np.array([-0.5, 0.2, 0.0]))[0] > 0
    assert fix_sign(np.array([0.0, -0.7, 0.1]))[1] > 0
    v = np.array([0.3, -0.9, 0.1])
    assert np.array_equal(fix_sign(v), v)
