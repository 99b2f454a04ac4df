import math

import numpy as np
import pytest

import qpc
from qpc.conformal import build_transfer, sqrt_substituted_quad, tanh_sinh_quad
from qpc.r3 import dual_quadrature_check, slice_conformal_structure
from qpc.charts import confocal_slice


def test_tanh_sinh_known_integrals():
    assert tanh_sinh_quad(lambda x: x * x, 0, 1) == pytest.approx(1 / 3, abs=1e-13)
    assert tanh_sinh_quad(lambda x: 1 / math.sqrt(x), 0, 1) == pytest.approx(2, abs=1e-11)
    assert tanh_sinh_quad(lambda x: math.sin(x), 0, math.pi) == pytest.approx(2, abs=1e-12)


def test_sqrt_substituted_quad_singular_endpoints():
    # int_0^1 1/sqrt(x(1-x)) dx = pi
    val = sqrt_substituted_quad(lambda x: 1 / math.sqrt(x * (1 - x)), 0, 1)
    assert val == pytest.approx(math.pi, abs=1e-10)


def test_transfer_roundtrip_precision():
    t = build_transfer(lambda x: 1 / math.sqrt(x * (2 - x)), 0.0, 2.0)
    assert t.total == pytest.approx(math.pi, abs=1e-11)
    for u in np.linspace(1e-8, 2 - 1e-8, 57):
        assert abs(t.x_of(t.s_of(u)) - u) < 1e-10
    assert t.x_of(0.0) == 0.0
    assert t.x_of(t.total) == 2.0


def test_dual_quadrature_agreement(ell_r3):
    s1a, s1b, s2a, s2b = dual_quadrature_check(ell_r3)
    assert abs(s1a - s1b) < 1e-8
    assert abs(s2a - s2b) < 1e-8


def test_conformality_small(ell_r3, rng):
    cs = qpc.conformal_reparametrization(ell_r3)
    h = 1e-6
    for _ in range(20):
        sa = rng.uniform(0.1, 0.9) * cs.s1
        sb = rng.uniform(0.1, 0.9) * cs.s2

        def pt(x, y):
            return cs.point(x, y, (1, 1, 1)).coords

        du = (pt(sa + h, sb) - pt(sa - h, sb)) / (2 * h)
        dv = (pt(sa, sb + h) - pt(sa, sb - h)) / (2 * h)
        e_val, g_val, f_val = du @ du, dv @ dv, du @ dv
        assert abs(e_val - g_val) / e_val < 1e-5
        assert abs(f_val) / e_val < 1e-5


def test_conformal_requires_ellipsoid(hyp1_r3):
    with pytest.raises(qpc.ChartRangeError):
        qpc.conformal_reparametrization(hyp1_r3)


def test_slice_conformal_structure(q1_r4):
    # ellipsoid-like slice of Q1 (fixed u): conformal in its (s1, s2)
    slc = confocal_slice(q1_r4, 2.0, "u")
    cs = slice_conformal_structure(slc)
    h = 1e-6
    for frac in (0.3, 0.6):
        sa, sb = frac * cs.s1, (1 - frac) * cs.s2

        def pt(x, y):
            return cs.point(x, y, (1, 1, 1, 1)).coords

        du = (pt(sa + h, sb) - pt(sa - h, sb)) / (2 * h)
        dv = (pt(sa, sb + h) - pt(sa, sb - h)) / (2 * h)
        e_val, g_val, f_val = du @ du, dv @ dv, du @ dv
        assert abs(e_val - g_val) / e_val < 1e-5
        assert abs(f_val) / e_val < 1e-5


def test_slice_with_unbounded_interval_rejected(q1_r4):
    slc = confocal_slice(q1_r4, -2.5, "v")  # free slots include unbounded u
    with pytest.raises(qpc.ChartRangeError):
        slice_conformal_structure(slc)
