import math

import numpy as np
import pytest

import qpc
from qpc import ChartCoords, ChartDegenerateError, ChartRangeError, QuadricSpec
from qpc.charts import (
    ConfocalFamily,
    chart_from_points_batch,
    chart_intervals,
    confocal_slice,
    invert_chart,
    _point_from_lams,
)
from qpc.validate import chart_samples, _points_from_lams_batch


def test_intervals_match_family_ranges(all_r4):
    a2, b2, c2, d2 = 4.0, 3.0, 2.0, 1.0
    expected = {
        "Q0": [(-c2, -d2), (-b2, -c2), (-a2, -b2)],
        "Q1": [(d2, math.inf), (-b2, -c2), (-a2, -b2)],
        "Q2": [(c2, math.inf), (d2, c2), (-a2, -b2)],
        "Q3": [(b2, math.inf), (c2, b2), (d2, c2)],
    }
    for fam, spec in all_r4.items():
        assert chart_intervals(spec) == expected[fam]


def test_point_from_chart_residuals(q0_r4, q1_r4):
    sp = qpc.point_from_chart(q0_r4, ChartCoords(-1.5, -2.5, -3.5, (1, 1, 1, 1)))
    assert abs(sp.residual) < 1e-12
    sp1 = qpc.point_from_chart(q1_r4, ChartCoords(2.0, -2.5, -3.5, (1, 1, 1, 1)))
    assert abs(sp1.residual) < 1e-12
    assert np.all(sp1.coords > 0)


def test_roundtrip_example(q0_r4):
    cc = ChartCoords(-1.5, -2.5, -3.5, (1, -1, 1, -1))
    sp = qpc.point_from_chart(q0_r4, cc)
    back = qpc.chart_from_point(q0_r4, sp)
    assert max(abs(back.u + 1.5), abs(back.v + 2.5), abs(back.w + 3.5)) < 1e-9
    assert back.orthant == (1, -1, 1, -1)


def test_roundtrip_sampled(all_r4):
    for spec in all_r4.values():
        lams = chart_samples(spec, 100, 17)
        pts = _points_from_lams_batch(spec, lams)
        back = chart_from_points_batch(spec, pts)
        assert np.abs(back - lams).max() < 1e-9


def test_roots_one_per_interval(q0_r4):
    # x = y = 1, z0/t0 chosen on-surface
    z0 = 0.7
    t0 = math.sqrt(1 - 0.25 - 1 / 3 - z0 ** 2 / 2)
    roots, orthant = invert_chart(q0_r4, np.array([1.0, 1.0, z0, t0]))
    for lam, (lo, hi) in zip(roots, chart_intervals(q0_r4)):
        assert lo < lam < hi
    assert orthant == (1, 1, 1, 1)


def test_degenerate_hyperplane_error(q0_r4):
    p = np.array([1.0, 0.0, 0.7, 0.85])
    with pytest.raises(ChartDegenerateError):
        qpc.chart_from_point(q0_r4, p)


def test_range_error_names_slot(q1_r4):
    with pytest.raises(ChartRangeError, match="u="):
        qpc.point_from_chart(q1_r4, ChartCoords(0.5, -2.5, -3.5, (1, 1, 1, 1)))
    with pytest.raises(ChartRangeError, match="v="):
        qpc.point_from_chart(q1_r4, ChartCoords(2.0, -1.5, -3.5, (1, 1, 1, 1)))


def test_closed_form_curvature_example(q0_r4):
    ks, slots = qpc.closed_form_curvatures(q0_r4, ChartCoords(-1.5, -2.5, -3.5,
                                                              (1, 1, 1, 1)))
    assert np.allclose(ks, (0.38635623, 0.54089872, 0.90149787), atol=1e-7)
    assert slots == ("w", "v", "u")


def test_q1_exactly_one_negative(q1_r4):
    ks, _ = qpc.closed_form_curvatures(q1_r4, ChartCoords(2.0, -2.5, -3.5,
                                                          (1, 1, 1, 1)))
    assert sum(1 for k in ks if k < 0) == 1


def test_q2_coalescence_near_corner(q2_r4):
    ks, _ = qpc.closed_form_curvatures(
        q2_r4, ChartCoords(2 + 1e-6, 2 - 1e-6, -3.5, (1, 1, 1, 1)))
    assert ks[2] - ks[1] < 1e-4
    assert ks[1] - ks[0] > 0.1


def test_dual_oracle_agreement_sampled(all_r4):
    for spec in all_r4.values():
        lams = chart_samples(spec, 50, 23)
        pts = _points_from_lams_batch(spec, lams)
        for row, p in zip(lams, pts):
            ks, _ = qpc.closed_form_curvatures(spec, row)
            ki = qpc.principal_data(spec, p).curvatures
            rel = np.abs(np.array(ks) - ki) / np.abs(ks)
            assert rel.max() < 1e-8


def test_fundamental_forms_positive_and_consistent(q0_r4):
    cc = ChartCoords(-1.5, -2.5, -3.5, (1, 1, 1, 1))
    ff = qpc.fundamental_forms(q0_r4, cc)
    assert min(ff.g) > 0
    assert ff.offdiag_g == (0.0, 0.0, 0.0)
    ks, slots = qpc.closed_form_curvatures(q0_r4, cc)
    k_by_slot = dict(zip(slots, ks))
    for i, name in enumerate(("u", "v", "w")):
        assert ff.b[i] / ff.g[i] == pytest.approx(k_by_slot[name], rel=1e-13)


def test_fundamental_forms_fd_oracle(q1_r4):
    # diagonal g matches the finite-difference Gram matrix
    row = np.array([2.7, -2.4, -3.3])
    ff = qpc.fundamental_forms(q1_r4, ChartCoords(*row, (1, 1, 1, 1)))
    h = 1e-6
    for m in range(3):
        e = np.zeros(3)
        e[m] = h
        dp = (_point_from_lams(q1_r4, row + e, (1, 1, 1, 1)).coords
              - _point_from_lams(q1_r4, row - e, (1, 1, 1, 1)).coords) / (2 * h)
        assert dp @ dp == pytest.approx(ff.g[m], rel=1e-6)


def test_confocal_family_validation(q1_r4):
    fam = ConfocalFamily(q1_r4, 2.0)
    p = qpc.point_from_chart(q1_r4, ChartCoords(2.0, -2.5, -3.5, (1, 1, 1, 1)))
    assert abs(fam.value(p.coords)) < 1e-12
    with pytest.raises(ChartRangeError):
        ConfocalFamily(q1_r4, 1.0)  # pole at d^2


def test_confocal_slice_on_both_quadrics(q1_r4):
    slc = confocal_slice(q1_r4, 2.0, "u")
    (v_lo, v_hi), (w_lo, w_hi) = slc.free_intervals
    sp = slc.point(0.5 * (v_lo + v_hi), 0.5 * (w_lo + w_hi), (1, 1, 1, 1))
    r_quad, r_conf = slc.residual_pair(sp)
    assert r_quad < 1e-10 and r_conf < 1e-10


def test_confocal_slice_z_branches(q1_r4):
    slc = confocal_slice(q1_r4, -2.5, "v")
    (u_lo, _), (w_lo, w_hi) = slc.free_intervals
    up = slc.point(u_lo + 1.0, 0.5 * (w_lo + w_hi), (1, 1, 1, 1))
    dn = slc.point(u_lo + 1.0, 0.5 * (w_lo + w_hi), (1, 1, -1, 1))
    assert up.coords[2] > 0 > dn.coords[2]


def test_q2_slice_closed_loop(q2_r4):
    # Lemma-13-style check: a traced slice coordinate loop returns to start
    slc = confocal_slice(q2_r4, 5.0, "u")
    (v_lo, v_hi), (w_lo, w_hi) = slc.free_intervals
    eps = 1e-6
    w_fix = 0.5 * (w_lo + w_hi)
    n = 50
    loop = []
    sweeps = [
        (np.linspace(v_lo + eps, v_hi - eps, n), (1, 1, 1, 1)),
        (np.linspace(v_hi - eps, v_lo + eps, n), (1, 1, -1, 1)),
        (np.linspace(v_lo + eps, v_hi - eps, n), (1, 1, -1, -1)),
        (np.linspace(v_hi - eps, v_lo + eps, n), (1, 1, 1, -1)),
    ]
    for vs, orth in sweeps:
        for v in vs:
            sp = slc.point(v, w_fix, orth)
            assert max(slc.residual_pair(sp)) < 1e-10
            loop.append(sp.coords)
    # endpoints of consecutive sweeps meet at the hyperplane walls
    assert np.linalg.norm(loop[0] - loop[-1]) < 1e-2
    assert np.linalg.norm(loop[n - 1] - loop[n]) < 1e-2


def test_confocal_slice_orthogonality(q1_r4):
    # tangent planes of two slices through the same point meet orthogonally
    lams = np.array([2.0, -2.5, -3.5])
    h = 1e-6
    partials = []
    for m in range(3):
        e = np.zeros(3)
        e[m] = h
        dp = (_point_from_lams(q1_r4, lams + e, (1, 1, 1, 1)).coords
              - _point_from_lams(q1_r4, lams - e, (1, 1, 1, 1)).coords) / (2 * h)
        partials.append(dp / np.linalg.norm(dp))
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(partials[i] @ partials[j]) < 1e-8


def test_chart_eps_policy(q2_r4):
    # operations fail outside the open intervals rather than clamping
    (u_lo, _), _, _ = chart_intervals(q2_r4)
    with pytest.raises(ChartRangeError):
        qpc.closed_form_curvatures(
            q2_r4, ChartCoords(u_lo, 1.5, -3.5, (1, 1, 1, 1)))
