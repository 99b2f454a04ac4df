import math

import numpy as np
import pytest

import qpc
from qpc import QuadricSpec
from qpc.core import evaluate, tangent_basis, unit_normal
from qpc.jets import Jet3, frenet_torsion, jet_const, jet_cos, jet_sin, jet_var
from qpc.locus import (
    locus_defining_residual,
    COINCIDENCE_GAP,
    CurveSegment,
    NonBiregularError,
    crossing_arclengths,
    graph_chart_forms,
    graph_point,
    measure_kind,
    torsion_zeros,
)


@pytest.fixture(scope="module")
def loci(all_r4):
    return {fam: qpc.partially_umbilic_locus(spec)
            for fam, spec in all_r4.items()}


def test_jets_against_finite_differences():
    def curve(t):
        return [jet_cos(t) * jet_const(2.0),
                jet_sin(t) * (jet_var(t) + jet_const(1.0)),
                (jet_const(1.2) + jet_var(t) * jet_var(t)).sqrt()]

    t0 = 0.7
    jets = curve(t0)
    h = 1e-5
    for k, j in enumerate(jets):
        f = lambda t: [jc.f for jc in curve(t)][k]
        d1 = (f(t0 + h) - f(t0 - h)) / (2 * h)
        d2 = (f(t0 + h) - 2 * f(t0) + f(t0 - h)) / h ** 2
        assert j.d1 == pytest.approx(d1, abs=1e-9)
        assert j.d2 == pytest.approx(d2, abs=1e-5)


def test_locus_counts_and_kinds(loci):
    assert len(loci["Q0"]) == 4
    assert sorted(c.kind for c in loci["Q0"]) == ["P12", "P12", "P23", "P23"]
    assert len(loci["Q1"]) == 4
    assert all(c.kind == "P23" and not c.closed for c in loci["Q1"])
    assert len(loci["Q2"]) == 2
    assert all(c.kind == "P23" and c.closed for c in loci["Q2"])
    assert len(loci["Q3"]) == 6
    per_sheet = [c for c in loci["Q3"] if c.component.startswith("x+")]
    assert len(per_sheet) == 3
    assert sorted(c.kind for c in per_sheet) == ["P12", "P23", "P23"]


def test_q1_conic_coefficients_and_endpoints(loci):
    # 5u^2 - 3w^2 = 1 with arc endpoints at u^2 = w^2 = 1/2 (t = 0)
    arc = loci["Q1"][0]
    assert arc.conic["x"] == pytest.approx(5.0)
    assert arc.conic["z"] == pytest.approx(-3.0)
    p0 = arc.point_at(0.5 * arc.arclength)  # window center: the t=0 point
    u, w = p0[0] / 2.0, p0[2] / math.sqrt(2.0)
    assert abs(p0[3]) < 1e-9
    assert u ** 2 == pytest.approx(0.5, abs=1e-9)
    assert w ** 2 == pytest.approx(0.5, abs=1e-9)


def test_q2_conic_and_sample_point(loci):
    curve = loci["Q2"][0]
    assert curve.conic["x"] == pytest.approx(5 / 6)
    assert curve.conic["y"] == pytest.approx(4 / 5)
    samples = qpc.sample_locus(curve, 4)
    p = samples[0].point.coords
    assert np.allclose(np.abs(p), [2.1908902300206643, 0, 0,
                                   0.4472135954999579], atol=1e-9)


def test_sample_locus_invariants(loci):
    for fam, curves in loci.items():
        for curve in curves:
            for smp in qpc.sample_locus(curve, 12):
                assert abs(smp.point.residual) < 1e-10
                g12, g23 = smp.principal.gaps
                coin, sep = (g12, g23) if curve.kind == "P12" else (g23, g12)
                assert coin < 1e-8
                assert sep > 1e-3
                assert abs(smp.point.coords[curve.hyperplane_axis]) < 1e-12
                aux_p = smp.point.coords[list(curve.aux_axes)]
                assert abs(evaluate(curve.aux_spec, aux_p)) < 1e-10


def test_sample_locus_antipodal_n2(loci):
    curve = loci["Q2"][0]
    s1, s2 = qpc.sample_locus(curve, 2)
    # central conic: arclength-antipodal points are point-antipodal in (x, y)
    assert np.allclose(s1.point.coords[:2], -s2.point.coords[:2], atol=1e-9)


def test_sample_locus_requires_two(loci):
    with pytest.raises(ValueError):
        qpc.sample_locus(loci["Q2"][0], 1)


def test_q0_hyperbola_constraint(loci):
    # glued curve stays inside the graph-chart disk u^2 + w^2 <= 1
    curve = next(c for c in loci["Q0"] if c.paper_label == "hyperbole")
    for smp in qpc.sample_locus(curve, 40):
        u, w = smp.point.coords[0] / 2.0, smp.point.coords[2] / math.sqrt(2.0)
        assert u * u + w * w <= 1 + 1e-12


def test_graph_chart_forms_displayed_block(q2_r4):
    u, v, w = 1.2, 0.5, 0.3
    delta = u * u + v * v - w * w - 1
    abcd = q2_r4.axis_product
    ff = graph_chart_forms(q2_r4, (u, v, w))
    assert ff.g[0] == pytest.approx(4 + 1 * u * u / delta, rel=1e-14)
    assert ff.g[1] == pytest.approx(3 + v * v / delta, rel=1e-14)
    assert ff.g[2] == pytest.approx(2 + w * w / delta, rel=1e-14)
    assert ff.offdiag_g[0] == pytest.approx(u * v / delta, rel=1e-14)
    assert ff.offdiag_g[1] == pytest.approx(-u * w / delta, rel=1e-14)
    assert ff.offdiag_g[2] == pytest.approx(-v * w / delta, rel=1e-14)
    assert ff.b[0] == pytest.approx(abcd * (v * v - w * w - 1) / delta ** 1.5,
                                    rel=1e-14)
    assert ff.b[1] == pytest.approx(abcd * (u * u - w * w - 1) / delta ** 1.5,
                                    rel=1e-14)
    assert ff.b[2] == pytest.approx(-abcd * (u * u + v * v - 1) / delta ** 1.5,
                                    rel=1e-14)
    assert ff.offdiag_b[0] == pytest.approx(-abcd * u * v / delta ** 1.5,
                                            rel=1e-14)
    assert ff.offdiag_b[1] == pytest.approx(abcd * u * w / delta ** 1.5,
                                            rel=1e-14)
    assert ff.offdiag_b[2] == pytest.approx(abcd * v * w / delta ** 1.5,
                                            rel=1e-14)


def test_graph_chart_forms_fd_oracle(all_r4):
    h1, h2 = 1e-6, 1e-4
    probes = {"Q0": (0.3, 0.4, 0.35), "Q1": (0.8, 0.6, 0.5),
              "Q2": (1.2, 0.5, 0.3), "Q3": (0.4, 0.3, 0.5)}
    for fam, spec in all_r4.items():
        uvw = np.array(probes[fam])
        ff = graph_chart_forms(spec, uvw)
        jac = np.empty((spec.ambient_dim, 3))
        for m in range(3):
            e = np.zeros(3)
            e[m] = h1
            jac[:, m] = (graph_point(spec, uvw + e) - graph_point(spec, uvw - e)) / (2 * h1)
        gram = jac.T @ jac
        g_full = np.diag(ff.g)
        g_full[0, 1] = g_full[1, 0] = ff.offdiag_g[0]
        g_full[0, 2] = g_full[2, 0] = ff.offdiag_g[1]
        g_full[1, 2] = g_full[2, 1] = ff.offdiag_g[2]
        assert np.abs(gram - g_full).max() < 1e-6


def test_partially_umbilic_system_vanishes_on_conic(q2_r4):
    # on E the out-of-section eigenvalue b33/g33 is a block eigenvalue;
    # det(b_block - kappa g_block)(u, v, 0) = 0 characterizes the locus
    cu, cv = 5 / 6, 4 / 5
    for theta in np.linspace(0, 2 * math.pi, 17):
        u = math.cos(theta) / math.sqrt(cu)
        v = math.sin(theta) / math.sqrt(cv)
        assert abs(locus_defining_residual(q2_r4, (u, v))) < 1e-8
        # off the conic the residual is far from zero
        assert abs(locus_defining_residual(q2_r4, (1.05 * u, 1.05 * v))) > 1e-2


def test_graph_chart_w0_section(q2_r4):
    ff = graph_chart_forms(q2_r4, (1.2, 0.5, 0.0))
    assert ff.offdiag_g[1] == 0.0  # g13
    assert ff.offdiag_g[2] == 0.0  # g23


def test_graph_chart_boundary_error(q2_r4):
    with pytest.raises(ValueError):
        graph_chart_forms(q2_r4, (1.0, 0.0, 0.0))  # Delta = 0


def test_torsion_zero_counts(loci):
    for arc in loci["Q1"]:
        assert len(torsion_zeros(arc)) == 1
    for curve in loci["Q2"]:
        assert len(torsion_zeros(curve)) == 4
    for curve in loci["Q3"]:
        assert len(torsion_zeros(curve)) == (4 if curve.closed else 1)
    for curve in loci["Q0"]:
        assert len(torsion_zeros(curve)) == 4


def test_torsion_zeros_at_crossings(loci):
    for curves in loci.values():
        for curve in curves:
            total = curve.arclength
            crossings = crossing_arclengths(curve)
            for z in torsion_zeros(curve):
                dist = min(
                    min(abs(z["s"] - s), total - abs(z["s"] - s))
                    if curve.closed else abs(z["s"] - s)
                    for s, _ in crossings)
                assert dist < 1e-6


def test_torsion_profile_finite_and_biregular(loci):
    profile = qpc.locus_torsion_profile(loci["Q2"][0], 64)
    assert len(profile) == 64
    assert all(math.isfinite(t) for _, t in profile)
    with pytest.raises(ValueError):
        qpc.locus_torsion_profile(loci["Q2"][0], 16)


def test_planar_conic_zero_torsion():
    # lift suppressed: plane curve, torsion identically ~0
    def jets(theta):
        return [jet_cos(theta) * jet_const(2.0),
                jet_sin(theta) * jet_const(1.5),
                jet_const(0.0) * jet_var(theta),
                jet_const(0.7) + jet_const(0.0) * jet_var(theta)]

    seg = CurveSegment(0.0, 2 * math.pi, jets)
    for t in np.linspace(0.1, 6.1, 25):
        js = [j for k, j in enumerate(seg.jets_fn(t)) if k != 2]
        kappa, tau = frenet_torsion(tuple(js))
        assert kappa > 1e-10
        assert abs(tau) < 1e-10


def test_measure_kind_orientation_exchange(q2_r4, loci):
    p = qpc.sample_locus(loci["Q2"][0], 3)[1].point.coords
    assert measure_kind(q2_r4, p) == "P23"
    assert measure_kind(q2_r4, p, flip=True) == "P12"


def test_locus_rejects_r3(ell_r3):
    with pytest.raises(qpc.QpcError):
        qpc.partially_umbilic_locus(ell_r3)
