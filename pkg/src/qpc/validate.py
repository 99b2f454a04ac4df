"""Validation suites: the acceptance criteria as runnable checks.

Each suite returns structured results; the CLI prints them and the
acceptance tests assert them.  Tolerances are pinned here, once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from . import charts, locus as locus_mod, r3 as r3_mod, tracer as tracer_mod
from .charts import (
    ChartCoords,
    chart_eps,
    chart_from_points_batch,
    chart_intervals,
    closed_form_curvatures,
    invert_chart,
    point_from_chart,
    _point_from_lams,
)
from .core import (
    QuadricSpec,
    curvatures_batch,
    evaluate,
    gap_batch,
    principal_data,
    shape_operator,
)

R4_AXES = (4.0, 3.0, 2.0, 1.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    stat: float
    threshold: float
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "pass": bool(self.passed),
            "stat": float(self.stat),
            "threshold": float(self.threshold),
            "note": self.note,
        }


@dataclass
class SuiteResult:
    name: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, stat, threshold, note=""):
        self.checks.append(CheckResult(name, bool(passed), float(stat),
                                       float(threshold), note))


def _standard_specs() -> dict[str, QuadricSpec]:
    return {fam: QuadricSpec(fam, R4_AXES) for fam in ("Q0", "Q1", "Q2", "Q3")}


def chart_samples(spec: QuadricSpec, n: int, seed: int,
                  margin: float = 0.02, span_cap: float | None = None) -> np.ndarray:
    """Quasi-random (Halton) chart coordinates, one row per sample."""
    intervals = chart_intervals(spec)
    cap = span_cap if span_cap is not None else 2.0 * spec.scale_sq
    sampler = qmc.Halton(d=len(intervals), seed=seed)
    raw = sampler.random(n)
    eps = chart_eps(spec)
    cols = []
    for k, (lo, hi) in enumerate(intervals):
        if math.isinf(hi):
            lo_eff, hi_eff = lo + max(eps, margin * cap), lo + cap
        else:
            width = hi - lo
            lo_eff, hi_eff = lo + margin * width, hi - margin * width
        cols.append(lo_eff + (hi_eff - lo_eff) * raw[:, k])
    return np.column_stack(cols)


def _points_from_lams_batch(spec: QuadricSpec, lams: np.ndarray,
                            orthant=None) -> np.ndarray:
    s = spec.poles
    n = len(s)
    sq = np.empty((len(lams), n))
    for i in range(n):
        num = -s[i] * np.prod(s[i] - lams, axis=1)
        den = np.prod([s[i] - s[j] for j in range(n) if j != i])
        sq[:, i] = num / den
    sq = np.maximum(sq, 0.0)
    signs = np.ones(n) if orthant is None else np.asarray(orthant, dtype=float)
    return np.sqrt(sq) * signs


# ---------------------------------------------------------------------------
# oracle suite


def suite_oracle(seed: int = 42) -> SuiteResult:
    out = SuiteResult("oracle")
    # dual-oracle curvature agreement, 1000 quasi-random points per family
    for fam, spec in _standard_specs().items():
        lams = chart_samples(spec, 1000, seed)
        pts = _points_from_lams_batch(spec, lams)
        implicit = curvatures_batch(spec, pts)
        closed = np.sort(np.array(
            [closed_form_curvatures(spec, row)[0] for row in lams]), axis=1)
        rel = np.abs(implicit - closed) / np.maximum(np.abs(closed), 1e-300)
        out.add(f"dual_oracle_curvatures[{fam}]", rel.max() < 1e-8,
                rel.max(), 1e-8)
    # per-family sign patterns
    patterns = {
        "Q0": lambda k: np.all(k[:, 0] > 0),
        "Q1": lambda k: np.all((k[:, 0] < 0) & (k[:, 1] > 0)
                               & (k[:, 1] <= k[:, 2])),
        "Q2": lambda k: np.all((k[:, 0] < 0) & (k[:, 1] > 0)
                               & (k[:, 1] <= k[:, 2])),
        "Q3": lambda k: np.all(k[:, 0] > 0),
    }
    for fam, spec in _standard_specs().items():
        lams = chart_samples(spec, 500, seed + 1)
        ks = curvatures_batch(spec, _points_from_lams_batch(spec, lams))
        frac = 1.0 if patterns[fam](ks) else 0.0
        out.add(f"sign_pattern[{fam}]", frac == 1.0, frac, 1.0)
    q1 = QuadricSpec("q1", (4.0, 1.0, 1.0))
    lams = chart_samples(q1, 500, seed + 2)
    ks = curvatures_batch(q1, _points_from_lams_batch(q1, lams))
    ok = np.all((ks[:, 0] < 0) & (ks[:, 1] > 0))
    out.add("sign_pattern[q1]", ok, 1.0 if ok else 0.0, 1.0)

    # conformality of the (s1, s2) chart on the ellipsoid
    q0 = QuadricSpec("q0", (4.0, 3.0, 1.0))
    structure = r3_mod.conformal_reparametrization(q0)
    rng = np.random.default_rng(seed)
    h = 1e-6
    worst_eg = worst_f = 0.0
    for _ in range(100):
        sa = rng.uniform(0.05, 0.95) * structure.s1
        sb = rng.uniform(0.05, 0.95) * structure.s2

        def pt(x, y):
            return structure.point(x, y, (1, 1, 1)).coords

        du = (pt(sa + h, sb) - pt(sa - h, sb)) / (2 * h)
        dv = (pt(sa, sb + h) - pt(sa, sb - h)) / (2 * h)
        e_val, g_val, f_val = du @ du, dv @ dv, du @ dv
        worst_eg = max(worst_eg, abs(e_val - g_val) / e_val)
        worst_f = max(worst_f, abs(f_val) / e_val)
    out.add("conformality_EG", worst_eg < 1e-5, worst_eg, 1e-5)
    out.add("conformality_F", worst_f < 1e-5, worst_f, 1e-5)

    s1a, s1b, s2a, s2b = r3_mod.dual_quadrature_check(q0)
    out.add("dual_quadrature_s1", abs(s1a - s1b) < 1e-8, abs(s1a - s1b), 1e-8)
    out.add("dual_quadrature_s2", abs(s2a - s2b) < 1e-8, abs(s2a - s2b), 1e-8)
    return out


# ---------------------------------------------------------------------------
# roundtrip suite


def _all_orthants(dim: int):
    out = [()]
    for _ in range(dim):
        out = [o + (s,) for o in out for s in (1, -1)]
    return out


def suite_roundtrip(seed: int = 42) -> SuiteResult:
    out = SuiteResult("roundtrip")
    for fam, spec in _standard_specs().items():
        lams = chart_samples(spec, 1000, seed)
        worst = 0.0
        for orthant in _all_orthants(4):
            pts = _points_from_lams_batch(spec, lams, orthant)
            back = chart_from_points_batch(spec, pts)
            worst = max(worst, float(np.max(np.abs(back - lams))))
        out.add(f"chart_roundtrip[{fam}]", worst < 1e-9, worst, 1e-9,
                "1000 pts x 16 orthants")
    # scalar Brent path agrees with the batch path
    spec = QuadricSpec("Q1", R4_AXES)
    lams = chart_samples(spec, 50, seed + 3)
    pts = _points_from_lams_batch(spec, lams)
    batch = chart_from_points_batch(spec, pts)
    worst = 0.0
    for row_pt, row_batch in zip(pts, batch):
        roots, _ = invert_chart(spec, row_pt)
        worst = max(worst, float(np.max(np.abs(np.array(roots) - row_batch))))
    out.add("scalar_vs_batch_inversion", worst < 1e-10, worst, 1e-10)

    # R^3 roundtrips
    for fam, axes in (("q0", (4.0, 3.0, 1.0)), ("q1", (4.0, 1.0, 1.0)),
                      ("q2", (4.0, 3.0, 1.0))):
        spec = QuadricSpec(fam, axes)
        lams = chart_samples(spec, 200, seed)
        worst = 0.0
        for orthant in _all_orthants(3):
            pts = _points_from_lams_batch(spec, lams, orthant)
            back = chart_from_points_batch(spec, pts)
            worst = max(worst, float(np.max(np.abs(back - lams))))
        out.add(f"chart_roundtrip[{fam}]", worst < 1e-9, worst, 1e-9)

    # principal-chart property: FD off-diagonal g and b
    for fam, spec in _standard_specs().items():
        lams = chart_samples(spec, 200, seed + 1, margin=0.05)
        stat = _principal_chart_offdiag(spec, lams)
        out.add(f"fd_offdiagonal[{fam}]", stat < 1e-6, stat, 1e-6)

    # conformal transfer roundtrip
    q0 = QuadricSpec("q0", (4.0, 3.0, 1.0))
    structure = r3_mod.conformal_reparametrization(q0)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in (structure.transfer_1, structure.transfer_2):
        us = t.lo + (t.hi - t.lo) * rng.uniform(0.001, 0.999, 100)
        worst = max(worst, max(abs(t.x_of(t.s_of(u)) - u) for u in us))
    out.add("transfer_roundtrip", worst < 1e-8, worst, 1e-8)
    return out


def _principal_chart_offdiag(spec: QuadricSpec, lams: np.ndarray) -> float:
    """Max FD off-diagonal of g and (normal-projected) b over the samples."""
    from .core import unit_normal

    h1 = 1e-5
    h2 = 1e-4  # mixed second differences: truncation/roundoff crossover
    worst = 0.0
    for row in lams:
        jac = np.empty((4, 3))
        for m in range(3):
            e = np.zeros(3)
            e[m] = h1
            p_plus = _point_from_lams(spec, row + e, (1, 1, 1, 1)).coords
            p_minus = _point_from_lams(spec, row - e, (1, 1, 1, 1)).coords
            jac[:, m] = (p_plus - p_minus) / (2 * h1)
        gram = jac.T @ jac
        p0 = _point_from_lams(spec, row, (1, 1, 1, 1)).coords
        nrm = unit_normal(spec, p0)
        for m in range(3):
            for n in range(m + 1, 3):
                em = np.zeros(3)
                en = np.zeros(3)
                em[m] = h2
                en[n] = h2
                mixed = (
                    _point_from_lams(spec, row + em + en, (1, 1, 1, 1)).coords
                    - _point_from_lams(spec, row + em - en, (1, 1, 1, 1)).coords
                    - _point_from_lams(spec, row - em + en, (1, 1, 1, 1)).coords
                    + _point_from_lams(spec, row - em - en, (1, 1, 1, 1)).coords
                ) / (4 * h2 * h2)
                worst = max(worst, abs(gram[m, n]), abs(float(mixed @ nrm)))
    return worst


# ---------------------------------------------------------------------------
# locus suite


def suite_locus(seed: int = 42) -> SuiteResult:
    out = SuiteResult("locus")
    expected_counts = {"Q0": 4, "Q1": 4, "Q2": 2, "Q3": 6}
    for fam, spec in _standard_specs().items():
        curves = locus_mod.partially_umbilic_locus(spec)
        out.add(f"locus_count[{fam}]", len(curves) == expected_counts[fam],
                len(curves), expected_counts[fam])
        if fam == "Q3":
            per_sheet = sum(1 for c in curves if c.component.startswith("x+"))
            out.add("locus_count_per_sheet[Q3]", per_sheet == 3, per_sheet, 3)
        worst_res = worst_coin = worst_aux = worst_hyp = 0.0
        best_sep = math.inf
        for curve in curves:
            for smp in locus_mod.sample_locus(curve, 50):
                worst_res = max(worst_res, abs(smp.point.residual))
                g12, g23 = smp.principal.gaps
                coin, sep = (g12, g23) if curve.kind == "P12" else (g23, g12)
                worst_coin = max(worst_coin, coin)
                best_sep = min(best_sep, sep)
                aux_p = smp.point.coords[list(curve.aux_axes)]
                worst_aux = max(worst_aux, abs(evaluate(curve.aux_spec, aux_p)))
                worst_hyp = max(worst_hyp,
                                abs(smp.point.coords[curve.hyperplane_axis]))
        out.add(f"locus_residual[{fam}]", worst_res < 1e-10, worst_res, 1e-10)
        out.add(f"locus_coincidence_gap[{fam}]", worst_coin < 1e-8,
                worst_coin, 1e-8)
        out.add(f"locus_separation_gap[{fam}]", best_sep > 1e-3, best_sep,
                1e-3, "must exceed")
        out.add(f"locus_aux_quadric[{fam}]", worst_aux < 1e-10, worst_aux, 1e-10)
        out.add(f"locus_hyperplane[{fam}]", worst_hyp < 1e-10, worst_hyp, 1e-10)

    # Q2 locus curves are principal lines of the auxiliary R^3 hyperboloid
    spec = QuadricSpec("Q2", R4_AXES)
    worst = 0.0
    for curve in locus_mod.partially_umbilic_locus(spec):
        for s_val in curve.sample_arclengths(50):
            i, t = curve.locate(float(s_val))
            jets = curve.hyperplane_jets(i, t)
            tangent = np.array([j.d1 for j in jets])
            tangent /= np.linalg.norm(tangent)
            pt3 = np.array([j.f for j in jets])
            s_op = shape_operator(curve.aux_spec, pt3)
            from .core import tangent_basis, unit_normal as un3

            basis = tangent_basis(un3(curve.aux_spec, pt3))
            tan2 = basis.T @ tangent
            resid = s_op @ tan2 - (tan2 @ s_op @ tan2) * tan2
            worst = max(worst, float(np.linalg.norm(resid)))
    out.add("q2_locus_principal_line", worst < 1e-6, worst, 1e-6)

    # R^3 umbilics
    q0 = QuadricSpec("q0", (4.0, 3.0, 1.0))
    ums = r3_mod.r3_umbilics(q0)
    gaps = [principal_data(q0, u.coords).gaps[0] for u in ums]
    out.add("q0_umbilic_count", len(ums) == 4, len(ums), 4)
    out.add("q0_umbilic_gap", max(gaps) < 1e-8, max(gaps), 1e-8)
    section = max(abs(u.coords[0] ** 2 / 4.0 + u.coords[2] ** 2 / 1.0 - 1.0)
                  for u in ums)
    plane = max(abs(u.coords[1]) for u in ums)
    out.add("q0_umbilic_section", max(section, plane) < 1e-10,
            max(section, plane), 1e-10, "y=0 and x^2/a^2+z^2/c^2=1")

    q2 = QuadricSpec("q2", (4.0, 3.0, 1.0))
    ums2 = r3_mod.r3_umbilics(q2)
    gaps2 = [principal_data(q2, u.coords).gaps[0] for u in ums2]
    out.add("q2_umbilic_count", len(ums2) == 4, len(ums2), 4)
    out.add("q2_umbilic_gap", max(gaps2) < 1e-8, max(gaps2), 1e-8)

    q1 = QuadricSpec("q1", (4.0, 1.0, 1.0))
    lams = chart_samples(q1, 10000, seed, span_cap=50.0 * q1.scale_sq)
    pts = _points_from_lams_batch(q1, lams)
    inside = np.all(np.abs(pts) <= 5.0 * q1.scale, axis=1)
    min_gap = float(gap_batch(q1, pts[inside]).min())
    out.add("q1_umbilic_empty", min_gap > 1e-3, min_gap, 1e-3,
            f"{int(inside.sum())} box samples, must exceed")

    # corner -> umbilic identification of the conformal map
    worst = 0.0
    um_set = {tuple(np.sign(u.coords[[0, 2]])): u.coords for u in ums}
    for bu in (0.0, math.pi):
        for bv in (0.0, math.pi):
            corner = r3_mod.ellipsoid_conformal_map(q0, bu, bv).coords
            target = um_set[tuple(np.sign(corner[[0, 2]]))]
            worst = max(worst, float(np.max(np.abs(corner - target))))
    out.add("conformal_corner_umbilics", worst < 1e-10, worst, 1e-10)

    # umbilic emptiness of the R^4 families
    for fam, spec in _standard_specs().items():
        lams = chart_samples(spec, 10000, seed, span_cap=50.0 * spec.scale_sq)
        pts = _points_from_lams_batch(spec, lams)
        inside = np.all(np.abs(pts) <= 5.0 * spec.scale, axis=1)
        gaps = gap_batch(spec, pts[inside])
        stat = float(np.max(gaps, axis=1).min())
        out.add(f"umbilic_empty[{fam}]", stat > 1e-3, stat, 1e-3,
                f"{int(inside.sum())} box samples, must exceed")
    return out


# ---------------------------------------------------------------------------
# census suite


def suite_census(seed: int = 42, n_seeds: int = 32) -> SuiteResult:
    out = SuiteResult("census")
    cases = [
        ("Q0", 1, "Closed", "F1 off-cylinder"),
        ("Q1", 1, "Escaped", "unbounded foliation"),
        ("Q2", 1, "Closed", "closed foliation"),
        ("Q2", 2, "Escaped", "open foliation"),
        ("Q3", 3, "Closed", "off-band foliation"),
    ]
    for fam, fol, expect, note in cases:
        spec = QuadricSpec(fam, R4_AXES)
        seeds = tracer_mod.census_seeds(spec, n_seeds, seed)
        report = tracer_mod.leaf_census(spec, fol, seeds)
        frac = report.fractions.get(expect, 0.0)
        out.add(f"census[{fam},F{fol}]={expect}", frac == 1.0, frac, 1.0, note)
        if expect == "Closed":
            gap = report.worst_return_gap if report.worst_return_gap is not None \
                else math.inf
            out.add(f"census_return_gap[{fam},F{fol}]", gap < 1e-6, gap, 1e-6)
    return out


# ---------------------------------------------------------------------------
# torsion suite


def suite_torsion(seed: int = 42) -> SuiteResult:
    out = SuiteResult("torsion")

    def zero_stats(curve):
        zeros = locus_mod.torsion_zeros(curve)
        crossings = locus_mod.crossing_arclengths(curve)
        total = curve.arclength
        worst = 0.0
        for z in zeros:
            dists = []
            for s_c, _ in crossings:
                d = abs(z["s"] - s_c)
                if curve.closed:
                    d = min(d, total - d)
                dists.append(d)
            worst = max(worst, min(dists) if dists else math.inf)
        return zeros, worst

    spec1 = QuadricSpec("Q1", R4_AXES)
    arcs = locus_mod.partially_umbilic_locus(spec1)
    counts = []
    worst_off = 0.0
    for arc in arcs:
        zeros, off = zero_stats(arc)
        counts.append(len(zeros))
        worst_off = max(worst_off, off)
    out.add("q1_torsion_zero_count", all(c == 1 for c in counts),
            max(counts), 1, "one zero per arc at the symmetry point")
    out.add("q1_torsion_zero_location", worst_off < 1e-6, worst_off, 1e-6)

    spec2 = QuadricSpec("Q2", R4_AXES)
    counts2 = []
    worst2 = 0.0
    for curve in locus_mod.partially_umbilic_locus(spec2):
        zeros, off = zero_stats(curve)
        counts2.append(len(zeros))
        worst2 = max(worst2, off)
    out.add("q2_torsion_zero_count", all(c == 4 for c in counts2),
            max(counts2), 4, "four zeros per closed curve")
    out.add("q2_torsion_zero_location", worst2 < 1e-6, worst2, 1e-6)

    spec3 = QuadricSpec("Q3", R4_AXES)
    worst3 = 0.0
    ok3 = True
    for curve in locus_mod.partially_umbilic_locus(spec3):
        zeros, off = zero_stats(curve)
        expected = 4 if curve.closed else 1
        ok3 = ok3 and len(zeros) == expected
        worst3 = max(worst3, off)
    out.add("q3_torsion_zeros_at_crossings", ok3 and worst3 < 1e-6,
            worst3, 1e-6, "zeros only at coordinate-plane crossings")
    return out


SUITES = {
    "oracle": suite_oracle,
    "roundtrip": suite_roundtrip,
    "locus": suite_locus,
    "census": suite_census,
    "torsion": suite_torsion,
}


def run_suite(name: str, seed: int = 42) -> list[SuiteResult]:
    if name == "all":
        return [fn(seed) for fn in SUITES.values()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from "
                       f"{sorted(SUITES)} or 'all'")
    return [SUITES[name](seed)]
