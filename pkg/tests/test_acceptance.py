"""Acceptance criteria, one test per criterion, tolerances pinned.

Each test prints one PASS/FAIL line per underlying check (run with -s or
look at the captured output).  The heavy suites are computed once per
session and shared.
"""

import pytest

from qpc.validate import (
    suite_census,
    suite_locus,
    suite_oracle,
    suite_roundtrip,
    suite_torsion,
)

SEED = 42


@pytest.fixture(scope="module")
def oracle():
    return suite_oracle(SEED)


@pytest.fixture(scope="module")
def roundtrip():
    return suite_roundtrip(SEED)


@pytest.fixture(scope="module")
def locus():
    return suite_locus(SEED)


@pytest.fixture(scope="module")
def census():
    return suite_census(SEED)


@pytest.fixture(scope="module")
def torsion():
    return suite_torsion(SEED)


def _assert_checks(suite, prefixes):
    picked = [c for c in suite.checks
              if any(c.name.startswith(p) for p in prefixes)]
    assert picked, f"no checks matched {prefixes}"
    failed = []
    for c in picked:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status} {suite.name}/{c.name}: stat={c.stat:.3e} "
              f"threshold={c.threshold:.3e} {c.note}")
        if not c.passed:
            failed.append(c.name)
    assert not failed, f"failed checks: {failed}"


def test_dual_oracle_curvature_agreement(oracle):
    """Closed-form vs implicit shape-operator curvatures, 1e-8 relative."""
    _assert_checks(oracle, ["dual_oracle_curvatures["])


def test_chart_roundtrip(roundtrip):
    """chart_from_point o point_from_chart identity to 1e-9, 16 orthants."""
    _assert_checks(roundtrip, ["chart_roundtrip[Q"])


def test_principal_chart_property(roundtrip):
    """FD off-diagonal g and b entries < 1e-6 at interior points."""
    _assert_checks(roundtrip, ["fd_offdiagonal["])


def test_sign_patterns(oracle):
    """Per-family curvature sign statements hold at all sampled points."""
    _assert_checks(oracle, ["sign_pattern["])


def test_locus_counts_and_membership(locus):
    """4/4/2/3-per-sheet curves; gap, residual and membership bounds."""
    _assert_checks(locus, ["locus_count", "locus_residual",
                           "locus_coincidence_gap", "locus_separation_gap",
                           "locus_aux_quadric", "locus_hyperplane"])


def test_q2_locus_principal_line(locus):
    """Q2 locus tangents are eigenvectors of the auxiliary hyperboloid."""
    _assert_checks(locus, ["q2_locus_principal_line"])


def test_torsion_zeros(torsion):
    """Q1: one zero; Q2: four zeros; Q3: zeros only at plane crossings."""
    _assert_checks(torsion, ["q1_torsion", "q2_torsion", "q3_torsion"])


def test_leaf_census(census):
    """32 seeds per case (seed=42): verdicts and return gaps."""
    _assert_checks(census, ["census"])


def test_r3_suite(oracle, locus):
    """Umbilics, conformal corners, conformality, dual quadrature."""
    _assert_checks(locus, ["q0_umbilic", "q1_umbilic_empty", "q2_umbilic",
                           "conformal_corner_umbilics"])
    _assert_checks(oracle, ["conformality_", "dual_quadrature_"])


def test_umbilic_emptiness_r4(locus):
    """min over 1e4 box samples of max(gap1, gap2) > 1e-3, all families."""
    _assert_checks(locus, ["umbilic_empty["])
