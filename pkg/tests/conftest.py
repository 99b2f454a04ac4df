import numpy as np
import pytest

from qpc import QuadricSpec

AXES4 = (4.0, 3.0, 2.0, 1.0)


@pytest.fixture(scope="session")
def q0_r4():
    return QuadricSpec("Q0", AXES4)


@pytest.fixture(scope="session")
def q1_r4():
    return QuadricSpec("Q1", AXES4)


@pytest.fixture(scope="session")
def q2_r4():
    return QuadricSpec("Q2", AXES4)


@pytest.fixture(scope="session")
def q3_r4():
    return QuadricSpec("Q3", AXES4)


@pytest.fixture(scope="session")
def all_r4(q0_r4, q1_r4, q2_r4, q3_r4):
    return {"Q0": q0_r4, "Q1": q1_r4, "Q2": q2_r4, "Q3": q3_r4}


@pytest.fixture(scope="session")
def ell_r3():
    return QuadricSpec("q0", (4.0, 3.0, 1.0))


@pytest.fixture(scope="session")
def hyp1_r3():
    return QuadricSpec("q1", (4.0, 1.0, 1.0))


@pytest.fixture(scope="session")
def hyp2_r3():
    return QuadricSpec("q2", (4.0, 3.0, 1.0))


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
