"""
Shared fixtures for the test suite.
"""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from src.algebra import ground_algebra, path_algebra, tensor_algebra, truncated_polynomial
from src.exactlin import Field, Matrix
from src.monrep import Representation
from src.quiver import Quiver

settings.register_profile("moncat", derandomize=True, max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("moncat")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: enumeration-heavy acceptance checks")


@pytest.fixture(scope="session")
def f2():
    return Field.prime(2)


@pytest.fixture(scope="session")
def f3():
    return Field.prime(3)


@pytest.fixture(scope="session")
def qq():
    return Field.rational()


@pytest.fixture(scope="session")
def a2():
    """A_2: 2 -> 1"""
    return Quiver.linear(2)


@pytest.fixture(scope="session")
def a3():
    return Quiver.linear(3)


@pytest.fixture(scope="session")
def k_f2(f2):
    return ground_algebra(f2)


@pytest.fixture(scope="session")
def dual2(f2):
    """k[x]/x^2 over F_2"""
    return truncated_polynomial(f2, 2)


@pytest.fixture(scope="session")
def dual3(f2):
    return truncated_polynomial(f2, 3)


@pytest.fixture(scope="session")
def kq_a2(a2, f2):
    return path_algebra(a2, f2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def rep_over(q, a, branches, maps, label=""):
    """A representation from nested-list arrow matrices."""
    field = a.field
    mats = []
    for (s, e), rows in zip(q.arrows, maps):
        shape = (branches[e - 1].dim, branches[s - 1].dim)
        mats.append(Matrix.from_rows(field, rows, shape=shape))
    return Representation(q, a, tuple(branches), tuple(mats), label=label).validate()


QUIVERS = {"A2": Quiver.linear(2), "A3": Quiver.linear(3), "kronecker": Quiver.kronecker()}


def base_algebra(kind, field):
    """Coefficient algebras: k, kA_2, k[x,y]/(x^2, y^2) and k[x]/x^3."""
    if kind == "ground":
        return ground_algebra(field)
    if kind == "hereditary":
        return path_algebra(QUIVERS["A2"], field)
    if kind == "self_injective":
        return tensor_algebra(truncated_polynomial(field, 2), truncated_polynomial(field, 2))
    return truncated_polynomial(field, 3)


def algebra_grid(bases, slow=()):
    """(quiver, base) pairs for every quiver in QUIVERS; pairs in ``slow`` get the slow marker."""
    return [pytest.param(q, b, id=f"{q}-{b}", marks=[pytest.mark.slow] if (q, b) in slow else [])
            for q in QUIVERS for b in bases]
