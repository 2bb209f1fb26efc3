import numpy as np
import pytest

from choimetric import (
    canonical_trace,
    cyclic_group,
    diagonal_algebra,
    matrix_algebra,
    standard_matrix_trace,
    twisted_group_algebra,
    word_length,
)


@pytest.fixture(scope="session")
def m2():
    return matrix_algebra(2)


@pytest.fixture(scope="session")
def m3():
    return matrix_algebra(3)


@pytest.fixture(scope="session")
def d2():
    return diagonal_algebra(2)


@pytest.fixture(scope="session")
def tr2(m2):
    return standard_matrix_trace(m2)


@pytest.fixture(scope="session")
def tr3(m3):
    return standard_matrix_trace(m3)


@pytest.fixture(scope="session")
def z2_algebra():
    return twisted_group_algebra(cyclic_group(2))


@pytest.fixture(scope="session")
def z2_trace(z2_algebra):
    return canonical_trace(z2_algebra)


@pytest.fixture(scope="session")
def z2_length():
    return word_length(cyclic_group(2))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
