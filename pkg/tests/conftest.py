import numpy as np
import pytest

from nbldpc.code import build_matrix, decompose
from nbldpc.gf import GaloisField

from util_codes import make_regular_code


@pytest.fixture(scope="session")
def gf4():
    return GaloisField(2)


@pytest.fixture(scope="session")
def gf8():
    return GaloisField(3)


@pytest.fixture(scope="session")
def gf16():
    return GaloisField(4)


@pytest.fixture(scope="session")
def tiny_code(gf4):
    """n=5, m=2 code over GF(4); first row is the degree-4 worked example."""
    mat = build_matrix(
        5,
        2,
        [
            [(0, 1), (1, 1), (2, 2), (3, 3)],
            [(1, 2), (2, 3), (3, 1), (4, 1)],
        ],
        gf4,
    )
    return decompose(mat)


@pytest.fixture(scope="session")
def two_check_code(gf4):
    """Two degree-3 checks over GF(4): small enough for brute force over binaries."""
    mat = build_matrix(
        4,
        2,
        [
            [(0, 1), (1, 2), (2, 1)],
            [(1, 1), (2, 3), (3, 2)],
        ],
        gf4,
    )
    return decompose(mat)


@pytest.fixture(scope="session")
def code96():
    """(3,6)-regular n=96 code over GF(4), the mid-scale workhorse."""
    return decompose(make_regular_code(96, 48, 6, 2, seed=11))


@pytest.fixture(autouse=True)
def _stable_numpy_errors():
    with np.errstate(all="raise", under="ignore"):
        yield
