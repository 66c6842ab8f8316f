import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

DATA = __import__("pathlib").Path(__file__).resolve().parent.parent / "data"


def complex_gaussian(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_unitary(rng, n):
    q, r = np.linalg.qr(complex_gaussian(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def data_dir():
    return DATA


def square_matrices(max_dim=5, magnitude=10.0):
    """Hypothesis strategy for small dense complex square matrices."""
    entries = st.complex_numbers(max_magnitude=magnitude, allow_nan=False, allow_infinity=False)
    return st.integers(1, max_dim).flatmap(
        lambda n: hnp.arrays(np.complex128, (n, n), elements=entries))
