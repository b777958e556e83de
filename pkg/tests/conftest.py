import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from qcrit.gf import GF

settings.register_profile(
    "qcrit", max_examples=40, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qcrit")

SMALL_ORDERS = [2, 3, 4, 5, 7, 8, 9]


@st.composite
def matrices(draw, q, max_rows=4, max_cols=5, rows=None, cols=None):
    nr = draw(st.integers(0, max_rows)) if rows is None else rows
    nc = draw(st.integers(1, max_cols)) if cols is None else cols
    return [[draw(st.integers(0, q - 1)) for _ in range(nc)] for _ in range(nr)]


@st.composite
def field_and_matrix(draw, max_rows=4, max_cols=5):
    q = draw(st.sampled_from(SMALL_ORDERS))
    return GF(q), draw(matrices(q, max_rows, max_cols))


@pytest.fixture
def rng():
    return random.Random(20240601)
