import math

import pytest
from hypothesis import given, strategies as st

from ziglin3.masses import MassTriple

positive = st.floats(min_value=1e-3, max_value=1e3)


def test_equal_masses_theta_zero():
    m = MassTriple(1, 1, 1)
    assert m.theta == 0.0
    assert m.lambda1 == pytest.approx(1.5 + 0.5 * math.sqrt(13))
    assert m.lambda1 == pytest.approx(m.lambda2)
    assert m.lambda1 == pytest.approx(3.302775637731995, abs=1e-12)


def test_small_third_mass_limit():
    # (1, 1, eps): theta -> 144 (1 - 3/4) = 36
    m = MassTriple(1, 1, 1e-9)
    assert m.theta == pytest.approx(36.0, abs=1e-6)
    assert m.lambda1 == pytest.approx(1.5 + 0.5 * math.sqrt(19), abs=1e-7)
    assert m.lambda2 == pytest.approx(1.5 + 0.5 * math.sqrt(7), abs=1e-7)


def test_rejects_nonpositive_masses():
    with pytest.raises(ValueError):
        MassTriple(1, 0, 1)
    with pytest.raises(ValueError):
        MassTriple(1, -2, 1)


@given(positive, positive, positive)
def test_theta_range(m1, m2, m3):
    m = MassTriple(m1, m2, m3)
    assert 0.0 <= m.theta < 144.0


@given(positive, positive, positive)
def test_lambda_ordering(m1, m2, m3):
    m = MassTriple(m1, m2, m3)
    top = 1.5 + 0.5 * math.sqrt(13)
    assert m.lambda2 > 2.0
    assert m.lambda2 <= top + 1e-12
    assert m.lambda1 >= top - 1e-12
    assert m.lambda1 < 4.0
    if m.theta > 1e-9:
        assert m.lambda1 > m.lambda2


def test_json_round_trip():
    m = MassTriple(0.3, 2.2, 1.1)
    again = MassTriple.from_json(m.to_json())
    assert again == m
