from __future__ import annotations

from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import HealthCheck, settings

from casas_alvero.numeric import ComplexFloat, GaussianRational

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussian = st.builds(GaussianRational, rationals, rationals)
nonzero_gaussian = gaussian.filter(lambda x: not x.is_zero())
unit_floats = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
complex_floats = st.builds(ComplexFloat, unit_floats, unit_floats)


def Q(p, q=1) -> GaussianRational:
    return GaussianRational(Fraction(p, q))


@pytest.fixture
def q():
    return Q
