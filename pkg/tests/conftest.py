"""Shared fixtures: the example curves and the built-in extremal profiles.

Profiles integrate an ODE and are reused by many tests, so they are built
once per session.
"""

import pytest

from holocurve import example1_curve, example2_curve
from holocurve.nehari import NehariFunction, extremal_profile


@pytest.fixture(scope="session")
def ex1():
    return example1_curve(1700.0)


@pytest.fixture(scope="session")
def ex2():
    return example2_curve(0.05)


@pytest.fixture(scope="session")
def profile_constant():
    return extremal_profile(NehariFunction.constant())


@pytest.fixture(scope="session")
def profile_inverse_square():
    return extremal_profile(NehariFunction.inverse_square())


@pytest.fixture(scope="session")
def profile_half_strip():
    return extremal_profile(NehariFunction.half_strip())
