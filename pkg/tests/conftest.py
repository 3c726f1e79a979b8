# NB: This file also exists to ensure the 'models' package (in this directory)
# is added to the python path by pytest for all tests.

import pytest

import hypothesis

from mvkit.milnor import KLadder

from models import get_model


# Each example builds and reduces several groups: keep the suites quick
hypothesis.settings.register_profile("mvkit", max_examples=50, deadline=None)
hypothesis.settings.load_profile("mvkit")


@pytest.fixture(scope="module")
def ladder1() -> KLadder:
    """Both rows 0 -> 0 -> Z/2 -> Z/4 -> Z/2 -> 0 with eps_i = x2 on Z/4."""
    return get_model("ladder1.mv").k_ladders["L"]
