import pytest

from rgkernel.state_model import StateSpace


@pytest.fixture(scope="session")
def bit():
    """One variable over {0,1}: state 0 has x=0, state 1 has x=1."""
    return StateSpace.of(x=[0, 1])


@pytest.fixture(scope="session")
def trit():
    return StateSpace.of(x=[0, 1, 2])


@pytest.fixture(scope="session")
def two_bools():
    return StateSpace.of(x=[False, True], y=[False, True])
