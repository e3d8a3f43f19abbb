import pytest

from problab import exact

SEED = 20240416


@pytest.fixture(scope="session")
def series600():
    """Exact one-winner series to n=600; shared by the acceptance suite.

    Costs ~half a minute, so it is built once per session.
    """
    return exact.p_recurrence(600)


@pytest.fixture(scope="session")
def series200():
    return exact.p_recurrence(200)
