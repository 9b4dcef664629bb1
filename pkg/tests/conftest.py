import pytest
from hypothesis import HealthCheck, settings

from ecta.core import Alphabet

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def ab():
    """The two-letter alphabet used throughout the suite."""
    return Alphabet(("a", "b"))
