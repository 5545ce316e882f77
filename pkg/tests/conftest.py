import pytest

from fracverify.core import EvalConfig


@pytest.fixture(scope="session")
def cfg():
    return EvalConfig()
