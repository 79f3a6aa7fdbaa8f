import pytest

from deceptlens.lexfeat import default_lexicons


@pytest.fixture(scope="session")
def lexicons():
    return default_lexicons()
