import numpy as np
import pytest

from wittsplit.corpus import BUILTIN_ALGEBRAS, builtin_algebra


@pytest.fixture(scope="session")
def algebras():
    """All builtin corpus algebras, constructed once."""
    return {name: builtin_algebra(name) for name in BUILTIN_ALGEBRAS}


@pytest.fixture(scope="session")
def reduced_names():
    return [name for name in BUILTIN_ALGEBRAS
            if builtin_algebra(name).is_reduced()]


@pytest.fixture(scope="session")
def nonreduced_names():
    return [name for name in BUILTIN_ALGEBRAS
            if not builtin_algebra(name).is_reduced()]


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
