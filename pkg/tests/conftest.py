import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rasched.generate import minimal_star_formula
from rasched.reductions import counterexample_matching


@pytest.fixture(scope="session")
def star3():
    """The fixed three-variable star formula."""
    return minimal_star_formula()


@pytest.fixture(scope="session")
def no_cover_dm():
    """The fixed five-triplet matching instance without a perfect cover."""
    return counterexample_matching()
