import pathlib

import pytest

from ilpath.instance import IlpInstance, parse_instance

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
INSTANCE_DIR = REPO_ROOT / "instances"


@pytest.fixture
def example_instance() -> IlpInstance:
    """The two-constraint system with solution (5, 3, 1)."""
    return parse_instance("-2 x1 + 3 x2 + 1 x3 = 0 ; 1 x1 + -2 x2 + 1 x3 = 0")


@pytest.fixture
def parity_instance() -> IlpInstance:
    return parse_instance("2 x = 1")


@pytest.fixture
def instance_dir() -> pathlib.Path:
    return INSTANCE_DIR
