from __future__ import annotations

import pytest

from quivertilt.algebras import path_algebra
from quivertilt.linalg import Field
from quivertilt.quivers import Quiver


@pytest.fixture(scope="session")
def f2():
    return Field(2)


@pytest.fixture(scope="session")
def a2(f2):
    """Path algebra of 1 --a--> 2 over F_2; basis (e_1, e_2, a)."""
    return path_algebra(f2, Quiver((1, 2), ((1, 2, "a"),)))


@pytest.fixture(scope="session")
def a3(f2):
    """Path algebra of 1 --a--> 2 --b--> 3 over F_2."""
    return path_algebra(f2, Quiver((1, 2, 3), ((1, 2, "a"), (2, 3, "b"))))
