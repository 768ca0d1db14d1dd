"""Shared fixtures: the small fields, spaces, and groups most tests reuse.

Everything here is deterministic and cheap enough to build once per session;
the census grid is the one genuinely expensive object, so it is computed a
single time and shared between the unit tests and the acceptance suite.
"""

import pytest

from fqcong import field_for_order, full_census, make_field, orthogonal_group, space_for


@pytest.fixture(scope="session")
def f3():
    return field_for_order(3)


@pytest.fixture(scope="session")
def f5():
    return field_for_order(5)


@pytest.fixture(scope="session")
def f7():
    return field_for_order(7)


@pytest.fixture(scope="session")
def f9():
    return make_field(3, 2, (1, 0, 1))


@pytest.fixture(scope="session")
def s32(f3):
    return space_for(f3, 2)


@pytest.fixture(scope="session")
def s52(f5):
    return space_for(f5, 2)


@pytest.fixture(scope="session")
def s33(f3):
    return space_for(f3, 3)


@pytest.fixture(scope="session")
def g32(f3):
    return orthogonal_group(f3, 2)


@pytest.fixture(scope="session")
def g52(f5):
    return orthogonal_group(f5, 2)


@pytest.fixture(scope="session")
def g33(f3):
    return orthogonal_group(f3, 3)


CENSUS_GRID = ((3, 2, 2), (3, 2, 3), (5, 2, 2), (3, 3, 3))


@pytest.fixture(scope="session")
def census_grid():
    return {
        (q, d, k): full_census(field_for_order(q), d, k)
        for (q, d, k) in CENSUS_GRID
    }
