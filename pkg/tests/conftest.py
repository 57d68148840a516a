from __future__ import annotations

import pytest

from detic.regions import load_region_table
from detic.scheme import load_frozen_interiors, load_frozen_layouts


@pytest.fixture(scope="session")
def table():
    return load_region_table()


@pytest.fixture(scope="session")
def regions_by_id(table):
    return {spec.id: spec for spec in table}


@pytest.fixture(scope="session")
def frozen_layouts(table):
    return load_frozen_layouts(table)


@pytest.fixture(scope="session")
def frozen_interiors():
    return load_frozen_interiors()
