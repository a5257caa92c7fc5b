"""
Shared test fixtures: catalog profiles are solved once per session.
"""

from functools import lru_cache

import pytest

from ansatz_solvers import MetricProfile, solve
from bundle_config import builtin_catalog
from numerics import NumericsConfig
from table_rows import EXPECTED_ROWS, ExpectedRow


@lru_cache(maxsize=None)
def solved(row: ExpectedRow, steps: int = 1500) -> MetricProfile:
    return solve(row.family, builtin_catalog(row.bundle_name), NumericsConfig(steps=steps), eps=row.eps, m=row.m)


def row_id(row: ExpectedRow) -> str:
    parts = [row.bundle_name, row.family.value]
    if row.m is not None:
        parts.append(f"m{row.m}")
    if row.eps is not None:
        parts.append(str(row.eps).replace(",", "_"))
    return "-".join(parts)


@pytest.fixture
def cfg() -> NumericsConfig:
    return NumericsConfig()


@pytest.fixture(params=EXPECTED_ROWS, ids=row_id)
def table_row(request) -> ExpectedRow:
    return request.param
