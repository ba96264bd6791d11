from __future__ import annotations

import pytest

from harmonia.catalog import make_space
from harmonia.suites import run_suite

SPACES = [
    ("euclidean", 3, None), ("euclidean", 5, None), ("real_hyperbolic", 6, None),
    ("complex_hyperbolic", 6, None), ("rank1_model", 6, "-9:1,-2:4"),
]


def test_all_suites_on_hyperbolic_plane():
    rep = run_suite("all", make_space("real_hyperbolic", 2), jobs=4)
    assert rep.passed, rep.table()
    suites = {c.id.split(".")[0] for c in rep.checks}
    assert suites == {"radial", "jacobi", "green", "disk", "poisson"}


@pytest.mark.parametrize("kind,n,eigen", SPACES)
@pytest.mark.parametrize("suite", ["radial", "jacobi", "green"])
def test_suite_passes(suite, kind, n, eigen):
    rep = run_suite(suite, make_space(kind, n, eigen))
    assert rep.passed, rep.table()
