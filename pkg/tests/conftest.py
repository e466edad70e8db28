"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

from collections import OrderedDict

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CRITERIA = OrderedDict(
    [
        (1, "beta_n table, closed form vs quadrature vs published values"),
        (2, "one-variable law 2 sqrt(l(l+1)/3) and the 1/sqrt(3) limit"),
        (3, "support {-l, l} has only real roots"),
        (4, "companion-matrix complex root count equals 2l"),
        (5, "two-variable cross supports, 4 pi / 5"),
        (6, "Gaussian-determinant mixed volume vs support-function oracle"),
        (7, "containment, volume and Alexandrov-Fenchel inequalities"),
        (8, "convergence for the unit disk and unit square at m = 100"),
        (9, "ball-constant audit: slicing identity and asymptotic verdict"),
    ]
)

_item_criterion: dict[str, int] = {}
_results: dict[int, list[tuple[str, str]]] = {k: [] for k in CRITERIA}


def pytest_collection_modifyitems(config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _item_criterion[item.nodeid] = int(mark.args[0])


def pytest_runtest_logreport(report):
    k = _item_criterion.get(report.nodeid)
    if k is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[k].append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not any(_results.values()):
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k, title in CRITERIA.items():
        res = _results[k]
        if not res:
            tr.write_line(f"criterion {k}: NOT RUN   {title}")
            continue
        failed = [nid.split("::")[-1] for nid, out in res if out == "failed"]
        status = "PASS" if not failed else "FAIL"
        detail = f"{len(res) - len(failed)}/{len(res)} checks"
        if failed:
            detail += "; failing: " + ", ".join(failed)
        tr.write_line(f"criterion {k}: {status}   {title} ({detail})")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
