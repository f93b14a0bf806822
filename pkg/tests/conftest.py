from __future__ import annotations

import sys

import pytest

from geode import recurrence as rec_mod
from geode.cli import BUNDLED_DIAGONAL, BUNDLED_SYSTEM, bundled_path
from geode.core import geode_table

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


@pytest.fixture(scope="session")
def system3():
    return rec_mod.load(bundled_path(BUNDLED_SYSTEM))


@pytest.fixture(scope="session")
def diagonal3():
    return rec_mod.load(bundled_path(BUNDLED_DIAGONAL))


@pytest.fixture(scope="session")
def table2_30():
    return geode_table(30, 2)


@pytest.fixture(scope="session")
def table3_21():
    # covers the K = 8 cube {0..7}^3
    return geode_table(21, 3)


# --- acceptance reporting: one PASS/FAIL line per criterion ------------------------

_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call" and not (rep.when == "setup" and rep.failed):
        return
    n, title = marker.args
    detail = "; ".join(v for k, v in item.user_properties if k == "detail")
    if rep.failed and not detail:
        detail = str(call.excinfo.value).splitlines()[0] if call.excinfo else ""
    _criteria[n] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, title, detail = _criteria[n]
        line = f"criterion {n:>2} {status}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
