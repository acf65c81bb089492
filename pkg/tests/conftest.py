import itertools

import pytest
from hypothesis import settings

from thrclone.boolfn import BoolFn, all_functions
from thrclone.tz import build_tz

ACCEPTANCE_LINES = []

settings.register_profile("repo", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("repo")


def functions_upto(n):
    for k in range(1, n + 1):
        yield from all_functions(k)


def brute_eval(table_fn, n):
    """Truth table of a Python predicate, built point by point."""
    return BoolFn(n, [int(bool(table_fn(*a))) for a in itertools.product((0, 1), repeat=n)])


@pytest.fixture(scope="session")
def tz3():
    return build_tz(3)


@pytest.fixture(scope="session")
def tz4():
    return build_tz(4)


@pytest.fixture(scope="session")
def f3(tz3):
    return tz3.function


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
