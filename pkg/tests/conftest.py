import pytest
from hypothesis import HealthCheck, settings

from formhyp.catalog import builtin_catalog, get_group
from formhyp.lattice import all_subgroups

settings.register_profile(
    "formhyp", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("formhyp")

SMALL_LABELS = [G.label for G in builtin_catalog().tier(24)]


def subgroups_of_order(G, n):
    return [S for S in all_subgroups(G) if S.order == n]


def one_subgroup(G, n, pred=lambda S: True):
    found = [S for S in subgroups_of_order(G, n) if pred(S)]
    assert found, f"no subgroup of order {n} in {G.label}"
    return found[0]


@pytest.fixture
def group():
    return get_group


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
