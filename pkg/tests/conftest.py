import pytest

from ucfamily.family import from_label_sets, from_masks

ACCEPTANCE_RESULTS = []


def record_criterion(number, passed, summary):
    ACCEPTANCE_RESULTS.append((number, passed, summary))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, summary in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {summary}")


def power_set_family(n):
    """All nonempty subsets of {1..n}."""
    return from_masks(range(1, 2**n))


@pytest.fixture
def power3():
    return power_set_family(3)


@pytest.fixture
def power4():
    return power_set_family(4)


def fam(*sets):
    return from_label_sets(sets)
