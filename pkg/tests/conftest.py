import warnings

import numpy as np
import pytest

from dunkl_harmonics.core import Grid, TransformPlan
from dunkl_harmonics.geometry import ReflectionSetup
from dunkl_harmonics.harness import plans


def gaussian(a=1.0, shift=0.0):
    return lambda x: np.exp(-a * np.sum((x - shift) ** 2, axis=-1))


@pytest.fixture(scope="session")
def plan_k1():
    return plans.get_plan(ReflectionSetup(1, 1.0), 1025, 20.0)


@pytest.fixture(scope="session")
def plan_k0():
    return plans.get_plan(ReflectionSetup(1, 0.0), 1025, 20.0)


@pytest.fixture(scope="session")
def small_plan():
    """Coarse d=1, k=1 plan for properties that need many transforms."""
    return TransformPlan(Grid(ReflectionSetup(1, 1.0), 257, 10.0))


@pytest.fixture(scope="session")
def plan_2d():
    return plans.get_plan(ReflectionSetup(2, (1.0, 0.5)), 129, 10.0)


@pytest.fixture(autouse=True)
def _quiet_resolution_warnings():
    # coarse grids trip the resolution diagnostic on purpose in a few tests
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=".*under-resolves.*", category=RuntimeWarning)
        yield


# acceptance criteria: sub-check outcomes, printed as one line per criterion
ACCEPTANCE = {}


def record(criterion: int, title: str, label: str, ok: bool, value=None):
    entry = ACCEPTANCE.setdefault(criterion, {"title": title, "checks": []})
    entry["checks"].append((label, bool(ok), value))


def acceptance_lines():
    lines = []
    for n in sorted(ACCEPTANCE):
        entry = ACCEPTANCE[n]
        failed = [label for label, ok, _ in entry["checks"] if not ok]
        total = len(entry["checks"])
        verdict = "FAIL" if failed else "PASS"
        line = f"CRITERION {n:>2} {verdict}  {entry['title']} ({total - len(failed)}/{total} sub-checks)"
        if failed:
            line += " failed: " + "; ".join(failed)
        lines.append(line)
    return lines


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
