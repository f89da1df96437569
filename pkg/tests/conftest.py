import math

import hypothesis
import numpy as np
import pytest

hypothesis.settings.register_profile("ci", deadline=None, print_blob=True)
hypothesis.settings.load_profile("ci")

np.seterr(all="raise", under="ignore")


@pytest.fixture
def rng():
    return np.random.default_rng(20001)


@pytest.fixture
def balanced():
    from realtele.beamsplitter import BALANCED_PARAMS

    return BALANCED_PARAMS


@pytest.fixture
def identity():
    from realtele.beamsplitter import IDENTITY_PARAMS

    return IDENTITY_PARAMS


SQRT_HALF = 1 / math.sqrt(2)


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
