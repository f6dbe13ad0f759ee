import os

import pytest
from hypothesis import HealthCheck, settings

from gridtrace import Element, ElementType, SwitchStatus, bundled, load_config, load_elements

settings.register_profile(
    "default",
    max_examples=1000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("quick", max_examples=100, deadline=None)
settings.load_profile(os.environ.get("GRIDTRACE_HYPOTHESIS_PROFILE", "default"))

E13 = Element("e13", ElementType.SWITCH, ((301.5, 190.0),), SwitchStatus.OPEN)


@pytest.fixture(scope="session")
def dso():
    return load_elements(bundled("dso_network.csv"))


@pytest.fixture(scope="session")
def dso_e13(dso):
    return dso.with_elements([E13])


@pytest.fixture(scope="session")
def real():
    return load_elements(bundled("real_network.csv"))


@pytest.fixture(scope="session")
def academic_cfg():
    return load_config(bundled("academic.cfg"))


@pytest.fixture(scope="session")
def academic_e13_cfg():
    return load_config(bundled("academic_e13.cfg"))


_LABEL = {True: "PASS", False: "FAIL", None: "SKIP"}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {_LABEL[ok]}  {detail}")
