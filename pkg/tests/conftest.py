import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from tracereason import build_hierarchy, load_fixture, load_spec, parse_model  # noqa: E402
from tracereason.engine.kernels import jit_enabled  # noqa: E402

BACKENDS = ["numpy", "numba"] if jit_enabled() else ["numpy"]


@pytest.fixture(scope="session")
def ecas_core():
    return load_spec(load_fixture("ecas.tarski"), "ecas.tarski")


@pytest.fixture(scope="session")
def ecas_h(ecas_core):
    return build_hierarchy(ecas_core)


@pytest.fixture(scope="session")
def ecas_model():
    return parse_model(load_fixture("ecas.trace"), "ecas.trace")


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and (report.when == "call" or report.failed):
        name = report.nodeid.split("::")[-1]
        _ACCEPTANCE[name] = "PASS" if report.passed and _ACCEPTANCE.get(name) != "FAIL" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
