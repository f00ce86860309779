import os

import pytest

from cedagof import _backend
from cedagof.ingest import load_housefly, summarize

BACKENDS = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])


@pytest.fixture(scope="session")
def housefly():
    return load_housefly()


@pytest.fixture(scope="session")
def housefly_stats(housefly):
    return summarize(housefly)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_report_header(config):
    forced = " (forced by CEDAGOF_PURE_PYTHON)" if os.environ.get("CEDAGOF_PURE_PYTHON") else ""
    return f"cedagof kernel backend: {_backend.BACKEND}{forced}"


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
