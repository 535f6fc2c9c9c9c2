import pathlib

import pytest

from dpe.ingest import load_store
from dpe.licenses import LicenseRegistry, Policy

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

#: (name, passed) pairs recorded by the acceptance tests; printed at the end
#: of the run so each release gate gets one visible pass/fail line.
GATE_RESULTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not GATE_RESULTS:
        return
    terminalreporter.section("release gates")
    for name, passed in GATE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}")


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def registry():
    return LicenseRegistry.default()


@pytest.fixture(scope="session")
def default_policy():
    return Policy()


@pytest.fixture(scope="session")
def table2_store(registry):
    return load_store([FIXTURES / "table2"], registry=registry)


@pytest.fixture(scope="session")
def table3_store(registry):
    return load_store([FIXTURES / "table3"], registry=registry)


@pytest.fixture(scope="session")
def fig3_store(registry):
    return load_store([FIXTURES / "fig3"], registry=registry)


@pytest.fixture(scope="session")
def small_store(registry):
    return load_store([FIXTURES / "small"], registry=registry)
