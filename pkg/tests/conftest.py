import pytest

from pnpl.io import load_model

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def running():
    return load_model("assembly_line")


@pytest.fixture(scope="session")
def running_xor():
    return load_model("assembly_line_xor")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}")
