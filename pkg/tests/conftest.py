import pytest

from isacsched.network import build_network


@pytest.fixture(scope="session")
def tracking_net12():
    return build_network(n_beams=12, mode="sinr", requirement=10.0)


@pytest.fixture(scope="session")
def search_net12():
    return build_network(n_beams=12, mode="detection", requirement=0.9)


_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def acceptance_log():
    """Mapping criterion number -> (passed, detail), printed after the run."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
