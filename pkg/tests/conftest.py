import pytest

from qflag.rootsys import build_root_system

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def A1():
    return build_root_system("A", 1)


@pytest.fixture(scope="session")
def A2():
    return build_root_system("A", 2)


@pytest.fixture(scope="session")
def B2():
    return build_root_system("B", 2)


@pytest.fixture(scope="session")
def G2():
    return build_root_system("G", 2)


@pytest.fixture
def record():
    """record(k, ok, detail) stores an acceptance line and asserts ok."""
    def _record(k, ok, detail=""):
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[k] = line
        print(line)
        assert ok, line
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
