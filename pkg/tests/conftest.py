import pytest

from adelicert import config
from adelicert.numberfield import NumberField


@pytest.fixture(scope="session")
def K31():
    """x^3 + x + 1, discriminant -31."""
    return NumberField((1, 1, 0), label="x^3+x+1")


def _cfg(name):
    return config.parse(config.bundled(name))


@pytest.fixture(scope="session")
def cfg13():
    return _cfg("example_1_3.json")


@pytest.fixture(scope="session")
def cfg15():
    return _cfg("example_1_5.json")


@pytest.fixture(scope="session")
def cfg16():
    return _cfg("example_1_6.json")


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion; printed in the terminal summary."""
    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        _ACCEPTANCE[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
