import pytest

from fbdiag.hvac import ROOM_CONTROLLER, TWO_ROOM, scenario_path
from fbdiag.model import load_system
from fbdiag.scenario import load_scenario

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = {}


def record_acceptance(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture(scope="session")
def room_desc():
    return load_system(ROOM_CONTROLLER)


@pytest.fixture(scope="session")
def two_room_desc():
    return load_system(TWO_ROOM)


@pytest.fixture
def scenario():
    return lambda name: load_scenario(scenario_path(name))
