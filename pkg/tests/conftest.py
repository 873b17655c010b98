from pathlib import Path

import pytest

from m2pddl.fixtures import build_aircraft_fixture, load_manifest
from m2pddl.pddl import parse_domain, parse_problem

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN_DOMAIN = FIXTURES / "pddl" / "aircraft.domain.pddl"
GOLDEN_PROBLEM = FIXTURES / "pddl" / "aircraft-4.problem.pddl"


@pytest.fixture(scope="session")
def manifest():
    return load_manifest(FIXTURES / "aircraft" / "manifest.json")


@pytest.fixture(scope="session")
def golden_texts():
    return GOLDEN_DOMAIN.read_text(), GOLDEN_PROBLEM.read_text()


@pytest.fixture(scope="session")
def aircraft_task(golden_texts):
    return parse_domain(golden_texts[0]), parse_problem(golden_texts[1])


@pytest.fixture
def aircraft_fixture():
    return build_aircraft_fixture(4, 2)


# Acceptance results, filled by tests/test_acceptance.py and printed at the end of the run.
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
