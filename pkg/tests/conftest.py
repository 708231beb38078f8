import pytest

from qxgraph.sceneio import parse_scene, running_example_path


@pytest.fixture(scope="session")
def running_scene():
    return parse_scene(running_example_path())


@pytest.fixture(scope="session")
def composition_oracle():
    from oracles import derive_composition
    return derive_composition(8)


_criteria: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        _criteria[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria.items():
        terminalreporter.write_line(f"{outcome}  {name}")
