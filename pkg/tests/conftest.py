import random

import pytest

_criteria: dict = {}


@pytest.fixture
def rng(request):
    # per-test deterministic stream
    return random.Random(request.node.name)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].split("[")[0]
    if not name.startswith("test_criterion_"):
        return
    if report.when != "call" and report.passed:
        return
    num = int(name.split("_")[2])
    passed, names = _criteria.get(num, (True, []))
    if name not in names:
        names.append(name)
    _criteria[num] = (passed and report.passed, names)


def _label(names):
    # words shared by every part of a criterion
    split = [n.split("_")[3:] for n in names]
    common = []
    for words in zip(*split):
        if len(set(words)) > 1:
            break
        common.append(words[0])
    return " ".join(common or split[0])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        passed, names = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if passed else 'FAIL'}  {_label(names)}")
