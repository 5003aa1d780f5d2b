import sys
from pathlib import Path

import pytest

from randassign import Problem, as_matrix

sys.path.insert(0, str(Path(__file__).parent))

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"

EX1_ORDERS = {"1": "acbd", "2": "adbc", "3": "bcad", "4": "bdac"}
EX2_ORDERS = {"1": "abcd", "2": "acdb", "3": "acdb", "4": "bacd"}

RIA_EX1 = as_matrix([
    ["1/2", 0, "3/8", "1/8"],
    ["1/2", 0, "1/8", "3/8"],
    [0, "1/2", "3/8", "1/8"],
    [0, "1/2", "1/8", "3/8"],
])
PR_EX1 = as_matrix([
    ["1/2", 0, "1/2", 0],
    ["1/2", 0, 0, "1/2"],
    [0, "1/2", "1/2", 0],
    [0, "1/2", 0, "1/2"],
])
PR_EX2 = as_matrix([
    ["1/3", 0, 0, "2/3"],
    ["1/3", 0, "1/2", "1/6"],
    ["1/3", 0, "1/2", "1/6"],
    [0, 1, 0, 0],
])
PR_EX2_MANIPULATED = as_matrix([
    ["1/3", 0, "1/3", "1/3"],
    ["1/3", 0, "1/3", "1/3"],
    ["1/3", 0, "1/3", "1/3"],
    [0, 1, 0, 0],
])
PI_EX2_RANK = as_matrix([
    [1, 0, 0, 0],
    [0, 0, "1/2", "1/2"],
    [0, 0, "1/2", "1/2"],
    [0, 1, 0, 0],
])


def unit_problem(orders: dict[str, str]) -> Problem:
    objects = sorted(set("".join(orders.values())))
    return Problem.build(list(orders), [(a, 1) for a in objects], {i: list(p) for i, p in orders.items()})


@pytest.fixture
def ex1() -> Problem:
    return unit_problem(EX1_ORDERS)


@pytest.fixture
def ex2() -> Problem:
    return unit_problem(EX2_ORDERS)


@pytest.fixture
def prop2() -> Problem:
    return unit_problem({"1": "abc", "2": "bac", "3": "bac"})


# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
