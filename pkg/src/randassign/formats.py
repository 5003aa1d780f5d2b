"""Problem and assignment files, and rendering of exact values.

Problem files are JSON documents::

    {
      "agents": ["1", "2"],
      "objects": [{"id": "a", "quota": 1}, {"id": "b", "quota": 1}],
      "preferences": {"1": ["a", "b"], "2": ["b", "a"]}
    }

Shares are written as exact fraction strings (``"1/3"``); decimals are a
presentation layer only.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import Matrix, Preference, Problem, validate, validate_assignment

FORMATS = ("fractions", "decimal", "both")


class ParseError(ValueError):
    """Malformed input file; ``where`` locates the problem (line/column or key path)."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None


def _expect(cond: bool, message: str, where: str) -> None:
    if not cond:
        raise ParseError(message, where)


def parse_problem(text: str, source: str = "<problem>") -> Problem:
    doc = _load_json(text, source)
    _expect(isinstance(doc, dict), "expected an object at top level", source)
    for key in ("agents", "objects", "preferences"):
        _expect(key in doc, f"missing field {key!r}", source)
    agents = doc["agents"]
    _expect(isinstance(agents, list) and all(isinstance(i, str) for i in agents), "expected a list of agent ids", f"{source}:agents")
    objects = []
    _expect(isinstance(doc["objects"], list), "expected a list of objects", f"{source}:objects")
    for k, entry in enumerate(doc["objects"]):
        where = f"{source}:objects[{k}]"
        _expect(isinstance(entry, dict) and "id" in entry, "expected {\"id\": ..., \"quota\": ...}", where)
        quota = entry.get("quota", 1)
        _expect(isinstance(quota, int) and not isinstance(quota, bool), "quota must be an integer", where)
        objects.append((str(entry["id"]), quota))
    prefs = doc["preferences"]
    _expect(isinstance(prefs, dict), "expected a map from agent id to ranked objects", f"{source}:preferences")
    for i in agents:
        _expect(i in prefs, f"no preference for agent {i!r}", f"{source}:preferences")
        _expect(isinstance(prefs[i], list), "expected a list of object ids", f"{source}:preferences.{i}")
    extra = set(prefs) - set(agents)
    _expect(not extra, f"preferences for unknown agents {sorted(extra)}", f"{source}:preferences")
    problem = Problem(
        tuple(agents),
        tuple(a for a, _ in objects),
        tuple(q for _, q in objects),
        tuple(Preference(tuple(map(str, prefs[i]))) for i in agents),
    )
    bad = validate(problem)
    if bad:
        raise ParseError("; ".join(bad), source)
    return problem


def read_problem(path: str | Path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    return parse_problem(text, str(path))


def problem_to_dict(problem: Problem) -> dict[str, Any]:
    return {
        "agents": list(problem.agents),
        "objects": [{"id": a, "quota": q} for a, q in zip(problem.objects, problem.quotas)],
        "preferences": {i: list(p.order) for i, p in zip(problem.agents, problem.preferences)},
    }


def render_problem(problem: Problem) -> str:
    return json.dumps(problem_to_dict(problem), indent=2) + "\n"


def parse_fraction(value: Any, where: str = "") -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"expected a number, got {value!r}", where)
    try:
        return Fraction(value) if not isinstance(value, str) else Fraction(value.strip())
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParseError(f"not an exact number: {value!r}", where) from None


def parse_assignment(problem: Problem, text: str, source: str = "<assignment>") -> Matrix:
    """Read ``{"matrix": [[...], ...]}`` (rows in agent order) or
    ``{"assignment": {agent: {object: share}}}`` and check feasibility."""
    doc = _load_json(text, source)
    _expect(isinstance(doc, dict), "expected an object at top level", source)
    if "matrix" in doc:
        rows = doc["matrix"]
        _expect(isinstance(rows, list) and len(rows) == problem.n, f"expected {problem.n} rows", f"{source}:matrix")
        matrix = []
        for i, row in enumerate(rows):
            _expect(isinstance(row, list) and len(row) == problem.m, f"expected {problem.m} entries", f"{source}:matrix[{i}]")
            matrix.append(tuple(parse_fraction(x, f"{source}:matrix[{i}][{a}]") for a, x in enumerate(row)))
    elif "assignment" in doc:
        table = doc["assignment"]
        _expect(isinstance(table, dict), "expected a map from agent id to shares", f"{source}:assignment")
        unknown = set(table) - set(problem.agents)
        _expect(not unknown, f"unknown agents {sorted(unknown)}", f"{source}:assignment")
        matrix = []
        for i in problem.agents:
            shares = table.get(i, {})
            _expect(isinstance(shares, dict), "expected a map from object id to share", f"{source}:assignment.{i}")
            unknown = set(shares) - set(problem.objects)
            _expect(not unknown, f"unknown objects {sorted(unknown)}", f"{source}:assignment.{i}")
            matrix.append(tuple(parse_fraction(shares.get(a, 0), f"{source}:assignment.{i}.{a}") for a in problem.objects))
    else:
        raise ParseError("expected a 'matrix' or 'assignment' field", source)
    matrix = tuple(matrix)
    bad = validate_assignment(problem, matrix)
    if bad:
        raise ParseError("; ".join(bad), source)
    return matrix


def read_assignment(problem: Problem, path: str | Path) -> Matrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    return parse_assignment(problem, text, str(path))


def fmt(x: Fraction, style: str = "fractions", digits: int = 6) -> str:
    exact = str(x)
    if style == "fractions":
        return exact
    dec = f"{float(x):.{digits}f}"
    return dec if style == "decimal" else f"{exact} ({dec})"


def render_matrix(problem: Problem, matrix: Matrix, style: str = "fractions") -> str:
    cells = [[fmt(x, style) for x in row] for row in matrix]
    head = ["agent", *problem.objects]
    body = [[i, *row] for i, row in zip(problem.agents, cells)]
    widths = [max(len(r[c]) for r in [head, *body]) for c in range(len(head))]
    lines = ["  ".join(s.rjust(w) for s, w in zip(r, widths)) for r in [head, *body]]
    return "\n".join(lines) + "\n"


def jsonable(value: Any, style: str = "fractions") -> Any:
    """Fractions become strings; containers are converted recursively."""
    if isinstance(value, Fraction):
        return fmt(value, style)
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, dict):
        return {str(k): jsonable(v, style) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v, style) for v in value]
    if isinstance(value, Problem):
        return problem_to_dict(value)
    return str(value)

