"""Domain model: problems, strict preferences and exact assignment matrices.

Shares are stored as :class:`fractions.Fraction`; nothing in the computation
path touches floating point.  Agents and objects are opaque string ids; every
matrix is addressed by dense indices in the order of ``Problem.agents`` and
``Problem.objects``.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

Matrix = tuple[tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DomainError(ValueError):
    """An object or agent id, or a rank, outside the problem's domain."""


class ProblemError(ValueError):
    """A problem or assignment that violates the model's feasibility rules."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class Preference:
    """Strict ranking of all objects, best first."""

    order: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))

    @cached_property
    def _rank(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.order, start=1)}

    def rank(self, a: str) -> int:
        try:
            return self._rank[a]
        except KeyError:
            raise DomainError(f"unknown object {a!r}") from None

    def upper_contour(self, a: str, weak: bool = False) -> frozenset[str]:
        k = self.rank(a)
        return frozenset(self.order[: k if weak else k - 1])

    def __str__(self) -> str:
        return ">".join(self.order)


def rank(p: Preference, a: str) -> int:
    return p.rank(a)


def upper_contour(p: Preference, a: str, weak: bool = False) -> frozenset[str]:
    return p.upper_contour(a, weak)


def surplus(row: Sequence[Fraction], p: Preference, a: str, objects: Sequence[str]) -> Fraction:
    """Mass of ``row`` on the weak upper contour set of ``p`` at ``a``.

    ``row`` is aligned with ``objects``.
    """
    if len(row) != len(objects):
        raise ValueError(f"row has {len(row)} entries for {len(objects)} objects")
    better = p.upper_contour(a, weak=True)
    return sum((x for b, x in zip(objects, row) if b in better), ZERO)


@dataclass(frozen=True)
class Problem:
    agents: tuple[str, ...]
    objects: tuple[str, ...]
    quotas: tuple[int, ...]
    preferences: tuple[Preference, ...]

    @classmethod
    def build(
        cls,
        agents: Iterable[str],
        objects: Mapping[str, int] | Iterable[tuple[str, int]],
        preferences: Mapping[str, Sequence[str]],
    ) -> "Problem":
        """Build and validate; raises :class:`ProblemError` listing every violation."""
        agents = tuple(agents)
        pairs = list(objects.items()) if isinstance(objects, Mapping) else list(objects)
        missing = [i for i in agents if i not in preferences]
        if missing:
            raise ProblemError([f"no preference for agent {i!r}" for i in missing])
        problem = cls(
            agents,
            tuple(a for a, _ in pairs),
            tuple(q for _, q in pairs),
            tuple(Preference(tuple(preferences[i])) for i in agents),
        )
        violations = validate(problem)
        if violations:
            raise ProblemError(violations)
        return problem

    @classmethod
    def from_orders(cls, orders: Sequence[Sequence[int]], quotas: Sequence[int] | None = None) -> "Problem":
        """Problem with agents ``1..n`` and objects ``a, b, ...`` from index orders."""
        m = len(orders[0]) if orders else len(quotas or ())
        objects = tuple(_object_name(k) for k in range(m))
        return cls(
            tuple(str(i + 1) for i in range(len(orders))),
            objects,
            tuple(quotas) if quotas is not None else (1,) * m,
            tuple(Preference(tuple(objects[k] for k in order)) for order in orders),
        )

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return len(self.objects)

    @cached_property
    def orders(self) -> tuple[tuple[int, ...], ...]:
        """Per agent, object indices from best to worst."""
        index = self.object_index
        return tuple(tuple(index[a] for a in p.order) for p in self.preferences)

    @cached_property
    def ranks(self) -> tuple[tuple[int, ...], ...]:
        """``ranks[i][a]`` is agent i's (1-based) rank of object index a."""
        out = []
        for order in self.orders:
            row = [0] * self.m
            for k, a in enumerate(order, start=1):
                row[a] = k
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def object_index(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.objects)}

    @cached_property
    def agent_index(self) -> dict[str, int]:
        return {i: k for k, i in enumerate(self.agents)}

    def obj(self, a: str) -> int:
        try:
            return self.object_index[a]
        except KeyError:
            raise DomainError(f"unknown object {a!r}") from None

    def agent(self, i: str) -> int:
        try:
            return self.agent_index[i]
        except KeyError:
            raise DomainError(f"unknown agent {i!r}") from None

    def with_preference(self, i: int, order: Sequence[int]) -> "Problem":
        """Copy of the problem with agent index ``i`` reporting ``order`` (object indices)."""
        prefs = list(self.preferences)
        prefs[i] = Preference(tuple(self.objects[a] for a in order))
        return Problem(self.agents, self.objects, self.quotas, tuple(prefs))

    def surplus(self, row: Sequence[Fraction], i: int, a: int) -> Fraction:
        """Mass of ``row`` on agent ``i``'s weak upper contour set at object index ``a``."""
        r = self.ranks[i]
        k = r[a]
        return sum((row[b] for b in range(self.m) if r[b] <= k), ZERO)


def _object_name(k: int) -> str:
    letters = string.ascii_lowercase
    return letters[k] if k < len(letters) else f"o{k}"


def equal_rank_set(problem: Problem, a: str, k: int) -> frozenset[str]:
    """Agents ranking object ``a`` at position ``k``."""
    if not 1 <= k <= problem.m:
        raise DomainError(f"rank {k} outside 1..{problem.m}")
    col = problem.obj(a)
    return frozenset(i for i, r in zip(problem.agents, problem.ranks) if r[col] == k)


def validate(problem: Problem) -> list[str]:
    """Every violated problem invariant; an empty list means the problem is valid."""
    out = []
    if len(set(problem.agents)) != problem.n:
        out.append("duplicate agent ids")
    if len(set(problem.objects)) != problem.m:
        out.append("duplicate object ids")
    if len(problem.quotas) != problem.m:
        out.append(f"{len(problem.quotas)} quotas for {problem.m} objects")
    if len(problem.preferences) != problem.n:
        out.append(f"{len(problem.preferences)} preferences for {problem.n} agents")
    for a, q in zip(problem.objects, problem.quotas):
        if not isinstance(q, int) or isinstance(q, bool) or q < 1:
            out.append(f"quota of {a!r} must be a positive integer, got {q!r}")
    if all(isinstance(q, int) for q in problem.quotas) and sum(problem.quotas) < problem.n:
        out.append(f"total quota {sum(problem.quotas)} is below the number of agents {problem.n}")
    objects = set(problem.objects)
    for i, p in zip(problem.agents, problem.preferences):
        if len(p.order) != len(set(p.order)) or set(p.order) != objects:
            out.append(f"preference of agent {i!r} is not a strict ranking of all objects")
    return out


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(n: int, m: int) -> Matrix:
    return tuple((ZERO,) * m for _ in range(n))


def column_sums(matrix: Matrix) -> tuple[Fraction, ...]:
    if not matrix:
        return ()
    return tuple(sum(col, ZERO) for col in zip(*matrix))


def validate_assignment(problem: Problem, matrix: Matrix) -> list[str]:
    """Every violated feasibility condition of ``matrix`` as a random assignment."""
    out = []
    if len(matrix) != problem.n or any(len(row) != problem.m for row in matrix):
        return [f"matrix shape does not match {problem.n}x{problem.m}"]
    for i, row in zip(problem.agents, matrix):
        for a, x in zip(problem.objects, row):
            if not ZERO <= x <= ONE:
                out.append(f"entry ({i}, {a}) = {x} outside [0, 1]")
        s = sum(row, ZERO)
        if s != ONE:
            out.append(f"row {i} sums to {s}, not 1")
    for a, q, s in zip(problem.objects, problem.quotas, column_sums(matrix)):
        if s > q:
            out.append(f"column {a} sums to {s}, above quota {q}")
    return out


def is_deterministic(matrix: Matrix) -> bool:
    return all(x in (ZERO, ONE) for row in matrix for x in row)


def deterministic(problem: Problem, choice: Sequence[int]) -> Matrix:
    """0/1 matrix giving agent ``i`` the object with index ``choice[i]``."""
    return tuple(tuple(ONE if b == a else ZERO for b in range(problem.m)) for a in choice)


def deterministic_from_ids(problem: Problem, mapping: Mapping[str, str]) -> Matrix:
    return deterministic(problem, [problem.obj(mapping[i]) for i in problem.agents])


def choices(matrix: Matrix) -> tuple[int, ...]:
    """Object index held by each agent in a deterministic matrix."""
    out = []
    for row in matrix:
        held = [a for a, x in enumerate(row) if x == ONE]
        if len(held) != 1 or any(x not in (ZERO, ONE) for x in row):
            raise ValueError("matrix is not deterministic")
        out.append(held[0])
    return tuple(out)
