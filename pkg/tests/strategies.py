"""Hypothesis strategies for problems and random assignments."""
from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from randassign.core import ZERO, Problem


@st.composite
def problems(draw, max_agents: int = 4, max_objects: int = 4, max_quota: int = 2, min_agents: int = 1):
    n = draw(st.integers(min_agents, max_agents))
    m = draw(st.integers(1, max_objects))
    quotas = draw(st.lists(st.integers(1, max_quota), min_size=m, max_size=m).filter(lambda q: sum(q) >= n))
    orders = [tuple(draw(st.permutations(range(m)))) for _ in range(n)]
    return Problem.from_orders(orders, quotas)


@st.composite
def deterministic_choices(draw, problem: Problem):
    left = list(problem.quotas)
    out = []
    for _ in range(problem.n):
        a = draw(st.sampled_from([a for a, q in enumerate(left) if q > 0]))
        left[a] -= 1
        out.append(a)
    return tuple(out)


@st.composite
def random_assignments(draw, problem: Problem, max_parts: int = 3):
    """Convex combination of feasible deterministic assignments."""
    k = draw(st.integers(1, max_parts))
    parts = [draw(deterministic_choices(problem)) for _ in range(k)]
    raw = [draw(st.integers(1, 6)) for _ in range(k)]
    weights = [Fraction(w, sum(raw)) for w in raw]
    matrix = [[ZERO] * problem.m for _ in range(problem.n)]
    for w, choice in zip(weights, parts):
        for i, a in enumerate(choice):
            matrix[i][a] += w
    return tuple(tuple(r) for r in matrix)


@st.composite
def problem_and_assignment(draw, **bounds):
    problem = draw(problems(**bounds))
    return problem, draw(random_assignments(problem))
