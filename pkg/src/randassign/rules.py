"""Assignment rules.

Every rule maps a :class:`~randassign.core.Problem` to an exact matrix.  The
two deterministic rules (simple immediate acceptance, serial dictatorship)
take an ordering of agents, highest priority first; their lottery versions
(``ria``, ``rsd``) average over all ``n!`` orderings exactly.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import guards
from .core import ONE, ZERO, Matrix, Problem, deterministic


@dataclass(frozen=True)
class EatingStageTrace:
    """What happened during one eating stage (PR) or one event interval (PS)."""

    stage: int
    eaters: dict[int, tuple[int, ...]]  # object index -> agent indices eating it
    residual_before: tuple[Fraction, ...]
    residual_after: tuple[Fraction, ...]
    consumed: tuple[Fraction, ...]  # per agent, during this stage only
    interval: tuple[Fraction, Fraction] | None = None


def _priority(problem: Problem, ordering: Sequence[str] | Sequence[int]) -> tuple[int, ...]:
    order = tuple(problem.agent(i) if isinstance(i, str) else i for i in ordering)
    if sorted(order) != list(range(problem.n)):
        raise ValueError(f"ordering {ordering!r} is not a permutation of the agents")
    return order


def _simple_ia(problem: Problem, order: tuple[int, ...]) -> tuple[int, ...]:
    position = {agent: p for p, agent in enumerate(order)}
    remaining = list(problem.quotas)
    held = [-1] * problem.n
    waiting = list(order)
    for step in range(problem.m):
        if not waiting:
            break
        applicants: dict[int, list[int]] = {}
        for i in waiting:
            applicants.setdefault(problem.orders[i][step], []).append(i)
        rejected = []
        for a, group in applicants.items():
            group.sort(key=position.__getitem__)
            take = remaining[a]
            for i in group[:take]:
                held[i] = a
            remaining[a] -= min(take, len(group))
            rejected.extend(group[take:])
        waiting = sorted(rejected, key=position.__getitem__)
    # total quota >= n guarantees nobody is left over after m steps
    assert not waiting, "simple immediate acceptance left agents unassigned"
    return tuple(held)


def _serial_dictatorship(problem: Problem, order: tuple[int, ...]) -> tuple[int, ...]:
    remaining = list(problem.quotas)
    held = [-1] * problem.n
    for i in order:
        a = next(a for a in problem.orders[i] if remaining[a] > 0)
        held[i] = a
        remaining[a] -= 1
    return tuple(held)


def simple_ia(problem: Problem, ordering: Sequence[str] | Sequence[int]) -> Matrix:
    """Immediate acceptance with agents prioritised by ``ordering``."""
    return deterministic(problem, _simple_ia(problem, _priority(problem, ordering)))


def serial_dictatorship(problem: Problem, ordering: Sequence[str] | Sequence[int]) -> Matrix:
    return deterministic(problem, _serial_dictatorship(problem, _priority(problem, ordering)))


def _lottery(problem: Problem, run: Callable[[Problem, tuple[int, ...]], tuple[int, ...]]) -> Matrix:
    guards.check(problem.n, guards.current().enum_agents, "agents for exact ordering enumeration")
    counts = [[0] * problem.m for _ in range(problem.n)]
    for order in itertools.permutations(range(problem.n)):
        for i, a in enumerate(run(problem, order)):
            counts[i][a] += 1
    total = math.factorial(problem.n)
    return tuple(tuple(Fraction(c, total) for c in row) for row in counts)


def ria(problem: Problem) -> Matrix:
    """Random immediate acceptance: uniform average of ``simple_ia`` over all orderings."""
    return _lottery(problem, _simple_ia)


def rsd(problem: Problem) -> Matrix:
    """Random serial dictatorship, averaged exactly over all orderings."""
    return _lottery(problem, _serial_dictatorship)


def sampled_lottery(problem: Problem, rule: str, samples: int, seed: int = 0) -> Matrix:
    """Average of ``simple_ia`` (``rule="ria"``) or serial dictatorship
    (``rule="rsd"``) over ``samples`` uniformly drawn orderings.

    An estimate of the lottery rule for instances beyond the enumeration guard.
    """
    run = {"ria": _simple_ia, "rsd": _serial_dictatorship}[rule]
    rng = random.Random(seed)
    counts = [[0] * problem.m for _ in range(problem.n)]
    for _ in range(samples):
        order = list(range(problem.n))
        rng.shuffle(order)
        for i, a in enumerate(run(problem, tuple(order))):
            counts[i][a] += 1
    return tuple(tuple(Fraction(c, samples) for c in row) for row in counts)


def waterfill(
    demands: Sequence[Fraction],
    capacity: Fraction,
    speeds: Sequence[Fraction] | None = None,
) -> tuple[Fraction, ...]:
    """Split ``capacity`` among eaters who stop once their demand is met.

    Eater ``i`` receives ``min(demands[i], speeds[i] * level)`` where ``level``
    exhausts the capacity; if total demand fits, everyone is served in full.
    """
    demands = [Fraction(d) for d in demands]
    speeds = [ONE] * len(demands) if speeds is None else [Fraction(s) for s in speeds]
    capacity = Fraction(capacity)
    if sum(demands, ZERO) <= capacity:
        return tuple(demands)
    out = [ZERO] * len(demands)
    left, rate = capacity, sum(speeds, ZERO)
    queue = sorted(range(len(demands)), key=lambda i: demands[i] / speeds[i])
    for pos, i in enumerate(queue):
        level = left / rate
        if demands[i] <= speeds[i] * level:
            out[i] = demands[i]
            left -= demands[i]
            rate -= speeds[i]
            continue
        for j in queue[pos:]:
            out[j] = speeds[j] * level
        break
    return tuple(out)


def pr_trace(problem: Problem, speeds: Sequence[Fraction] | None = None) -> tuple[Matrix, list[EatingStageTrace]]:
    """Probabilistic rank rule with its per-stage trace.

    At stage ``k`` each agent still short of a full unit eats only her
    ``k``-th choice; within a stage the objects are independent, so each is
    shared out by :func:`waterfill`.  ``speeds`` (per agent, default all 1)
    exists for the unequal-speed variant.
    """
    n, m = problem.n, problem.m
    residual = [Fraction(q) for q in problem.quotas]
    demand = [ONE] * n
    share = [[ZERO] * m for _ in range(n)]
    trace = []
    for k in range(m):
        before = tuple(residual)
        eaters: dict[int, list[int]] = {}
        for i in range(n):
            if demand[i] > 0:
                eaters.setdefault(problem.orders[i][k], []).append(i)
        consumed = [ZERO] * n
        for a, group in eaters.items():
            got = waterfill(
                [demand[i] for i in group],
                residual[a],
                None if speeds is None else [speeds[i] for i in group],
            )
            for i, x in zip(group, got):
                share[i][a] += x
                demand[i] -= x
                consumed[i] = x
            residual[a] -= sum(got, ZERO)
        trace.append(
            EatingStageTrace(k + 1, {a: tuple(g) for a, g in sorted(eaters.items())}, before, tuple(residual), tuple(consumed))
        )
    assert all(d == 0 for d in demand), "probabilistic rank rule left demand unserved"
    return tuple(tuple(row) for row in share), trace


def pr(problem: Problem, speeds: Sequence[Fraction] | None = None) -> Matrix:
    return pr_trace(problem, speeds)[0]


def ps_trace(problem: Problem) -> tuple[Matrix, list[EatingStageTrace]]:
    """Probabilistic serial rule by exact event-driven simultaneous eating.

    Every agent eats her best object with residual supply at unit speed; all
    agents are satiated together at time 1.
    """
    n, m = problem.n, problem.m
    residual = [Fraction(q) for q in problem.quotas]
    share = [[ZERO] * m for _ in range(n)]
    t = ZERO
    trace = []
    while t < 1:
        eaters: dict[int, list[int]] = {}
        for i in range(n):
            a = next(a for a in problem.orders[i] if residual[a] > 0)
            eaters.setdefault(a, []).append(i)
        dt = min([ONE - t] + [residual[a] / len(g) for a, g in eaters.items()])
        before = tuple(residual)
        consumed = [ZERO] * n
        for a, group in eaters.items():
            for i in group:
                share[i][a] += dt
                consumed[i] = dt
            residual[a] -= dt * len(group)
        trace.append(
            EatingStageTrace(
                len(trace) + 1,
                {a: tuple(g) for a, g in sorted(eaters.items())},
                before,
                tuple(residual),
                tuple(consumed),
                (t, t + dt),
            )
        )
        t += dt
    return tuple(tuple(row) for row in share), trace


def ps(problem: Problem) -> Matrix:
    return ps_trace(problem)[0]


def uniform(problem: Problem) -> Matrix:
    total = sum(problem.quotas)
    row = tuple(Fraction(q, total) for q in problem.quotas)
    return (row,) * problem.n


RULES: dict[str, Callable[[Problem], Matrix]] = {
    "pr": pr,
    "ps": ps,
    "ria": ria,
    "rsd": rsd,
    "uniform": uniform,
}


def get_rule(name: str) -> Callable[[Problem], Matrix]:
    try:
        return RULES[name]
    except KeyError:
        raise ValueError(f"unknown rule {name!r}; choose from {', '.join(RULES)}") from None
