"""Global efficiency notions and the Birkhoff-von Neumann decomposition.

The LP-based oracles solve exact programs over the set of random
assignments (row sums 1, column sums at most the quota) with
:mod:`randassign.ratlp`.  Brute-force routines are size-guarded.
"""
from __future__ import annotations

import functools
import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import guards, ratlp
from .axioms import AxiomVerdict, cumulative, non_wasteful
from .core import ONE, ZERO, Matrix, Problem, choices, deterministic, validate_assignment


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[tuple[Fraction, Matrix], ...]

    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for w, _ in self.parts)

    def combine(self) -> Matrix:
        n, m = len(self.parts[0][1]), len(self.parts[0][1][0])
        out = [[ZERO] * m for _ in range(n)]
        for w, d in self.parts:
            for i in range(n):
                for a in range(m):
                    if d[i][a]:
                        out[i][a] += w * d[i][a]
        return tuple(tuple(r) for r in out)

    def __len__(self) -> int:
        return len(self.parts)


def rank_distribution(problem: Problem, pi: Matrix) -> tuple[Fraction, ...]:
    """Expected number of agents receiving their k-th choice or better, k = 1..m."""
    mass = [ZERO] * problem.m
    for i in range(problem.n):
        for a, x in enumerate(pi[i]):
            if x:
                mass[problem.ranks[i][a] - 1] += x
    return tuple(itertools.accumulate(mass))


def rank_dominates(problem: Problem, pi1: Matrix, pi2: Matrix) -> bool:
    """Whether ``pi1``'s rank distribution is >= ``pi2``'s everywhere and > somewhere."""
    n1, n2 = rank_distribution(problem, pi1), rank_distribution(problem, pi2)
    return all(x >= y for x, y in zip(n1, n2)) and n1 != n2


def _find_cycle(edges: dict[int, dict[int, int]]) -> list[tuple[int, int, int]] | None:
    """Directed cycle as ``(from, to, label)`` triples, or None."""
    state: dict[int, int] = {}
    stack: list[tuple[int, int, int]] = []

    def visit(u: int) -> list[tuple[int, int, int]] | None:
        state[u] = 1
        for v, label in edges.get(u, {}).items():
            if state.get(v) == 1:
                start = next(k for k, (x, _, _) in enumerate(stack + [(u, v, label)]) if x == v)
                return (stack + [(u, v, label)])[start:]
            if v not in state:
                stack.append((u, v, label))
                found = visit(v)
                if found:
                    return found
                stack.pop()
        state[u] = 2
        return None

    for u in sorted(edges):
        if u not in state:
            found = visit(u)
            if found:
                return found
    return None


def sd_efficient_cycle_check(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """Non-wastefulness plus acyclicity of the trading relation on objects.

    The relation has an edge ``a -> b`` when some agent holding part of ``a``
    prefers ``b``.  A cycle is reported as the ``(agent, object held,
    object wanted)`` steps of a trading cycle.
    """
    name = "sd-efficiency"
    waste = non_wasteful(problem, pi)
    if not waste:
        return AxiomVerdict(name, False, {"kind": "wasteful", **waste.witness})
    edges: dict[int, dict[int, int]] = {}
    for i in range(problem.n):
        r = problem.ranks[i]
        for a in range(problem.m):
            if pi[i][a] > 0:
                for b in problem.orders[i][: r[a] - 1]:
                    edges.setdefault(a, {}).setdefault(b, i)
    cycle = _find_cycle(edges)
    if cycle is None:
        return AxiomVerdict(name, True)
    steps = [
        {"agent": problem.agents[i], "holds": problem.objects[a], "share": pi[i][a], "prefers": problem.objects[b]}
        for a, b, i in cycle
    ]
    return AxiomVerdict(name, False, {"kind": "cycle", "cycle": steps})


def _check_oracle_size(problem: Problem) -> None:
    g = guards.current()
    guards.check(problem.n, g.oracle_agents, "agents for brute-force/LP oracle")
    guards.check(problem.m, g.oracle_objects, "objects for brute-force/LP oracle")
    guards.check(max(problem.quotas, default=0), g.oracle_quota, "quota for brute-force/LP oracle")


def _assignment_polytope(problem: Problem):
    """Rows, rhs, senses for x_{ia} (flattened row-major) being a random assignment."""
    n, m = problem.n, problem.m
    rows, rhs, senses = [], [], []
    for i in range(n):
        rows.append(tuple(ONE if k // m == i else ZERO for k in range(n * m)))
        rhs.append(ONE)
        senses.append(ratlp.EQ)
    for a in range(m):
        rows.append(tuple(ONE if k % m == a else ZERO for k in range(n * m)))
        rhs.append(Fraction(problem.quotas[a]))
        senses.append(ratlp.LE)
    return rows, rhs, senses


def _unflatten(problem: Problem, x) -> Matrix:
    m = problem.m
    return tuple(tuple(x[i * m : (i + 1) * m]) for i in range(problem.n))


def sd_efficient_lp_oracle(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """Decide sd-efficiency straight from the definition.

    Maximise the total cumulative mass over all agents and upper contour sets,
    subject to every agent's cumulative masses staying at least those of
    ``pi``.  ``pi`` is dominated exactly when the optimum exceeds its own total.
    """
    name = "sd-efficiency"
    _check_oracle_size(problem)
    n, m = problem.n, problem.m
    rows, rhs, senses = _assignment_polytope(problem)
    for i in range(n):
        cum = cumulative(problem.orders[i], pi[i])
        for k in range(m - 1):
            better = set(problem.orders[i][: k + 1])
            rows.append(tuple(ONE if (j // m == i and j % m in better) else ZERO for j in range(n * m)))
            rhs.append(cum[k])
            senses.append(ratlp.GE)
    objective = tuple(Fraction(m - problem.ranks[j // m][j % m]) for j in range(n * m))
    baseline = sum((objective[i * m + a] * pi[i][a] for i in range(n) for a in range(m)), ZERO)
    out = ratlp.solve(ratlp.LinearProgram(objective, tuple(rows), tuple(rhs), tuple(senses)))
    if out.value == baseline:
        return AxiomVerdict(name, True)
    better_pi = _unflatten(problem, out.solution)
    return AxiomVerdict(name, False, {"kind": "dominated", "dominating": better_pi, "gain": out.value - baseline})


def rank_efficient_check(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """Whether some random assignment rank-dominates ``pi`` (one exact LP)."""
    name = "rank-efficiency"
    _check_oracle_size(problem)
    n, m = problem.n, problem.m
    dist = rank_distribution(problem, pi)
    rows, rhs, senses = _assignment_polytope(problem)
    for k in range(1, m):
        rows.append(tuple(ONE if problem.ranks[j // m][j % m] <= k else ZERO for j in range(n * m)))
        rhs.append(dist[k - 1])
        senses.append(ratlp.GE)
    objective = tuple(Fraction(m - problem.ranks[j // m][j % m] + 1) for j in range(n * m))
    out = ratlp.solve(ratlp.LinearProgram(objective, tuple(rows), tuple(rhs), tuple(senses)))
    if out.value == sum(dist, ZERO):
        return AxiomVerdict(name, True)
    better_pi = _unflatten(problem, out.solution)
    return AxiomVerdict(
        name,
        False,
        {"dominating": better_pi, "distribution": dist, "dominating_distribution": rank_distribution(problem, better_pi)},
    )


@functools.lru_cache(maxsize=64)
def _feasible_choices(n: int, quotas: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    out = []

    def extend(prefix: list[int], left: list[int]) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for a, q in enumerate(left):
            if q:
                left[a] -= 1
                prefix.append(a)
                extend(prefix, left)
                prefix.pop()
                left[a] += 1

    extend([], list(quotas))
    return tuple(out)


def deterministic_assignments(problem: Problem) -> Iterator[tuple[int, ...]]:
    """Every feasible deterministic assignment, as the object index held by each agent."""
    _check_oracle_size(problem)
    return iter(_feasible_choices(problem.n, problem.quotas))


def _improves(problem: Problem, new: tuple[int, ...], old: tuple[int, ...]) -> bool:
    strict = False
    for i, (a, b) in enumerate(zip(new, old)):
        ra, rb = problem.ranks[i][a], problem.ranks[i][b]
        if ra > rb:
            return False
        strict = strict or ra < rb
    return strict


def pareto_efficient(problem: Problem, d: Matrix) -> AxiomVerdict:
    """Brute force: no feasible deterministic assignment is a Pareto improvement."""
    held = choices(d)
    for other in deterministic_assignments(problem):
        if _improves(problem, other, held):
            return AxiomVerdict(
                "pareto-efficiency",
                False,
                {"improvement": {problem.agents[i]: problem.objects[a] for i, a in enumerate(other)}},
            )
    return AxiomVerdict("pareto-efficiency", True)


@functools.lru_cache(maxsize=512)
def pareto_efficient_choices(problem: Problem) -> tuple[tuple[int, ...], ...]:
    everything = list(deterministic_assignments(problem))
    return tuple(d for d in everything if not any(_improves(problem, o, d) for o in everything))


def ex_post_efficient_check(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """Whether ``pi`` is a lottery over Pareto-efficient deterministic assignments."""
    name = "ex-post-efficiency"
    n, m = problem.n, problem.m
    support = [d for d in pareto_efficient_choices(problem) if all(pi[i][a] > 0 for i, a in enumerate(d))]
    if not support:
        return AxiomVerdict(name, False, {"reason": "no Pareto-efficient assignment inside the support", "candidates": 0})
    rows, rhs = [], []
    for i in range(n):
        for a in range(m):
            rows.append(tuple(ONE if d[i] == a else ZERO for d in support))
            rhs.append(pi[i][a])
    rows.append((ONE,) * len(support))
    rhs.append(ONE)
    ok, weights = ratlp.feasible(rows, rhs, [ratlp.EQ] * len(rows), len(support))
    if not ok:
        return AxiomVerdict(
            name, False, {"reason": "no convex combination of Pareto-efficient assignments", "candidates": len(support)}
        )
    return AxiomVerdict(name, True)


def _max_flow(cap: dict[int, dict[int, int]], source: int, sink: int) -> dict[int, dict[int, int]]:
    """Edmonds-Karp on a small integer network; returns the flow on each edge."""
    residual: dict[int, dict[int, int]] = {}
    for u, out in cap.items():
        for v, c in out.items():
            residual.setdefault(u, {})[v] = residual.get(u, {}).get(v, 0) + c
            residual.setdefault(v, {}).setdefault(u, 0)
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v, c in residual.get(u, {}).items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        path, v = [], sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        push = min(residual[u][v] for u, v in path)
        for u, v in path:
            residual[u][v] -= push
            residual[v][u] += push
    return {u: {v: c - residual[u][v] for v, c in out.items() if c - residual[u][v] > 0} for u, out in cap.items()}


class DecompositionError(RuntimeError):
    pass


def bvn_decompose(problem: Problem, pi: Matrix) -> Decomposition:
    """Write ``pi`` as a convex combination of deterministic assignments.

    Unused capacity ``q_a - sum_i pi_ia`` is carried by a slack row so every
    residual stays in a transportation polytope with integer margins; each
    round extracts an integral point supported on the residual with the
    largest weight that keeps the residual nonnegative.  The result is then
    pruned to at most ``n*m + 1`` parts.
    """
    bad = validate_assignment(problem, pi)
    if bad:
        raise ValueError("; ".join(bad))
    n, m = problem.n, problem.m
    spare = sum(problem.quotas) - n
    cols = [sum((pi[i][a] for i in range(n)), ZERO) for a in range(m)]
    resid = [list(row) for row in pi] + [[problem.quotas[a] - cols[a] for a in range(m)]]
    left = ONE
    parts: list[tuple[Fraction, tuple[int, ...]]] = []
    source, slack, sink = n + m, n + m + 1, n + m + 2
    while left > 0:
        cap: dict[int, dict[int, int]] = {source: {i: 1 for i in range(n)}}
        for i in range(n):
            cap[i] = {n + a: 1 for a in range(m) if resid[i][a] > 0}
        if spare:
            cap[source][slack] = spare
            cap[slack] = {n + a: problem.quotas[a] for a in range(m) if resid[n][a] > 0}
        for a in range(m):
            cap[n + a] = {sink: problem.quotas[a]}
        flow = _max_flow(cap, source, sink)
        if sum(flow[source].values()) != n + spare:
            raise DecompositionError("no deterministic assignment fits the residual support")
        choice = tuple(next(v - n for v in flow[i]) for i in range(n))
        slack_units = {v - n: c for v, c in flow.get(slack, {}).items()}
        w = min(
            [resid[i][a] for i, a in enumerate(choice)]
            + [resid[n][a] / c for a, c in slack_units.items()]
        )
        for i, a in enumerate(choice):
            resid[i][a] -= w
        for a, c in slack_units.items():
            resid[n][a] -= w * c
        left -= w
        parts.append((w, choice))
    parts = _caratheodory(parts, n, m)
    return Decomposition(tuple((w, deterministic(problem, c)) for w, c in parts))


def _caratheodory(parts: list[tuple[Fraction, tuple[int, ...]]], n: int, m: int):
    """Drop parts until at most ``n*m + 1`` remain, keeping the combination."""
    parts = list(parts)
    while len(parts) > n * m + 1:
        # rows: one equation per matrix entry plus the weight total
        eqs = [[Fraction(int(c[i] == a)) for _, c in parts] for i in range(n) for a in range(m)]
        eqs.append([ONE] * len(parts))
        lam = _null_vector(eqs, len(parts))
        if not any(x > 0 for x in lam):
            lam = [-x for x in lam]
        step = min(w / x for (w, _), x in zip(parts, lam) if x > 0)
        parts = [(w - step * x, c) for (w, c), x in zip(parts, lam)]
        parts = [(w, c) for w, c in parts if w > 0]
    return parts


def _null_vector(eqs: list[list[Fraction]], k: int) -> list[Fraction]:
    rows = [list(r) for r in eqs]
    pivots: list[int] = []
    r = 0
    for col in range(k):
        p = next((s for s in range(r, len(rows)) if rows[s][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for s in range(len(rows)):
            if s != r and rows[s][col]:
                f = rows[s][col]
                rows[s] = [x - f * y for x, y in zip(rows[s], rows[r])]
        pivots.append(col)
        r += 1
    free = next(c for c in range(k) if c not in pivots)
    vec = [ZERO] * k
    vec[free] = ONE
    for s, col in enumerate(pivots):
        vec[col] = -rows[s][free]
    return vec
