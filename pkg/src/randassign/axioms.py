"""Fairness and efficiency predicates on a single (problem, assignment) pair.

Each checker returns an :class:`AxiomVerdict`.  A failing verdict carries a
witness holding the agents and objects involved together with both sides of
the violated inequality, so it can be re-checked independently.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .core import ONE, ZERO, Matrix, Problem, choices, column_sums


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    holds: bool
    witness: dict[str, Any] | None = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("a witness is required exactly when the axiom fails")

    def __bool__(self) -> bool:
        return self.holds


def _ok(name: str) -> AxiomVerdict:
    return AxiomVerdict(name, True)


def cumulative(order: Sequence[int], row: Sequence[Fraction]) -> list[Fraction]:
    """Running mass of ``row`` along ``order`` (object indices, best first)."""
    out, s = [], ZERO
    for a in order:
        s += row[a]
        out.append(s)
    return out


def sd_weakly_dominates(order: Sequence[int], row1: Sequence[Fraction], row2: Sequence[Fraction]) -> bool:
    """``row1`` puts at least as much mass as ``row2`` on every upper contour set of ``order``."""
    return all(x >= y for x, y in zip(cumulative(order, row1), cumulative(order, row2)))


def sd_strictly_dominates(order: Sequence[int], row1: Sequence[Fraction], row2: Sequence[Fraction]) -> bool:
    return tuple(row1) != tuple(row2) and sd_weakly_dominates(order, row1, row2)


def _wasted(problem: Problem, pi: Matrix, name: str) -> AxiomVerdict | None:
    cols = column_sums(pi)
    for i in range(problem.n):
        r = problem.ranks[i]
        for a in range(problem.m):
            if pi[i][a] > 0:
                for b in problem.orders[i][: r[a] - 1]:
                    if cols[b] != problem.quotas[b]:
                        return AxiomVerdict(
                            name,
                            False,
                            {
                                "agent": problem.agents[i],
                                "object": problem.objects[a],
                                "share": pi[i][a],
                                "better_object": problem.objects[b],
                                "allocated": cols[b],
                                "quota": problem.quotas[b],
                            },
                        )
    return None


def non_wasteful(problem: Problem, pi: Matrix) -> AxiomVerdict:
    bad = _wasted(problem, pi, "non-wastefulness")
    return _ok("non-wastefulness") if bad is None else bad


def sd_rank_fair(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """Positive share of ``a`` needs every better object exhausted and every
    agent ranking ``a`` strictly higher to be satiated at ``a``."""
    name = "sd-rank-fairness"
    bad = _wasted(problem, pi, name)
    if bad is not None:
        return AxiomVerdict(name, False, {"part": "exhaustion", **bad.witness})
    for a in range(problem.m):
        holders = [i for i in range(problem.n) if pi[i][a] > 0]
        if not holders:
            continue
        worst = max(problem.ranks[i][a] for i in holders)
        for j in range(problem.n):
            if problem.ranks[j][a] < worst:
                s = problem.surplus(pi[j], j, a)
                if s != ONE:
                    i = next(i for i in holders if problem.ranks[i][a] > problem.ranks[j][a])
                    return AxiomVerdict(
                        name,
                        False,
                        {
                            "part": "satiation",
                            "agent": problem.agents[i],
                            "object": problem.objects[a],
                            "share": pi[i][a],
                            "agent_rank": problem.ranks[i][a],
                            "higher_ranker": problem.agents[j],
                            "higher_rank": problem.ranks[j][a],
                            "higher_ranker_surplus": s,
                        },
                    )
    return _ok(name)


def equal_rank_envy_free(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """For ``i, j`` ranking ``a`` equally: min(U_i + pi_ja, 1) <= U_i + pi_ia."""
    name = "equal-rank-envy-freeness"
    for a in range(problem.m):
        by_rank: dict[int, list[int]] = {}
        for i in range(problem.n):
            by_rank.setdefault(problem.ranks[i][a], []).append(i)
        for group in by_rank.values():
            for i in group:
                weak = problem.surplus(pi[i], i, a)
                strict = weak - pi[i][a]
                for j in group:
                    lhs = min(strict + pi[j][a], ONE)
                    if lhs > weak:
                        return AxiomVerdict(
                            name,
                            False,
                            {
                                "agent": problem.agents[i],
                                "other": problem.agents[j],
                                "object": problem.objects[a],
                                "rank": problem.ranks[i][a],
                                "lhs": lhs,
                                "rhs": weak,
                            },
                        )
    return _ok(name)


def equal_treatment_of_equals(problem: Problem, pi: Matrix) -> AxiomVerdict:
    name = "equal-treatment-of-equals"
    for i in range(problem.n):
        for j in range(i + 1, problem.n):
            if problem.orders[i] == problem.orders[j] and pi[i] != pi[j]:
                return AxiomVerdict(
                    name,
                    False,
                    {"agent": problem.agents[i], "other": problem.agents[j], "row": pi[i], "other_row": pi[j]},
                )
    return _ok(name)


def weak_sd_envy_free(problem: Problem, pi: Matrix) -> AxiomVerdict:
    """Nobody's row is strictly stochastically dominated, under her own
    preference, by another agent's row."""
    name = "weak-sd-envy-freeness"
    for i in range(problem.n):
        for j in range(problem.n):
            if i != j and sd_strictly_dominates(problem.orders[i], pi[j], pi[i]):
                return AxiomVerdict(
                    name,
                    False,
                    {"agent": problem.agents[i], "envied": problem.agents[j], "row": pi[i], "envied_row": pi[j]},
                )
    return _ok(name)


def sd_envy_free(problem: Problem, pi: Matrix) -> AxiomVerdict:
    name = "sd-envy-freeness"
    for i in range(problem.n):
        for j in range(problem.n):
            if i != j and not sd_weakly_dominates(problem.orders[i], pi[i], pi[j]):
                return AxiomVerdict(
                    name,
                    False,
                    {"agent": problem.agents[i], "envied": problem.agents[j], "row": pi[i], "envied_row": pi[j]},
                )
    return _ok(name)


def favors_higher_ranks(problem: Problem, d: Matrix) -> AxiomVerdict:
    """Deterministic only: if ``i`` prefers ``a`` to what she holds, ``a`` is
    full and every holder of ``a`` ranks it at least as high as ``i`` does."""
    name = "favors-higher-ranks"
    held = choices(d)
    for i in range(problem.n):
        r = problem.ranks[i]
        for a in problem.orders[i][: r[held[i]] - 1]:
            owners = [j for j in range(problem.n) if held[j] == a]
            if len(owners) != problem.quotas[a]:
                return AxiomVerdict(
                    name,
                    False,
                    {"agent": problem.agents[i], "object": problem.objects[a], "reason": "not full", "holders": len(owners)},
                )
            for j in owners:
                if problem.ranks[j][a] > r[a]:
                    return AxiomVerdict(
                        name,
                        False,
                        {
                            "agent": problem.agents[i],
                            "object": problem.objects[a],
                            "reason": "held by a lower ranker",
                            "holder": problem.agents[j],
                            "agent_rank": r[a],
                            "holder_rank": problem.ranks[j][a],
                        },
                    )
    return _ok(name)
