"""Strategy-proofness audits by enumerating every misreport.

Modes:

``weak``
    look for a misreport whose outcome strictly stochastically dominates the
    truthful one (refutes weak strategy-proofness);
``strict``
    look for a misreport whose outcome the truthful one fails to weakly
    dominate (refutes strategy-proofness in the usual sense);
``literal``
    look for a misreport, different from the truth, whose outcome weakly
    dominates the truthful one.  Any rule where some misreport leaves the
    outcome unchanged fails this reading.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import guards
from .axioms import sd_strictly_dominates, sd_weakly_dominates
from .core import Matrix, Preference, Problem

Rule = Callable[[Problem], Matrix]
MODES = ("weak", "strict", "literal")


@dataclass(frozen=True)
class ManipulationWitness:
    agent: str
    truth: Preference
    misreport: Preference
    truthful_row: tuple[Fraction, ...]
    manipulated_row: tuple[Fraction, ...]
    mode: str


def _profitable(order, truthful, manipulated, mode: str) -> bool:
    if mode == "weak":
        return sd_strictly_dominates(order, manipulated, truthful)
    if mode == "strict":
        return not sd_weakly_dominates(order, truthful, manipulated)
    if mode == "literal":
        return sd_weakly_dominates(order, manipulated, truthful)
    raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")


def find_manipulation(
    problem: Problem,
    rule: Rule,
    mode: str = "weak",
    truthful: Matrix | None = None,
) -> ManipulationWitness | None:
    """First profitable misreport (agents in order, misreports lexicographic), or None."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}")
    guards.check(problem.m, guards.current().manipulation_objects, "objects for misreport enumeration")
    if truthful is None:
        truthful = rule(problem)
    for i in range(problem.n):
        order = problem.orders[i]
        for report in itertools.permutations(range(problem.m)):
            if report == order:
                continue
            row = rule(problem.with_preference(i, report))[i]
            if _profitable(order, truthful[i], row, mode):
                return ManipulationWitness(
                    problem.agents[i],
                    problem.preferences[i],
                    Preference(tuple(problem.objects[a] for a in report)),
                    truthful[i],
                    row,
                    mode,
                )
    return None


def replay(problem: Problem, rule: Rule, witness: ManipulationWitness) -> bool:
    """Re-run the rule on the misreported profile and re-check dominance."""
    i = problem.agent(witness.agent)
    report = tuple(problem.obj(a) for a in witness.misreport.order)
    truthful = rule(problem)[i]
    row = rule(problem.with_preference(i, report))[i]
    return (
        tuple(row) == tuple(witness.manipulated_row)
        and tuple(truthful) == tuple(witness.truthful_row)
        and report != problem.orders[i]
        and _profitable(problem.orders[i], truthful, row, witness.mode)
    )


@dataclass
class SPAudit:
    rule: str
    mode: str
    instances: int = 0
    witnesses: list[tuple[Problem, ManipulationWitness]] = field(default_factory=list)

    @property
    def manipulable(self) -> bool:
        return bool(self.witnesses)


def audit_rule_sp(corpus: Iterable[Problem], rule: Rule, mode: str = "weak", name: str = "", stop_at_first: bool = False) -> SPAudit:
    """Run :func:`find_manipulation` over a corpus and collect witnesses."""
    out = SPAudit(name or getattr(rule, "__name__", "rule"), mode)
    for problem in corpus:
        out.instances += 1
        w = find_manipulation(problem, rule, mode)
        if w is not None:
            out.witnesses.append((problem, w))
            if stop_at_first:
                break
    return out
