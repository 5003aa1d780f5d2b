"""Sampled comparison of rules: average rank distributions and violation counts."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import corpus
from .core import ZERO, Problem
from .efficiency import rank_distribution
from .rules import get_rule
from .search import axiom_check

DEFAULT_AXIOMS = ("sd-rank-fairness", "equal-rank-envy-freeness", "sd-efficiency")


@dataclass
class RuleSummary:
    rule: str
    samples: int = 0
    total: list[Fraction] = field(default_factory=list)
    violations: dict[str, int] = field(default_factory=dict)

    @property
    def mean(self) -> list[Fraction]:
        return [x / self.samples for x in self.total] if self.samples else []


def compare(
    rules: Sequence[str],
    problems: Iterable[Problem],
    axioms: Sequence[str] = DEFAULT_AXIOMS,
) -> list[RuleSummary]:
    """Exact averages of the rank distribution of every rule over ``problems``."""
    fns = {r: get_rule(r) for r in rules}
    checks = {a: axiom_check(a) for a in axioms}
    out = {r: RuleSummary(r, violations={a: 0 for a in axioms}) for r in rules}
    for problem in problems:
        for r, fn in fns.items():
            pi = fn(problem)
            s = out[r]
            dist = rank_distribution(problem, pi)
            if not s.total:
                s.total = [ZERO] * len(dist)
            if len(dist) != len(s.total):
                raise ValueError("all problems in one comparison need the same number of objects")
            s.total = [x + y for x, y in zip(s.total, dist)]
            s.samples += 1
            for a, check in checks.items():
                if not check(problem, fn, pi).holds:
                    s.violations[a] += 1
    return list(out.values())


def sampled_compare(
    rules: Sequence[str],
    samples: int,
    agents: int,
    objects: int,
    seed: int,
    max_quota: int = 1,
    axioms: Sequence[str] = DEFAULT_AXIOMS,
) -> list[RuleSummary]:
    return compare(rules, corpus.sampled(agents, objects, samples, seed, max_quota), axioms)


def to_csv(summaries: Sequence[RuleSummary], digits: int = 6) -> str:
    """Long format: one line per (rule, k).  Averages are decimal renderings."""
    buf = io.StringIO()
    axioms = list(summaries[0].violations) if summaries else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rule", "k", "mean_N_k", "samples", *(f"violations_{a}" for a in axioms)])
    for s in summaries:
        for k, v in enumerate(s.mean, start=1):
            w.writerow([s.rule, k, f"{float(v):.{digits}f}", s.samples, *(s.violations[a] for a in axioms)])
    return buf.getvalue()
