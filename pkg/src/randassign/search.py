"""Counterexample search over problem corpora and the rules-by-axioms table.

An axiom check here is rule-level: it gets the rule (needed for the
incentive axioms) and the rule's output on one problem.  A search walks a
corpus and stops at the first failing instance.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from . import axioms as ax
from . import corpus, efficiency as ef
from .axioms import AxiomVerdict
from .core import Matrix, Problem
from .manipulation import find_manipulation
from .rules import get_rule

Check = Callable[[Problem, Callable[[Problem], Matrix], Matrix], AxiomVerdict]


def _incentive(mode: str, name: str) -> Check:
    def check(problem, rule, pi):
        w = find_manipulation(problem, rule, mode, truthful=pi)
        if w is None:
            return AxiomVerdict(name, True)
        return AxiomVerdict(
            name,
            False,
            {
                "agent": w.agent,
                "truth": str(w.truth),
                "misreport": str(w.misreport),
                "truthful_row": w.truthful_row,
                "manipulated_row": w.manipulated_row,
            },
        )

    return check


def _outcome(fn: Callable[[Problem, Matrix], AxiomVerdict]) -> Check:
    return lambda problem, rule, pi: fn(problem, pi)


# Table order, as the axioms are listed in the comparison table.
AXIOMS: dict[str, Check] = {
    "weak-strategy-proofness": _incentive("weak", "weak-strategy-proofness"),
    "strategy-proofness": _incentive("strict", "strategy-proofness"),
    "equal-treatment-of-equals": _outcome(ax.equal_treatment_of_equals),
    "weak-sd-envy-freeness": _outcome(ax.weak_sd_envy_free),
    "sd-envy-freeness": _outcome(ax.sd_envy_free),
    "equal-rank-envy-freeness": _outcome(ax.equal_rank_envy_free),
    "ex-post-efficiency": _outcome(ef.ex_post_efficient_check),
    "sd-efficiency": _outcome(ef.sd_efficient_cycle_check),
    "sd-rank-fairness": _outcome(ax.sd_rank_fair),
    "rank-efficiency": _outcome(ef.rank_efficient_check),
}
EXTRA_AXIOMS: dict[str, Check] = {
    "literal-strategy-proofness": _incentive("literal", "literal-strategy-proofness"),
    "non-wastefulness": _outcome(ax.non_wasteful),
    "sd-efficiency-lp": _outcome(ef.sd_efficient_lp_oracle),
}
ALIASES = {
    "weak-sp": "weak-strategy-proofness",
    "sp": "strategy-proofness",
    "ete": "equal-treatment-of-equals",
    "weak-sd-ef": "weak-sd-envy-freeness",
    "sd-ef": "sd-envy-freeness",
    "erf": "equal-rank-envy-freeness",
    "ex-post": "ex-post-efficiency",
    "sd-eff": "sd-efficiency",
    "srf": "sd-rank-fairness",
    "rank-eff": "rank-efficiency",
}
TABLE_RULES = ("rsd", "ps", "ria", "pr")

# Comparison table as published: True = satisfied, False = violated.
REPORTED_TABLE: dict[str, dict[str, bool]] = {
    "weak-strategy-proofness": dict(rsd=True, ps=True, ria=False, pr=False),
    "strategy-proofness": dict(rsd=True, ps=False, ria=False, pr=False),
    "equal-treatment-of-equals": dict(rsd=True, ps=True, ria=True, pr=True),
    "weak-sd-envy-freeness": dict(rsd=True, ps=True, ria=False, pr=False),
    "sd-envy-freeness": dict(rsd=False, ps=True, ria=False, pr=False),
    "equal-rank-envy-freeness": dict(rsd=False, ps=False, ria=False, pr=True),
    "ex-post-efficiency": dict(rsd=True, ps=True, ria=True, pr=True),
    "sd-efficiency": dict(rsd=False, ps=True, ria=False, pr=True),
    "sd-rank-fairness": dict(rsd=False, ps=False, ria=False, pr=True),
    "rank-efficiency": dict(rsd=False, ps=False, ria=False, pr=False),
}


def axiom_check(name: str) -> Check:
    name = ALIASES.get(name, name)
    if name in AXIOMS:
        return AXIOMS[name]
    if name in EXTRA_AXIOMS:
        return EXTRA_AXIOMS[name]
    raise ValueError(f"unknown axiom {name!r}")


def check_instance(problem: Problem, rule: str, axiom: str) -> AxiomVerdict:
    fn = get_rule(rule)
    return axiom_check(axiom)(problem, fn, fn(problem))


@dataclass
class SearchResult:
    rule: str
    axiom: str
    bounds: str
    examined: int = 0
    problem: Problem | None = None
    verdict: AxiomVerdict | None = None
    seconds: float = 0.0

    @property
    def found(self) -> bool:
        return self.problem is not None


def _check_task(args) -> tuple[bool, AxiomVerdict]:
    problem, rule, axiom = args
    v = check_instance(problem, rule, axiom)
    return v.holds, v


def run_search(
    problems: Iterable[Problem],
    rule: str,
    axiom: str,
    bounds: str = "",
    jobs: int = 1,
    chunk: int = 64,
) -> SearchResult:
    """First problem in corpus order where ``rule`` violates ``axiom``.

    With ``jobs > 1`` the corpus is checked in chunks on a process pool; the
    reported counterexample is still the first in corpus order.
    """
    axiom = ALIASES.get(axiom, axiom)
    axiom_check(axiom)
    get_rule(rule)
    out = SearchResult(rule, axiom, bounds)
    start = time.perf_counter()
    if jobs <= 1:
        for problem in problems:
            out.examined += 1
            v = check_instance(problem, rule, axiom)
            if not v.holds:
                out.problem, out.verdict = problem, v
                break
    else:
        with ProcessPoolExecutor(jobs) as pool:
            for batch in _batches(problems, chunk * jobs):
                results = list(pool.map(_check_task, [(p, rule, axiom) for p in batch], chunksize=chunk))
                hit = next((k for k, (ok, _) in enumerate(results) if not ok), None)
                if hit is None:
                    out.examined += len(batch)
                    continue
                out.examined += hit + 1
                out.problem, out.verdict = batch[hit], results[hit][1]
                break
    out.seconds = time.perf_counter() - start
    return out


def _batches(items: Iterable[Problem], size: int) -> Iterator[list[Problem]]:
    batch: list[Problem] = []
    for x in items:
        batch.append(x)
        if len(batch) == size:
            yield batch
            batch = []
    if batch:
        yield batch


def search(
    rule: str,
    axiom: str,
    max_agents: int = 3,
    max_objects: int = 3,
    max_quota: int = 1,
    mode: str = "exhaustive",
    seed: int = 0,
    samples: int = 1000,
    jobs: int = 1,
) -> SearchResult:
    if mode == "exhaustive":
        problems = corpus.exhaustive(max_agents, max_objects, max_quota)
        bounds = f"exhaustive n<={max_agents} m<={max_objects} q<={max_quota}"
    elif mode == "random":
        problems = corpus.sampled(max_agents, max_objects, samples, seed, max_quota)
        bounds = f"random n={max_agents} m={max_objects} q<={max_quota} samples={samples} seed={seed}"
    else:
        raise ValueError(f"unknown search mode {mode!r}")
    return run_search(problems, rule, axiom, bounds, jobs=jobs)


@dataclass
class Cell:
    rule: str
    axiom: str
    satisfied: bool
    reported: bool
    searches: list[SearchResult] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return self.satisfied == self.reported

    @property
    def evidence(self) -> SearchResult:
        return self.searches[-1]


@dataclass(frozen=True)
class TablePlan:
    """Search bounds behind every cell.

    A cell is marked violated only with a concrete counterexample; it is marked
    satisfied when the exhaustive phase and every random phase find none.
    """

    max_agents: int = 3
    max_objects: int = 3
    max_quota: int = 2
    random_agents: int = 4
    random_objects: int = 4
    random_samples: int = 300
    random_quotas: tuple[int, ...] = (1, 2)
    seed: int = 2024


def table1(
    plan: TablePlan = TablePlan(),
    rules: Iterable[str] = TABLE_RULES,
    axioms: Iterable[str] = tuple(AXIOMS),
    jobs: int = 1,
    progress: Callable[[Cell], None] | None = None,
) -> list[Cell]:
    cells = []
    for axiom in axioms:
        for rule in rules:
            runs = [
                search(rule, axiom, plan.max_agents, plan.max_objects, plan.max_quota, "exhaustive", jobs=jobs)
            ]
            for k, q in enumerate(plan.random_quotas):
                if runs[-1].found or not plan.random_samples:
                    break
                runs.append(
                    search(
                        rule,
                        axiom,
                        plan.random_agents,
                        plan.random_objects,
                        q,
                        "random",
                        seed=plan.seed + k,
                        samples=plan.random_samples,
                        jobs=jobs,
                    )
                )
            cell = Cell(rule, axiom, not runs[-1].found, REPORTED_TABLE[axiom][rule], runs)
            cells.append(cell)
            if progress:
                progress(cell)
    return cells
