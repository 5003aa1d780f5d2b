from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from randassign.axioms import (
    AxiomVerdict,
    cumulative,
    equal_rank_envy_free,
    equal_treatment_of_equals,
    favors_higher_ranks,
    non_wasteful,
    sd_envy_free,
    sd_rank_fair,
    sd_strictly_dominates,
    sd_weakly_dominates,
    weak_sd_envy_free,
)
from randassign.core import ONE, Problem, as_matrix, column_sums, deterministic, deterministic_from_ids
from randassign.rules import pr, uniform

from conftest import PR_EX1, PR_EX2, RIA_EX1
from oracles import sd_geq, upper_mass
from strategies import deterministic_choices, problem_and_assignment, problems

F = Fraction
ORDER = (0, 1, 2)


def row(*xs):
    return tuple(F(x) for x in xs)


def test_cumulative():
    assert cumulative((2, 0, 1), row("1/2", "1/4", "1/4")) == [F(1, 4), F(3, 4), 1]


@pytest.mark.parametrize(
    "x,y,weak,strict",
    [
        (row(1, 0, 0), row("1/2", "1/2", 0), True, True),
        (row("1/2", "1/2", 0), row(1, 0, 0), False, False),
        (row("1/2", 0, "1/2"), row(0, 1, 0), False, False),
        (row(0, 1, 0), row("1/2", 0, "1/2"), False, False),
        (row("1/3", "1/3", "1/3"), row("1/3", "1/3", "1/3"), True, False),
        (row(0, 1, 0), row(0, "1/2", "1/2"), True, True),
    ],
)
def test_sd_examples(x, y, weak, strict):
    assert sd_weakly_dominates(ORDER, x, y) is weak
    assert sd_strictly_dominates(ORDER, x, y) is strict


def test_example1_improvement_dominates_ria_for_everyone(ex1):
    for i in range(4):
        assert sd_strictly_dominates(ex1.orders[i], PR_EX1[i], RIA_EX1[i])


def test_example2_envy_of_agent_1(ex2):
    for j in (1, 2):
        assert sd_strictly_dominates(ex2.orders[0], PR_EX2[j], PR_EX2[0])
    v = weak_sd_envy_free(ex2, PR_EX2)
    assert not v
    assert (v.witness["agent"], v.witness["envied"]) == ("1", "2")


def test_example2_pr_passes_characterizing_axioms(ex2):
    assert sd_rank_fair(ex2, PR_EX2)
    assert equal_rank_envy_free(ex2, PR_EX2)
    assert equal_treatment_of_equals(ex2, PR_EX2)
    assert not sd_envy_free(ex2, PR_EX2)


def test_prop2_assignment_fails_rank_fairness(prop2):
    d = deterministic_from_ids(prop2, {"1": "c", "2": "a", "3": "b"})
    v = sd_rank_fair(prop2, d)
    assert not v
    assert v.witness["part"] == "satiation"
    assert (v.witness["agent"], v.witness["object"], v.witness["higher_ranker"]) == ("2", "a", "1")
    f = favors_higher_ranks(prop2, d)
    assert not f
    assert f.witness["holder"] == "2" and f.witness["object"] == "a"


def test_equal_rank_envy_witness():
    p = Problem.from_orders([(0, 1), (0, 1)])
    d = as_matrix([[1, 0], [0, 1]])
    v = equal_rank_envy_free(p, d)
    assert not v
    assert v.witness == {"agent": "2", "other": "1", "object": "a", "rank": 1, "lhs": 1, "rhs": 0}
    assert not equal_treatment_of_equals(p, d)


def test_uniform_on_example1(ex1):
    u = uniform(ex1)
    assert non_wasteful(ex1, u)
    assert equal_rank_envy_free(ex1, u)
    v = sd_rank_fair(ex1, u)
    assert not v and v.witness["part"] == "satiation"


def test_wasteful_assignment_is_flagged():
    p = Problem.from_orders([(0, 1, 2), (0, 1, 2)], (2, 1, 1))
    d = deterministic(p, (0, 1))
    v = non_wasteful(p, d)
    assert not v
    assert v.witness["better_object"] == "a" and v.witness["allocated"] == 1
    assert sd_rank_fair(p, d).witness["part"] == "exhaustion"


def test_verdict_requires_witness_exactly_on_failure():
    with pytest.raises(ValueError):
        AxiomVerdict("x", False)
    with pytest.raises(ValueError):
        AxiomVerdict("x", True, {"agent": "1"})


# properties -------------------------------------------------------------------

rows3 = st.lists(st.integers(0, 6), min_size=3, max_size=3).filter(any).map(lambda w: tuple(F(x, sum(w)) for x in w))


@given(rows3, rows3, rows3, st.permutations(range(3)))
def test_sd_is_a_partial_order(x, y, z, order):
    assert sd_weakly_dominates(order, x, x)
    if sd_weakly_dominates(order, x, y) and sd_weakly_dominates(order, y, x):
        assert x == y
    if sd_weakly_dominates(order, x, y) and sd_weakly_dominates(order, y, z):
        assert sd_weakly_dominates(order, x, z)


@given(problem_and_assignment(max_agents=4, max_objects=4, max_quota=2), st.data())
def test_sd_matches_set_definition(pair, data):
    problem, pi = pair
    i = data.draw(st.integers(0, problem.n - 1))
    j = data.draw(st.integers(0, problem.n - 1))
    assert sd_weakly_dominates(problem.orders[i], pi[i], pi[j]) == sd_geq(problem, i, pi[i], pi[j])


@settings(max_examples=200)
@given(problem_and_assignment(max_agents=4, max_objects=4, max_quota=2))
def test_implications_between_axioms(pair):
    problem, pi = pair
    if sd_rank_fair(problem, pi):
        assert non_wasteful(problem, pi)
    if equal_rank_envy_free(problem, pi):
        assert equal_treatment_of_equals(problem, pi)
    if sd_envy_free(problem, pi):
        assert weak_sd_envy_free(problem, pi)


@settings(max_examples=200)
@given(problems(max_agents=4, max_objects=4, max_quota=2), st.data())
def test_rank_fairness_equals_favoring_higher_ranks_when_deterministic(problem, data):
    d = deterministic(problem, data.draw(deterministic_choices(problem)))
    assert bool(sd_rank_fair(problem, d)) == bool(favors_higher_ranks(problem, d))


@settings(max_examples=150)
@given(problems(max_agents=4, max_objects=4, max_quota=2), st.data())
def test_pr_passes_both_characterizing_axioms(problem, data):
    pi = pr(problem)
    assert sd_rank_fair(problem, pi)
    assert equal_rank_envy_free(problem, pi)


def replay_witness(problem, pi, v) -> bool:
    """Re-check a failing verdict's witness against the raw definitions."""
    w = v.witness
    cols = column_sums(pi)
    if v.axiom == "non-wastefulness" or w.get("part") == "exhaustion":
        i, a, b = problem.agent(w["agent"]), problem.obj(w["object"]), problem.obj(w["better_object"])
        return pi[i][a] > 0 and problem.ranks[i][b] < problem.ranks[i][a] and cols[b] < problem.quotas[b]
    if v.axiom == "sd-rank-fairness":
        i, j, a = problem.agent(w["agent"]), problem.agent(w["higher_ranker"]), problem.obj(w["object"])
        return pi[i][a] > 0 and problem.ranks[j][a] < problem.ranks[i][a] and upper_mass(problem, j, pi[j], a) < ONE
    if v.axiom == "equal-rank-envy-freeness":
        i, j, a = problem.agent(w["agent"]), problem.agent(w["other"]), problem.obj(w["object"])
        weak = upper_mass(problem, i, pi[i], a)
        return problem.ranks[i][a] == problem.ranks[j][a] and min(weak - pi[i][a] + pi[j][a], ONE) > weak
    if v.axiom in ("weak-sd-envy-freeness", "sd-envy-freeness"):
        i, j = problem.agent(w["agent"]), problem.agent(w["envied"])
        if v.axiom == "sd-envy-freeness":
            return not sd_geq(problem, i, pi[i], pi[j])
        return pi[i] != pi[j] and sd_geq(problem, i, pi[j], pi[i])
    if v.axiom == "equal-treatment-of-equals":
        i, j = problem.agent(w["agent"]), problem.agent(w["other"])
        return problem.preferences[i] == problem.preferences[j] and pi[i] != pi[j]
    raise AssertionError(v.axiom)


CHECKERS = (non_wasteful, sd_rank_fair, equal_rank_envy_free, weak_sd_envy_free, sd_envy_free, equal_treatment_of_equals)


@settings(max_examples=200)
@given(problem_and_assignment(max_agents=4, max_objects=4, max_quota=2))
def test_witnesses_replay(pair):
    problem, pi = pair
    for check in CHECKERS:
        v = check(problem, pi)
        if not v:
            assert replay_witness(problem, pi, v), v


@settings(max_examples=100)
@given(problems(max_agents=4, max_objects=4, max_quota=2))
def test_identical_rows_are_equal_rank_envy_free(problem):
    assert equal_rank_envy_free(problem, uniform(problem))
