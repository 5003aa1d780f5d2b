import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from randassign import guards
from randassign.ratlp import EQ, GE, LE, LinearProgram, feasible, solve

from oracles import lp_by_vertices

F = Fraction


def test_textbook_maximum():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), value 36
    lp = LinearProgram((3, 5), ((1, 0), (0, 2), (3, 2)), (4, 12, 18), (LE, LE, LE))
    out = solve(lp)
    assert out.optimal
    assert out.value == 36
    assert out.solution == (2, 6)


def test_minimum_with_equality_and_ge():
    # min x + y, x + 2y = 3, x >= 1/2  ->  x = 1/2, y = 5/4
    lp = LinearProgram((1, 1), ((1, 2), (1, 0)), (3, F(1, 2)), (EQ, GE), maximize=False)
    out = solve(lp)
    assert out.value == F(7, 4)
    assert out.solution == (F(1, 2), F(5, 4))


def test_infeasible_and_unbounded():
    assert solve(LinearProgram((1,), ((1,),), (-1,), (GE,), maximize=False)).value == 0
    assert solve(LinearProgram((1,), ((1,), (1,)), (2, 1), (GE, LE))).status == "infeasible"
    assert solve(LinearProgram((1, 1), ((1, -1),), (1,), (LE,))).status == "unbounded"


def test_upper_bounds():
    out = solve(LinearProgram((1, 2), ((1, 1),), (10,), (LE,), upper=(None, 3)))
    assert out.value == 13
    assert out.solution == (7, 3)


def test_redundant_equalities():
    lp = LinearProgram((1, 0), ((1, 1), (2, 2)), (1, 2), (EQ, EQ))
    out = solve(lp)
    assert out.value == 1


def test_feasible_returns_a_point():
    ok, x = feasible([(1, 1), (1, -1)], [2, 0], [EQ, EQ])
    assert ok and x == (1, 1)
    assert feasible([(1,)], [-1], [EQ]) == (False, None)


def test_malformed_programs():
    with pytest.raises(ValueError):
        LinearProgram((1, 1), ((1,),), (1,), (LE,))
    with pytest.raises(ValueError):
        LinearProgram((1,), ((1,),), (1,), ("<",))


def test_size_guard():
    with guards.override(lp_constraints=1):
        with pytest.raises(guards.SizeGuardError):
            solve(LinearProgram((1,), ((1,), (1,)), (1, 2), (LE, LE)))


def test_duality_on_a_transport_problem():
    # primal: max c.x, A x <= b, x >= 0; dual: min b.y, A^T y >= c, y >= 0
    a = ((2, 1, 1), (1, 3, 2), (2, 1, 2))
    b = (4, 5, 6)
    c = (3, 2, 4)
    primal = solve(LinearProgram(c, a, b, (LE,) * 3))
    at = tuple(zip(*a))
    dual = solve(LinearProgram(b, at, c, (GE,) * 3, maximize=False))
    assert primal.value == dual.value


coef = st.integers(-3, 3)


@st.composite
def programs(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(1, 4))
    rows = tuple(tuple(draw(coef) for _ in range(n)) for _ in range(k))
    rhs = tuple(draw(st.integers(-4, 6)) for _ in range(k))
    senses = tuple(draw(st.sampled_from((LE, EQ, GE))) for _ in range(k))
    return LinearProgram(tuple(draw(coef) for _ in range(n)), rows, rhs, senses, draw(st.booleans()))


@settings(max_examples=300)
@given(programs())
def test_simplex_agrees_with_vertex_enumeration(lp):
    out = solve(lp)
    status, value = lp_by_vertices(lp)
    assert out.status == status
    if status == "optimal":
        assert out.value == value
        assert lp.satisfied_by(out.solution)


@settings(max_examples=100)
@given(programs())
def test_duality_on_random_programs(lp):
    # reduce to max c.x, A x <= b by splitting equalities and flipping >=
    rows, rhs = [], []
    for row, sense, b in lp.constraints():
        if sense in (LE, EQ):
            rows.append(row)
            rhs.append(b)
        if sense in (GE, EQ):
            rows.append(tuple(-v for v in row))
            rhs.append(-b)
    c = lp.objective if lp.maximize else tuple(-v for v in lp.objective)
    primal = solve(LinearProgram(c, tuple(rows), tuple(rhs), (LE,) * len(rows)))
    dual = solve(LinearProgram(tuple(rhs), tuple(zip(*rows)), c, (GE,) * len(c), maximize=False))
    if primal.optimal:
        assert dual.optimal and primal.value == dual.value
    elif primal.status == "unbounded":
        assert dual.status == "infeasible"


def test_random_programs_seeded():
    rng = random.Random(11)
    for _ in range(100):
        n, k = rng.randint(1, 4), rng.randint(1, 4)
        lp = LinearProgram(
            tuple(rng.randint(-3, 3) for _ in range(n)),
            tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(k)),
            tuple(rng.randint(-4, 6) for _ in range(k)),
            tuple(rng.choice((LE, EQ, GE)) for _ in range(k)),
            rng.random() < 0.5,
        )
        out = solve(lp)
        assert (out.status, out.value) == lp_by_vertices(lp)
