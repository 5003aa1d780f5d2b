"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`fractions.Fraction` using
Bland's rule, so it cannot cycle.  Sized for the small transportation-type
programs the efficiency oracles build; no factorisation tricks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import guards
from .core import ZERO

LE, EQ, GE = "<=", "=", ">="


@dataclass(frozen=True)
class LinearProgram:
    """``objective . x`` subject to ``rows[r] . x  senses[r]  rhs[r]`` and ``x >= 0``.

    ``upper`` optionally bounds variables from above (``None`` entries are free).
    """

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...] = ()
    rhs: tuple[Fraction, ...] = ()
    senses: tuple[str, ...] = ()
    maximize: bool = True
    upper: tuple[Fraction | None, ...] | None = None

    def __post_init__(self):
        conv = lambda xs: tuple(Fraction(x) for x in xs)
        object.__setattr__(self, "objective", conv(self.objective))
        object.__setattr__(self, "rows", tuple(conv(r) for r in self.rows))
        object.__setattr__(self, "rhs", conv(self.rhs))
        object.__setattr__(self, "senses", tuple(self.senses))
        n = len(self.objective)
        if not len(self.rows) == len(self.rhs) == len(self.senses):
            raise ValueError("rows, rhs and senses must have equal length")
        if any(len(r) != n for r in self.rows):
            raise ValueError(f"every constraint row needs {n} coefficients")
        if any(s not in (LE, EQ, GE) for s in self.senses):
            raise ValueError(f"senses must be one of {LE!r}, {EQ!r}, {GE!r}")
        if self.upper is not None:
            if len(self.upper) != n:
                raise ValueError("upper bounds need one entry per variable")
            object.__setattr__(self, "upper", tuple(None if u is None else Fraction(u) for u in self.upper))

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def constraints(self) -> list[tuple[tuple[Fraction, ...], str, Fraction]]:
        out = list(zip(self.rows, self.senses, self.rhs))
        for j, u in enumerate(self.upper or ()):
            if u is not None:
                out.append((tuple(Fraction(int(k == j)) for k in range(self.num_variables)), LE, u))
        return out

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in x):
            return False
        for row, sense, b in self.constraints():
            lhs = sum((a * v for a, v in zip(row, x) if a), ZERO)
            if (sense == LE and lhs > b) or (sense == GE and lhs < b) or (sense == EQ and lhs != b):
                return False
        return True


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    solution: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


@dataclass
class _Tableau:
    rows: list[list[Fraction]]  # last entry of each row is the rhs
    basis: list[int]
    z: list[Fraction] = field(default_factory=list)  # reduced costs, last entry = -objective value

    def pivot(self, r: int, j: int) -> None:
        prow = self.rows[r]
        p = prow[j]
        if p != 1:
            prow = [x / p if x else x for x in prow]
            self.rows[r] = prow
        nz = [k for k, x in enumerate(prow) if x]
        for s, row in enumerate(self.rows):
            if s != r and row[j]:
                f = row[j]
                for k in nz:
                    row[k] -= f * prow[k]
        if self.z[j]:
            f = self.z[j]
            for k in nz:
                self.z[k] -= f * prow[k]
        self.basis[r] = j

    def run(self, allowed: int) -> str:
        """Maximise with Bland's rule over columns ``< allowed``."""
        while True:
            j = next((k for k in range(allowed) if self.z[k] > 0), None)
            if j is None:
                return "optimal"
            best = None
            for r, row in enumerate(self.rows):
                if row[j] > 0:
                    ratio = row[-1] / row[j]
                    if best is None or ratio < best[0] or (ratio == best[0] and self.basis[r] < self.basis[best[1]]):
                        best = (ratio, r)
            if best is None:
                return "unbounded"
            self.pivot(best[1], j)

    def set_costs(self, cost: Sequence[Fraction]) -> None:
        width = len(self.rows[0]) if self.rows else len(cost) + 1
        z = list(cost) + [ZERO] * (width - len(cost))
        for r, b in enumerate(self.basis):
            cb = cost[b] if b < len(cost) else ZERO
            if cb:
                for k, x in enumerate(self.rows[r]):
                    if x:
                        z[k] -= cb * x
        self.z = z


def solve(lp: LinearProgram) -> LpOutcome:
    """Solve ``lp`` exactly; the returned solution satisfies every constraint."""
    cons = lp.constraints()
    g = guards.current()
    guards.check(lp.num_variables, g.lp_variables, "LP variables")
    guards.check(len(cons), g.lp_constraints, "LP constraints")

    n = lp.num_variables
    norm = []
    for row, sense, b in cons:
        if b < 0:
            row, b = tuple(-a for a in row), -b
            sense = {LE: GE, GE: LE, EQ: EQ}[sense]
        norm.append((row, sense, b))
    n_slack = sum(1 for _, s, _ in norm if s != EQ)
    n_art = sum(1 for _, s, _ in norm if s != LE)
    width = n + n_slack + n_art
    rows, basis = [], []
    slack, art = n, n + n_slack
    for row, sense, b in norm:
        t = list(row) + [ZERO] * (n_slack + n_art) + [b]
        if sense == LE:
            t[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        else:
            if sense == GE:
                t[slack] = Fraction(-1)
                slack += 1
            t[art] = Fraction(1)
            basis.append(art)
            art += 1
        rows.append(t)
    tab = _Tableau(rows, basis)
    first_art = n + n_slack

    if n_art:
        tab.set_costs([ZERO] * first_art + [Fraction(-1)] * n_art)
        tab.run(width)
        if tab.z[-1] != 0:  # phase-one optimum is minus the residual infeasibility
            return LpOutcome("infeasible")
        for r in range(len(tab.rows) - 1, -1, -1):
            if tab.basis[r] >= first_art:
                j = next((k for k in range(first_art) if tab.rows[r][k]), None)
                if j is None:
                    del tab.rows[r]  # redundant equality
                    del tab.basis[r]
                else:
                    tab.pivot(r, j)
        # drop artificial columns
        tab.rows = [row[:first_art] + row[-1:] for row in tab.rows]

    sign = 1 if lp.maximize else -1
    cost = [sign * c for c in lp.objective]
    tab.set_costs(cost + [ZERO] * n_slack)
    if tab.run(first_art) == "unbounded":
        return LpOutcome("unbounded")
    x = [ZERO] * n
    for r, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rows[r][-1]
    value = sum((c * v for c, v in zip(lp.objective, x) if c), ZERO)
    return LpOutcome("optimal", value, tuple(x))


def feasible(
    rows: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    senses: Sequence[str],
    num_variables: int | None = None,
) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Phase-one feasibility: ``(True, point)`` or ``(False, None)``."""
    if num_variables is None:
        num_variables = len(rows[0]) if rows else 0
    lp = LinearProgram((ZERO,) * num_variables, tuple(map(tuple, rows)), tuple(rhs), tuple(senses))
    out = solve(lp)
    return (True, out.solution) if out.optimal else (False, None)
