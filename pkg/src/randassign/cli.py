"""Command line interface.

Exit codes: 0 success (and every audited axiom holds), 1 an audited axiom
failed or the table disagrees with the published one, 2 parse/usage error,
3 size guard exceeded.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys
from pathlib import Path
from typing import Callable

from . import axioms as ax
from . import efficiency as ef, guards
from .compare import DEFAULT_AXIOMS, compare, sampled_compare, to_csv
from .core import Matrix, Problem, is_deterministic
from .formats import FORMATS, ParseError, fmt, jsonable, problem_to_dict, read_assignment, read_problem, render_matrix, render_problem
from .rules import RULES, get_rule, pr_trace, ps_trace, sampled_lottery, serial_dictatorship, simple_ia
from .search import ALIASES, AXIOMS, TABLE_RULES, TablePlan, axiom_check, search, table1

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_GUARD = 0, 1, 2, 3

OUTCOME_AXIOMS: dict[str, Callable[[Problem, Matrix], ax.AxiomVerdict]] = {
    "non-wastefulness": ax.non_wasteful,
    "equal-treatment-of-equals": ax.equal_treatment_of_equals,
    "weak-sd-envy-freeness": ax.weak_sd_envy_free,
    "sd-envy-freeness": ax.sd_envy_free,
    "equal-rank-envy-freeness": ax.equal_rank_envy_free,
    "sd-rank-fairness": ax.sd_rank_fair,
    "sd-efficiency": ef.sd_efficient_cycle_check,
    "sd-efficiency-lp": ef.sd_efficient_lp_oracle,
    "ex-post-efficiency": ef.ex_post_efficient_check,
    "rank-efficiency": ef.rank_efficient_check,
}
DETERMINISTIC_AXIOMS = {
    "favors-higher-ranks": ax.favors_higher_ranks,
    "pareto-efficiency": ef.pareto_efficient,
}
RULE_AXIOMS = ("weak-strategy-proofness", "strategy-proofness")
ORDERED_RULES = {"simple-ia": simple_ia, "sd": serial_dictatorship}


def _ordering(problem: Problem, text: str | None) -> list[str]:
    if not text:
        return list(problem.agents)
    return [s.strip() for s in text.split(",") if s.strip()]


def _assignment(args, problem: Problem) -> tuple[Matrix, Callable | None, dict]:
    if getattr(args, "assignment", None):
        return read_assignment(problem, args.assignment), None, {"assignment_file": str(args.assignment)}
    if args.rule in ORDERED_RULES:
        order = _ordering(problem, args.ordering)
        return ORDERED_RULES[args.rule](problem, order), None, {"rule": args.rule, "ordering": order}
    rule = get_rule(args.rule)
    return rule(problem), rule, {"rule": args.rule}


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_trace(problem: Problem, trace, style: str) -> str:
    lines = []
    for st in trace:
        head = f"stage {st.stage}"
        if st.interval:
            head += f" [t={fmt(st.interval[0], style)} .. {fmt(st.interval[1], style)}]"
        parts = []
        for a, group in st.eaters.items():
            who = ",".join(problem.agents[i] for i in group)
            parts.append(
                f"{problem.objects[a]} <- {who} (residual {fmt(st.residual_before[a], style)} -> {fmt(st.residual_after[a], style)})"
            )
        got = " ".join(f"{problem.agents[i]}:{fmt(x, style)}" for i, x in enumerate(st.consumed) if x)
        lines.append(f"{head}: {'; '.join(parts) or 'nobody eats'} | consumed {got or 'nothing'}")
    return "\n".join(lines) + "\n"


def cmd_run(args) -> int:
    problem = read_problem(args.problem)
    style = args.format
    text = ""
    if args.sample:
        if args.rule not in ("ria", "rsd"):
            raise ParseError("--sample applies to ria and rsd only", "--sample")
        matrix = sampled_lottery(problem, args.rule, args.sample, args.seed)
        text += f"# ESTIMATE: {args.rule} averaged over {args.sample} sampled orderings (seed {args.seed}), not the exact rule\n"
    elif args.trace and args.rule in ("pr", "ps"):
        matrix, trace = (pr_trace if args.rule == "pr" else ps_trace)(problem)
        text += _render_trace(problem, trace, style) + "\n"
    else:
        matrix, _, _ = _assignment(args, problem)
    if style != "fractions":
        text += "# decimals are rounded renderings of exact fractions\n"
    text += render_matrix(problem, matrix, style)
    _emit(text, args.output)
    return EXIT_OK


def _selected(names: str, available: list[str]) -> list[str]:
    if names == "all":
        return available
    out = []
    for name in (s.strip() for s in names.split(",")):
        if not name:
            continue
        name = ALIASES.get(name, name)
        if name not in OUTCOME_AXIOMS and name not in DETERMINISTIC_AXIOMS and name not in RULE_AXIOMS:
            raise ParseError(f"unknown axiom {name!r}", "--axioms")
        out.append(name)
    return out


def audit_report(problem: Problem, matrix: Matrix, rule: Callable | None, source: dict, names: str, style: str) -> dict:
    available = list(OUTCOME_AXIOMS)
    if is_deterministic(matrix):
        available += list(DETERMINISTIC_AXIOMS)
    if rule is not None:
        available += list(RULE_AXIOMS)
    verdicts = []
    for name in _selected(names, available):
        if name in RULE_AXIOMS:
            if rule is None:
                raise ParseError(f"{name} needs --rule", "--axioms")
            v = AXIOMS[name](problem, rule, matrix)
        elif name in DETERMINISTIC_AXIOMS:
            if not is_deterministic(matrix):
                raise ParseError(f"{name} applies to deterministic assignments only", "--axioms")
            v = DETERMINISTIC_AXIOMS[name](problem, matrix)
        else:
            v = OUTCOME_AXIOMS[name](problem, matrix)
        verdicts.append({"axiom": name, "holds": v.holds, "witness": jsonable(v.witness)})
    report = {
        "problem": problem_to_dict(problem),
        "source": source,
        "assignment": jsonable(matrix),
    }
    if style != "fractions":
        report["assignment_decimal"] = [[fmt(x, "decimal") for x in row] for row in matrix]
    report["rank_distribution"] = jsonable(ef.rank_distribution(problem, matrix))
    report["verdicts"] = verdicts
    report["all_hold"] = all(v["holds"] for v in verdicts)
    return report


def cmd_audit(args) -> int:
    problem = read_problem(args.problem)
    if not args.assignment and not args.rule:
        raise ParseError("give --rule or --assignment", "audit")
    matrix, rule, source = _assignment(args, problem)
    report = audit_report(problem, matrix, rule, source, args.axioms, args.format)
    _emit(json.dumps(report, indent=2, ensure_ascii=False) + "\n", args.output)
    if not args.output:
        for v in report["verdicts"]:
            print(f"# {'PASS' if v['holds'] else 'FAIL'} {v['axiom']}", file=sys.stderr)
    return EXIT_OK if report["all_hold"] else EXIT_FAIL


def cmd_search(args) -> int:
    axiom_check(args.axiom)
    res = search(
        args.rule,
        args.axiom,
        args.max_agents,
        args.max_objects,
        args.quotas,
        args.mode,
        seed=args.seed,
        samples=args.samples,
        jobs=args.jobs,
    )
    out = {
        "rule": res.rule,
        "axiom": res.axiom,
        "bounds": res.bounds,
        "examined": res.examined,
        "found": res.found,
        "problem": problem_to_dict(res.problem) if res.found else None,
        "witness": jsonable(res.verdict.witness) if res.found else None,
    }
    if res.found and args.save:
        Path(args.save).write_text(render_problem(res.problem), encoding="utf-8")
    _emit(json.dumps(out, indent=2, ensure_ascii=False) + "\n", args.output)
    return EXIT_OK


def _table_csv(cells) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["axiom", "rule", "satisfied", "reported", "matches", "evidence_bounds", "examined"])
    for c in cells:
        w.writerow([c.axiom, c.rule, int(c.satisfied), int(c.reported), int(c.matches), c.evidence.bounds, sum(s.examined for s in c.searches)])
    return buf.getvalue()


def render_table(cells, rules=TABLE_RULES) -> str:
    lookup = {(c.axiom, c.rule): c for c in cells}
    axioms = list(dict.fromkeys(c.axiom for c in cells))
    width = max(len(a) for a in axioms) + 2
    lines = ["axiom".ljust(width) + "".join(r.upper().center(6) for r in rules)]
    for a in axioms:
        marks = []
        for r in rules:
            c = lookup[(a, r)]
            mark = ("✓" if c.satisfied else "✗") + ("" if c.matches else "!")
            marks.append(mark.center(6))
        lines.append(a.ljust(width) + "".join(marks))
    return "\n".join(lines) + "\n"


def cmd_table1(args) -> int:
    plan = TablePlan(
        max_agents=args.max_agents,
        max_objects=args.max_objects,
        max_quota=args.max_quota,
        random_agents=args.random_agents,
        random_objects=args.random_objects,
        random_samples=args.random_samples,
        seed=args.seed,
    )

    def progress(cell):
        if args.verbose:
            print(f"# {cell.axiom} / {cell.rule}: {'✓' if cell.satisfied else '✗'} ({cell.evidence.bounds})", file=sys.stderr)

    cells = table1(plan, jobs=args.jobs, progress=progress)
    text = render_table(cells)
    text += (
        f"# ✓: no counterexample in the exhaustive corpus n<={plan.max_agents}, m<={plan.max_objects}, quotas<={plan.max_quota}"
        f" nor in {plan.random_samples} random {plan.random_agents}x{plan.random_objects} problems per quota bound {list(plan.random_quotas)}\n"
        "# ✗: counterexample found; '!' marks disagreement with the published table\n"
    )
    mismatches = [c for c in cells if not c.matches]
    text += f"# {len(cells) - len(mismatches)}/{len(cells)} cells agree with the published table\n"
    sys.stdout.write(text)
    if args.output:
        Path(args.output).write_text(_table_csv(cells), encoding="utf-8")
    if args.figure:
        from .plotting import axiom_table_figure

        axiom_table_figure(cells, TABLE_RULES, list(AXIOMS), args.figure)
    return EXIT_OK if not mismatches else EXIT_FAIL


def cmd_compare(args) -> int:
    rules = [r.strip() for r in args.rules.split(",") if r.strip()]
    for r in rules:
        get_rule(r)
    axioms = [a.strip() for a in args.axioms.split(",") if a.strip()] if args.axioms else list(DEFAULT_AXIOMS)
    if args.problem:
        summaries = compare(rules, [read_problem(args.problem)], axioms)
    else:
        summaries = sampled_compare(rules, args.samples, args.agents, args.objects, args.seed, args.max_quota, axioms)
    text = "# mean_N_k is a decimal rendering of an exact average\n" + to_csv(summaries)
    _emit(text, args.output)
    if args.figure:
        from .plotting import rank_distribution_figure

        title = f"{summaries[0].samples} problem(s), seed {args.seed}" if summaries else ""
        rank_distribution_figure({s.rule: s.mean for s in summaries}, args.figure, title)
    return EXIT_OK


def _global_options(parser: argparse.ArgumentParser, defaults: bool) -> None:
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--format", choices=FORMATS, default=d("fractions"), help="rendering of shares")
    parser.add_argument("--guard-agents", type=int, default=d(None), help="cap on agents for enumeration and oracles")
    parser.add_argument("--guard-objects", type=int, default=d(None), help="cap on objects for oracles and misreports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randassign", description="Random assignment rules and axiom audits.")
    _global_options(parser, True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, False)
    sub = parser.add_subparsers(dest="command", required=True)
    all_rules = [*RULES, *ORDERED_RULES]

    p = sub.add_parser("run", parents=[common], help="apply a rule to a problem file")
    p.add_argument("problem")
    p.add_argument("--rule", required=True, choices=all_rules)
    p.add_argument("--ordering", help="comma-separated agent ids, highest priority first (simple-ia, sd)")
    p.add_argument("--trace", action="store_true", help="print the eating stages (pr, ps)")
    p.add_argument("--sample", type=int, metavar="N", help="ria/rsd: estimate from N random orderings instead of all n!")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("audit", parents=[common], help="check axioms on one assignment")
    p.add_argument("problem")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--rule", choices=all_rules)
    src.add_argument("--assignment", help="assignment file (JSON)")
    p.add_argument("--ordering")
    p.add_argument("--axioms", default="all", help="'all' or a comma-separated list")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("search", parents=[common], help="look for a counterexample to a rule-level axiom")
    p.add_argument("--rule", required=True, choices=list(RULES))
    p.add_argument("--axiom", required=True)
    p.add_argument("--max-agents", type=int, default=3)
    p.add_argument("--max-objects", type=int, default=3)
    p.add_argument("--quotas", type=int, default=1, help="largest quota per object")
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--save", help="write the counterexample problem to this file")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table1", parents=[common], help="reproduce the rules-by-axioms table")
    p.add_argument("--max-agents", type=int, default=3)
    p.add_argument("--max-objects", type=int, default=3)
    p.add_argument("--max-quota", type=int, default=2)
    p.add_argument("--random-agents", type=int, default=4)
    p.add_argument("--random-objects", type=int, default=4)
    p.add_argument("--random-samples", type=int, default=300)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", "-o", help="CSV with one line per cell")
    p.add_argument("--figure", help="PNG rendering of the table")
    p.add_argument("--verbose", "-v", action="store_true")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("compare", parents=[common], help="average rank distributions over sampled problems")
    p.add_argument("--rules", default="pr,ria,ps,rsd")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--agents", type=int, default=4)
    p.add_argument("--objects", type=int, default=4)
    p.add_argument("--max-quota", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--axioms", help=f"comma-separated (default {','.join(DEFAULT_AXIOMS)})")
    p.add_argument("--problem", help="use this problem file instead of sampling")
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.add_argument("--figure", help="PNG of the mean rank distributions")
    p.set_defaults(func=cmd_compare)
    return parser


def _guard_context(args):
    changes = {}
    if args.guard_agents is not None:
        changes.update(enum_agents=args.guard_agents, oracle_agents=args.guard_agents)
    if args.guard_objects is not None:
        changes.update(oracle_objects=args.guard_objects, manipulation_objects=args.guard_objects)
    return guards.override(**changes) if changes else contextlib.nullcontext()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _guard_context(args):
            return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except guards.SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        if args.command in ("run", "audit"):
            print("hint: raise --guard-agents/--guard-objects, or use `run --sample N` for a sampled ria/rsd estimate", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
