"""Command-line driver.

Exit codes for ``check``: 0 YES, 1 NO, 2 UNKNOWN.  Errors use 10 and up:
10 usage, 11 model syntax, 12 model semantics, 13 unsupported problem,
14 invalid arguments or lasso, 15 unreadable input, 20 a YES that failed
re-verification (never printed).
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import List, Optional, Tuple

from .decision import (Answer, Budget, Problem, Query, Verdict, certify, regular_average_Z,
                       regular_finite_value_Z, regular_neg_inf_Z, uniform_average_Z)
from .errors import LimAvgError, MisuseError, UnsupportedProblem, ValidityError
from .generators import parse_dimacs, random_vass, running_example, threesat_to_vass
from .model import CostFunction, Domain, Lasso, Vass, dot, path_summary
from .modelio import (ModelSemanticError, ModelSyntaxError, answer_document, dumps,
                      format_value, parse_model, parse_threshold, serialize_model)
from .natural import (reachability_to_average_N, regular_finite_value_N,
                      uniform_average_N)
from .semantics import lasso_value

EXIT = {Verdict.YES: 0, Verdict.NO: 1, Verdict.UNKNOWN: 2}
USAGE, SYNTAX, SEMANTIC, UNSUPPORTED, INVALID, UNREADABLE, UNVERIFIED = 10, 11, 12, 13, 14, 15, 20
PROBLEMS = ("regular-average", "regular-finite", "regular-neg-inf", "uniform-average")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(USAGE)


def _read(path: Optional[str]) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def decide(vass: Vass, cost: CostFunction, problem: str, threshold: Optional[Fraction],
           budget: Budget) -> Tuple[Answer, CostFunction, Problem]:
    """Route a problem to the procedure for its domain.

    Returns the answer together with the cost function and problem kind its
    witness must be certified against.
    """
    natural = vass.domain is Domain.NATURAL
    if problem == "uniform-average":
        if not cost.is_uniform:
            raise MisuseError("uniform-average needs the same cost vector in every state")
        a = cost.labels[0]
        ans = (uniform_average_N(vass, a, threshold, budget) if natural
               else uniform_average_Z(vass, a, threshold, budget))
        return ans, cost, Problem.REGULAR_AVERAGE
    kind = Problem(problem)
    q = Query(vass, cost, kind, threshold, budget)
    if kind is Problem.REGULAR_FINITE:
        return (regular_finite_value_N(q) if natural else regular_finite_value_Z(q)), cost, kind
    if kind is Problem.REGULAR_NEG_INF:
        if natural:
            return Answer(Verdict.NO, step="domain", budget=budget.as_dict(),
                          reason="over ℕ every cost is nonnegative"), cost, kind
        return regular_neg_inf_Z(q), cost, kind
    if natural:
        if cost.is_uniform and all(c > 0 for c in cost.labels[0]):
            return uniform_average_N(vass, cost.labels[0], threshold, budget), cost, kind
        raise UnsupportedProblem("regular-average over ℕ is only supported for uniform "
                                 "costs with positive coefficients")
    return regular_average_Z(q), cost, kind


def _check(args) -> int:
    lam = None
    if args.problem in ("regular-average", "uniform-average"):
        if args.threshold_ignored or args.threshold is None:
            raise _UsageError(f"{args.problem} needs --threshold")
        lam = parse_threshold(args.threshold)
    elif args.threshold is not None:
        raise _UsageError(f"{args.problem} takes no threshold; use --threshold-ignored")
    doc = parse_model(_read(args.input))
    budget = Budget(box_cap=args.box_cap, node_budget=args.node_budget,
                    reach_budget=args.reach_budget)
    ans, cost, kind = decide(doc.vass, doc.cost, args.problem, lam, budget)
    verified = False
    if ans.verdict is Verdict.YES:
        if ans.witness is None or certify(doc.vass, cost, ans.witness, kind, lam) is None:
            sys.stderr.write("internal error: YES answer failed re-verification\n")
            return UNVERIFIED
        verified = True
    out = answer_document(ans, doc.vass, verified)
    if args.json:
        sys.stdout.write(dumps(out))
    else:
        lines = [f"answer: {out['answer']}"]
        if out["value"] is not None:
            lines.append(f"value: {out['value']}")
        if out["witness"] is not None:
            lines.append("prefix: " + " ".join(out["witness"]["prefix"]))
            lines.append("cycle: " + " ".join(out["witness"]["cycle"]))
        lines.append(f"step: {out['step']}")
        if ans.reason:
            lines.append(f"reason: {ans.reason}")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT[ans.verdict]


def _eval_lasso(args) -> int:
    doc = parse_model(_read(args.input))
    vass, cost = doc.vass, doc.cost
    lasso = Lasso(vass.path_from_names(args.prefix.split()),
                  vass.path_from_names(args.cycle.split()))
    verdict = lasso_value(vass, cost, lasso)
    gain, vals = path_summary(vass, cost, lasso.cycle)
    if args.json:
        sys.stdout.write(dumps({"value": format_value(verdict.value),
                                "liminf": format_value(verdict.liminf),
                                "gain": list(gain), "vals": list(vals),
                                "dot": dot(gain, vals), "cycle_length": len(lasso.cycle)}))
    else:
        sys.stdout.write(format_value(verdict.value) + "\n")
    return 0


def _gen(args) -> int:
    if args.kind == "3sat":
        phi = parse_dimacs(_read(args.cnf))
        vass, cost, lam = threesat_to_vass(phi)
        note = f"3-SAT instance: {phi.num_vars} variables, {len(phi.clauses)} clauses; threshold {lam}"
    elif args.kind == "random":
        vass, cost = random_vass(args.states, args.transitions, args.dim,
                                 tuple(args.updates), tuple(args.coefs), args.seed,
                                 Domain(args.domain))
        note = f"random model, seed {args.seed}"
    else:
        vass, cost = running_example()
        note = "running example A_e"
    sys.stdout.write(serialize_model(vass, cost, note))
    return 0


def _transform(args) -> int:
    doc = parse_model(_read(args.input))
    vass, cost, lam = reachability_to_average_N(doc.vass, args.source, args.target)
    note = (f"reachability of ({args.target}, 0) from ({args.source}, 0) "
            f"as uniform-average at threshold {lam}")
    sys.stdout.write(serialize_model(vass, cost, note))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="limavg", description="Long-run average questions for VASS.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide a problem for a model")
    c.add_argument("--problem", required=True, choices=PROBLEMS)
    c.add_argument("--threshold", help="integer or p/q")
    c.add_argument("--threshold-ignored", action="store_true",
                   help="state explicitly that the problem has no threshold")
    c.add_argument("--input", help="model file; stdin when omitted or '-'")
    c.add_argument("--json", action="store_true")
    c.add_argument("--box-cap", type=int, default=Budget.box_cap)
    c.add_argument("--node-budget", type=int, default=Budget.node_budget)
    c.add_argument("--reach-budget", type=int, default=Budget.reach_budget)
    c.set_defaults(run=_check)

    e = sub.add_parser("eval-lasso", help="exact value of prefix·cycle^ω")
    e.add_argument("--input", help="model file; stdin when omitted or '-'")
    e.add_argument("--prefix", default="", help="space-separated transition names")
    e.add_argument("--cycle", required=True, help="space-separated transition names")
    e.add_argument("--json", action="store_true")
    e.set_defaults(run=_eval_lasso)

    g = sub.add_parser("gen", help="print a generated model")
    gsub = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    s = gsub.add_parser("3sat", help="hardness gadget for a DIMACS CNF")
    s.add_argument("--cnf", help="DIMACS file; stdin when omitted or '-'")
    r = gsub.add_parser("random", help="seeded random model")
    r.add_argument("--states", type=int, default=3)
    r.add_argument("--transitions", type=int, default=5)
    r.add_argument("--dim", type=int, default=2)
    r.add_argument("--updates", type=int, nargs=2, default=(-2, 2), metavar=("LO", "HI"))
    r.add_argument("--coefs", type=int, nargs=2, default=(0, 2), metavar=("LO", "HI"))
    r.add_argument("--domain", choices=("Z", "N"), default="Z")
    r.add_argument("--seed", type=int, default=0)
    gsub.add_parser("example-ae", help="the three-state running example")
    g.set_defaults(run=_gen)

    t = sub.add_parser("transform", help="model-to-model reductions")
    tsub = t.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    ra = tsub.add_parser("reach-to-avg", help="ℕ reachability as an average question")
    ra.add_argument("--input", help="model file; stdin when omitted or '-'")
    ra.add_argument("--source", required=True, help="state of the source (counters 0)")
    ra.add_argument("--target", required=True, help="state of the target (counters 0)")
    t.set_defaults(run=_transform)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, bad flags exit USAGE
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(message)s")
    try:
        return args.run(args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"limavg: error: {exc}\n")
        return USAGE
    except ModelSyntaxError as exc:
        sys.stderr.write(f"limavg: {exc}\n")
        return SYNTAX
    except ModelSemanticError as exc:
        sys.stderr.write(f"limavg: {exc}\n")
        return SEMANTIC
    except UnsupportedProblem as exc:
        sys.stderr.write(f"limavg: unsupported: {exc}\n")
        return UNSUPPORTED
    except (LimAvgError, ValueError) as exc:
        sys.stderr.write(f"limavg: invalid input: {exc}\n")
        return INVALID
    except OSError as exc:
        sys.stderr.write(f"limavg: cannot read input: {exc}\n")
        return UNREADABLE


if __name__ == "__main__":
    sys.exit(main())
