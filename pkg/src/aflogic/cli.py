"""Command-line front end.

Output is deterministic given the inputs and --seed.  Exit codes: 0 on a
completed run, 2 on usage or input errors, 3 when a normal-form conversion
gives up, 4 when the node budget runs out.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import bisim
from .action import (action_model_dot, action_model_from_json,
                     action_model_to_json, execute)
from .budget import Budget, ResourceExhausted
from .check import check, check_via_reduction, eval_basic
from .correspond import correspond
from .frames import FrameClass
from .kripke import export_dot, model_from_json, model_to_json
from .normform import NotConverted, to_adnf, to_dnf, to_explicit
from .reduction import reduce_formula
from .synth import synthesize, verify_synthesis
from .syntax import (ParseError, infer_agents, parse_action, parse_formula,
                     print_action, print_formula)
from .tau import tau


class _InputError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="aflogic",
                                  description="Action formula logic toolkit")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--out", help="write output to a file instead of stdout")
        p.add_argument("--budget", type=int, help="node budget for heavy operations")
        return p

    def add_class(p, required=True):
        p.add_argument("--class", dest="cls", required=required,
                       choices=["k", "k45", "s5"], help="frame class")

    def add_agents(p):
        p.add_argument("--agents", help="comma-separated agent vocabulary "
                                        "(default: inferred from the input text)")

    p = add("parse", help="parse a formula or action and print it back")
    p.add_argument("--formula")
    p.add_argument("--action")
    add_agents(p)

    p = add("check", help="model-check a formula")
    p.add_argument("--model", required=True)
    add_class(p)
    p.add_argument("--formula", required=True)
    p.add_argument("--via-reduction", action="store_true",
                   help="evaluate through the reduction instead of the semantics")

    p = add("reduce", help="rewrite a formula to an equivalent basic one")
    add_class(p)
    p.add_argument("--formula", required=True)
    add_agents(p)

    p = add("tau", help="translate an action formula into an action model")
    add_class(p)
    p.add_argument("--action", required=True)
    add_agents(p)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = add("exec", help="execute an action on a model")
    p.add_argument("--model", required=True)
    add_class(p)
    p.add_argument("--action", help="action formula text")
    p.add_argument("--action-model", help="action model file")
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = add("bisim", help="bisimilarity of two pointed models")
    p.add_argument("--model", action="append", default=[],
                   help="model file (give twice)")
    p.add_argument("--action-model", action="append", default=[],
                   help="action model file (give twice)")
    add_class(p, required=False)
    p.add_argument("--point", action="append", default=[],
                   help="designated point override, first for each model")
    p.add_argument("--n", type=int, help="bound the bisimulation depth")
    p.add_argument("--agents-b", help="comma-separated group for B-bisimilarity")

    p = add("valid", help="decide validity of a basic formula")
    add_class(p)
    p.add_argument("--formula", required=True)
    add_agents(p)

    for name, blurb in (("dnf", "disjunctive normal form (K)"),
                        ("adnf", "alternating disjunctive normal form (K45)"),
                        ("explicit", "disjunction of explicit formulae (S5)")):
        p = add(name, help=blurb)
        p.add_argument("--formula", required=True)
        add_agents(p)

    p = add("correspond", help="action formula n-bisimilar to an action model")
    p.add_argument("--action-model", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--depth", type=int, required=True)
    add_class(p)

    p = add("synth", help="synthesise an action achieving a goal")
    add_class(p)
    p.add_argument("--goal", required=True)
    add_agents(p)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    return top


def _agents_for(args, *texts) -> List[str]:
    if getattr(args, "agents", None):
        return sorted({a.strip() for a in args.agents.split(",") if a.strip()})
    inferred = set()
    for text in texts:
        if text:
            inferred |= infer_agents(text)
    return sorted(inferred) or ["a"]


def _load_model(path: str):
    try:
        with open(path) as handle:
            return model_from_json(handle.read())
    except OSError as exc:
        raise _InputError(f"cannot read model {path!r}: {exc}") from exc
    except ValueError as exc:
        raise _InputError(f"bad model {path!r}: {exc}") from exc


def _load_action_model(path: str):
    try:
        with open(path) as handle:
            return action_model_from_json(handle.read())
    except OSError as exc:
        raise _InputError(f"cannot read action model {path!r}: {exc}") from exc
    except ValueError as exc:
        raise _InputError(f"bad action model {path!r}: {exc}") from exc


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _run(args) -> int:
    budget = Budget(args.budget) if args.budget else None
    cls = FrameClass.from_string(args.cls) if getattr(args, "cls", None) else None

    if args.command == "parse":
        if (args.formula is None) == (args.action is None):
            raise _InputError("give exactly one of --formula or --action")
        if args.formula is not None:
            agents = _agents_for(args, args.formula)
            _emit(args, print_formula(parse_formula(args.formula, agents)))
        else:
            agents = _agents_for(args, args.action)
            _emit(args, print_action(parse_action(args.action, agents)))
        return 0

    if args.command == "check":
        pm = _load_model(args.model)
        f = parse_formula(args.formula, sorted(pm.model.agents))
        fn = check_via_reduction if args.via_reduction else check
        _emit(args, "true" if fn(pm, f, cls, budget) else "false")
        return 0

    if args.command == "reduce":
        agents = _agents_for(args, args.formula)
        f = parse_formula(args.formula, agents)
        _emit(args, print_formula(reduce_formula(f, cls, budget, agents=agents)))
        return 0

    if args.command == "tau":
        agents = _agents_for(args, args.action)
        action = parse_action(args.action, agents)
        pam = tau(action, cls, agents, budget)
        render = action_model_dot if args.format == "dot" else action_model_to_json
        _emit(args, render(pam))
        return 0

    if args.command == "exec":
        pm = _load_model(args.model)
        if (args.action is None) == (args.action_model is None):
            raise _InputError("give exactly one of --action or --action-model")
        if args.action is not None:
            action = parse_action(args.action, sorted(pm.model.agents))
            pam = tau(action, cls, sorted(pm.model.agents), budget)
        else:
            pam = _load_action_model(args.action_model)
        result = execute(pm, pam, sat=lambda s, pre: check(pm.at(s), pre, cls, budget))
        render = export_dot if args.format == "dot" else model_to_json
        _emit(args, render(result))
        return 0

    if args.command == "bisim":
        return _run_bisim(args, cls, budget)

    if args.command == "valid":
        agents = _agents_for(args, args.formula)
        f = parse_formula(args.formula, agents)
        from . import prover
        _emit(args, "true" if prover.valid(f, cls, budget) else "false")
        return 0

    if args.command in ("dnf", "adnf", "explicit"):
        agents = _agents_for(args, args.formula)
        f = parse_formula(args.formula, agents)
        if args.command == "dnf":
            out = to_dnf(f, budget).to_formula()
        elif args.command == "adnf":
            out = to_adnf(f, budget).to_formula()
        else:
            out = to_explicit(f, budget).to_formula()
        _emit(args, print_formula(out))
        return 0

    if args.command == "correspond":
        pam = _load_action_model(args.action_model)
        alpha = correspond(pam.at(args.point), args.depth, cls, budget)
        _emit(args, print_action(alpha))
        return 0

    if args.command == "synth":
        agents = _agents_for(args, args.goal)
        goal = parse_formula(args.goal, agents)
        alpha = synthesize(goal, cls, budget)
        lines = [print_action(alpha)]
        if args.verify:
            report = verify_synthesis(goal, alpha, cls, args.trials, args.seed, budget)
            lines.append(f"{len(report.counterexamples)} counterexamples")
            if not report.ok:
                lines.append(report.render())
        _emit(args, "\n".join(lines))
        return 0

    raise _InputError(f"unknown command {args.command!r}")


def _run_bisim(args, cls, budget) -> int:
    if args.model and args.action_model:
        raise _InputError("give either two --model files or two --action-model files")
    if args.action_model:
        if len(args.action_model) != 2:
            raise _InputError("give --action-model twice")
        if cls is None:
            raise _InputError("--class is required for action-model bisimilarity")
        pams = [_load_action_model(p) for p in args.action_model]
        if args.point:
            if len(args.point) != 2:
                raise _InputError("give --point twice (once per model)")
            pams = [pam.at(p) for pam, p in zip(pams, args.point)]
        if args.n is not None:
            result = bisim.am_n_bisimilar(pams[0], pams[1], args.n, cls, budget)
        else:
            result = bisim.am_bisimilar(pams[0], pams[1], cls, budget)
    else:
        if len(args.model) != 2:
            raise _InputError("give --model twice")
        pms = [_load_model(p) for p in args.model]
        if args.point:
            if len(args.point) != 2:
                raise _InputError("give --point twice (once per model)")
            pms = [pm.at(p) for pm, p in zip(pms, args.point)]
        if args.agents_b is not None:
            group = [a.strip() for a in args.agents_b.split(",") if a.strip()]
            result = bisim.b_bisimilar(pms[0], pms[1], group)
        elif args.n is not None:
            result = bisim.n_bisimilar(pms[0], pms[1], args.n)
        else:
            result = bisim.bisimilar(pms[0], pms[1])
    _emit(args, "true" if result else "false")
    return 0


def run(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _run(args)
    except NotConverted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (_InputError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
