"""Command line entry point.

Exit codes: 0 success or equivalent, 1 no answer or no verdict, 2 usage
or parse error, 3 separated or mismatch.
"""
from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from .causality import causal_refute, linearizations, replay
from .engine import (ResolutionMode, answer_lines, correspondence_check, sld_derivations,
                     sld_refute, tile_refute)
from .laws import check_laws
from .random_gen import random_goal_for
from .semantics import (bisim_equiv, closure_equiv, op1_least_herbrand, op2_correct_answers,
                        op3_computed_answers, op4_resolvents, trace_equiv)
from .syntax import (App, Goal, Program, SignatureError, SyntaxErrorAt, atom_str, goal_str,
                     parse_goal, parse_program, parse_term, substitute)
from .theory import Arrow, Ph, arrow_str, term_arrow
from .tiles import proof_lines, synthesize_pullback
from .unify import pullback_oracle

OK, NONE, USAGE, DIFFERENT = 0, 1, 2, 3


@dataclass(frozen=True)
class Config:
    derivation: int = 8
    term: int = 3
    proof: int = 6
    instance: int = 2
    cap: int = 64
    mode: str = "mgu"
    format: str = "text"

    def __post_init__(self):
        for name in ("derivation", "term", "proof", "instance", "cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"--{name} must be positive")


def _config(args) -> Config:
    return Config(args.depth_derivation, args.depth_term, args.depth_proof,
                  args.depth_instance, args.cap, args.mode, args.format)


def _read_program(path: str) -> Program:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return parse_program(text)


def _goal(text: str, program: Program) -> Goal:
    text = text.strip()
    if not text.startswith("?-"):
        text = "?- " + text
    if not text.endswith("."):
        text += "."
    return parse_goal(text, program.signature)


def _instance(goal: Goal, ans) -> str:
    """The answer as the instantiated goal, which parses back with the
    original goal as pattern."""
    return goal_str(Goal(tuple(substitute(a, ans.as_dict()) for a in goal.atoms)))


def _print_answers(goal, answers, cfg: Config, label: str = "") -> None:
    if cfg.format == "lines":
        if label:
            print(f"engine {label}")
        for a in answers:
            print(f"answer {_instance(goal, a)}")
        print(f"complete {str(answers.complete).lower()}")
        return
    if label:
        print(f"% {label}")
    if not len(answers):
        print("no.")
    for a in answers:
        print(answer_lines(a))
    if not answers.complete:
        print(f"% search cut at {cfg.derivation} steps; more answers may exist")


# ------------------------------------------------------------ commands

def cmd_run(args) -> int:
    cfg = _config(args)
    p = _read_program(args.program)
    g = _goal(args.goal, p)
    mode = ResolutionMode(cfg.mode)
    results = {}
    if args.engine in ("sld", "both"):
        results["sld"] = sld_refute(g, p, mode, cfg.derivation, cfg.term)
    if args.engine in ("tile", "both"):
        if mode is not ResolutionMode.MGU:
            print("the tile engine computes most general answers only", file=sys.stderr)
            return USAGE
        results["tile"] = tile_refute(g, p, cfg.derivation).answers
    if args.engine == "both" and not results["sld"].same_answers(results["tile"]):
        for name, ans in results.items():
            _print_answers(g, ans, cfg, name)
        print("engines disagree", file=sys.stderr)
        return DIFFERENT
    answers = next(iter(results.values()))
    _print_answers(g, answers, cfg)
    return OK if len(answers) else NONE


def _elide(lines: list, depth: int) -> list:
    out = []
    for line in lines:
        indent = (len(line) - len(line.lstrip(" "))) // 2
        if indent < depth:
            out.append(line)
        elif indent == depth:
            out.append("  " * depth + "...")
    return [l for i, l in enumerate(out) if not (l.strip() == "..." and i and out[i - 1] == l)]


def cmd_trace(args) -> int:
    cfg = _config(args)
    p = _read_program(args.program)
    g = _goal(args.goal, p)
    found = 0
    if args.engine in ("sld", "both"):
        mode = ResolutionMode(cfg.mode)
        for k, d in enumerate(sld_derivations(g, p, mode, cfg.derivation, cfg.term), 1):
            found += 1
            print(f"refutation sld {k} answer {d.answer}")
            for i, s in enumerate(d.steps, 1):
                print(f"step {i} mode={mode.value} clause={s.clause} "
                      f"unifier={s.substitution} goal={goal_str(s.goal)}")
    if args.engine in ("tile", "both"):
        for k, r in enumerate(tile_refute(g, p, cfg.derivation).refutations, 1):
            found += 1
            print(f"refutation tile {k} answer {r.answer}")
            for i, step in enumerate(r.clauses, 1):
                used = ",".join(f"{c}@{pos}" for pos, c in step)
                print(f"step {i} clauses={used}")
            print(f"border {r.tile.border_str()}")
            for line in _elide(proof_lines(r.proof), cfg.proof):
                print("proof " + line)
    if not found:
        print("no.")
    return OK if found else NONE


def cmd_compare(args) -> int:
    cfg = _config(args)
    p = _read_program(args.program)
    goals = [_goal(t, p) for t in args.goals]
    rng = random.Random(args.seed)
    goals += [random_goal_for(rng, p) for _ in range(args.random)]
    if not goals:
        print("no goals to compare", file=sys.stderr)
        return USAGE
    failed = 0
    for g in goals:
        r = correspondence_check(p, g, cfg.derivation)
        failed += not r.passed
        if cfg.format == "lines":
            print(f"{'pass' if r.passed else 'fail'} {goal_str(g)}")
        else:
            print(r)
    print(f"{'PASS' if not failed else 'FAIL'} {len(goals) - failed}/{len(goals)}")
    return DIFFERENT if failed else OK


def cmd_equiv(args) -> int:
    cfg = _config(args)
    p = _read_program(args.program)
    g1, g2 = _goal(args.left, p), _goal(args.right, p)
    if args.rel == "trace":
        r = trace_equiv(g1, g2, p, cfg.derivation)
    elif args.rel == "bisim":
        r = bisim_equiv(g1, g2, p, args.k)
    else:
        r = closure_equiv(g1, g2, p, args.rel, cfg.instance, cfg.derivation)
    if cfg.format == "lines":
        print(f"relation {r.relation}")
        print(f"verdict {r.verdict}")
        print(f"truncated {str(r.truncated).lower()}")
        if r.witness_goal:
            print(f"witness {r.witness_goal}")
        elif r.witness:
            print(f"witness {r.witness}")
    else:
        print(r)
        if r.detail:
            print(f"% {r.detail}")
    return {"equivalent": OK, "separated": DIFFERENT}.get(r.verdict, NONE)


def cmd_causality(args) -> int:
    cfg = _config(args)
    p = _read_program(args.program)
    g = _goal(args.goal, p)
    refs = causal_refute(g, p, cfg.derivation)
    if not refs:
        print("no.")
        return NONE
    bad = 0
    for k, r in enumerate(refs, 1):
        print(f"refutation {k} answer {r.answer}")
        print(r.forest)
        sched = linearizations(r.forest, cfg.cap)
        for s in sched:
            got = replay(s, g, p)
            ok = got == r.answer
            bad += not ok
            print(f"  {'ok' if ok else 'MISMATCH'} {s} -> {got}")
        if not sched.exhaustive:
            print(f"  % schedules capped at {cfg.cap}")
    return DIFFERENT if bad else OK


def cmd_axioms(args) -> int:
    r = check_laws(args.trials, args.seed)
    for name, lhs, rhs in r.failures:
        print(f"FAIL {name}: {lhs} vs {rhs}")
    print(f"{'PASS' if r.passed else 'FAIL'} laws x {args.trials} trials, exchange x 100 (seed {args.seed})")
    return OK if r.passed else DIFFERENT


def _arrow(text: str) -> Arrow:
    """``"x1, f(x2)"``: comma-separated terms over placeholders ``x<i>``."""
    def conv(t):
        if isinstance(t, App):
            if not t.args and t.functor[:1] == "x" and t.functor[1:].isdigit():
                return Ph(int(t.functor[1:]))
            return App(t.functor, tuple(conv(a) for a in t.args))
        raise ValueError("arrows use placeholders x1, x2, .. instead of variables")

    text = text.strip()
    terms = conv(parse_term(f"w({text})")).args if text else ()
    n = max((ph.index for ph in _phs(terms)), default=0)
    return term_arrow(n, *terms)


def _phs(terms):
    stack, out = list(terms), []
    while stack:
        x = stack.pop()
        if isinstance(x, Ph):
            out.append(x)
        elif isinstance(x, App):
            stack.extend(x.args)
    return out


def cmd_pullback(args) -> int:
    north, west = _arrow(args.north), _arrow(args.west)
    if args.north_dom is not None:
        north = term_arrow(args.north_dom, *north.comps)
    if args.west_dom is not None:
        west = term_arrow(args.west_dom, *west.comps)
    t = synthesize_pullback(north, west)
    o = pullback_oracle(west, north)
    if t is None:
        print("no pullback" + ("" if o is None else " (the equalizer disagrees)"))
        return NONE if o is None else DIFFERENT
    print(f"border {t.border_str()}")
    print(f"effect {arrow_str(t.effect)}")
    print(f"final  {arrow_str(t.final)}")
    for line in _elide(proof_lines(t.proof), _config(args).proof):
        print("proof " + line)
    return OK


def cmd_semantics(args) -> int:
    cfg = _config(args)
    p = _read_program(args.program)
    if args.op == 1:
        print(op1_least_herbrand(p, cfg.term, cfg.derivation))
    elif args.op == 2:
        print("{" + ", ".join(sorted(atom_str(a) for a in op2_correct_answers(p, cfg.instance, cfg.derivation))) + "}")
    elif args.op == 3:
        print("{" + ", ".join(sorted(atom_str(a) for a in op3_computed_answers(p, args.pred, cfg.derivation))) + "}")
    else:
        for a, g in sorted(op4_resolvents(p, args.pred, args.k), key=lambda x: (atom_str(x[0]), goal_str(x[1]))):
            print(f"{atom_str(a)} <- {goal_str(g)}")
    return OK


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth-derivation", type=int, default=8, help="max resolution steps")
    common.add_argument("--depth-term", type=int, default=3, help="max term depth of instances")
    common.add_argument("--depth-proof", type=int, default=6, help="max proof depth printed")
    common.add_argument("--depth-instance", type=int, default=2, help="instantiation depth for closures")
    common.add_argument("--cap", type=int, default=64, help="max schedules per forest")
    common.add_argument("--mode", choices=[m.value for m in ResolutionMode], default="mgu")
    common.add_argument("--format", choices=["text", "lines"], default="text")
    common.add_argument("--seed", type=int, default=0)

    ap = argparse.ArgumentParser(prog="artifact", description="SLD and tile-based resolution.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("run", parents=[common], help="answer a goal")
    s.add_argument("program")
    s.add_argument("goal")
    s.add_argument("--engine", choices=["sld", "tile", "both"], default="both")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("trace", parents=[common], help="show refutations step by step")
    s.add_argument("program")
    s.add_argument("goal")
    s.add_argument("--engine", choices=["sld", "tile", "both"], default="both")
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("compare", parents=[common], help="check that both engines agree")
    s.add_argument("program")
    s.add_argument("goals", nargs="*")
    s.add_argument("--random", type=int, default=0, help="also try this many random goals")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("equiv", parents=[common], help="compare two goals")
    s.add_argument("program")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--rel", choices=["1", "2", "3", "trace", "bisim"], default="3")
    s.add_argument("--k", type=int, default=3, help="bisimulation depth")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("causality", parents=[common], help="causal forests and their schedules")
    s.add_argument("program")
    s.add_argument("goal")
    s.set_defaults(func=cmd_causality)

    s = sub.add_parser("axioms", parents=[common], help="randomized check of the algebraic laws")
    s.add_argument("--trials", type=int, default=500)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("pullback", parents=[common], help="build a pullback square from basic tiles")
    s.add_argument("north", help='e.g. "x1, x1"')
    s.add_argument("west", help='e.g. "a, a"')
    s.add_argument("--north-dom", type=int, default=None)
    s.add_argument("--west-dom", type=int, default=None)
    s.set_defaults(func=cmd_pullback)

    s = sub.add_parser("semantics", parents=[common], help="the semantics read off refutation tiles")
    s.add_argument("program")
    s.add_argument("--op", type=int, choices=[1, 2, 3, 4], default=1)
    s.add_argument("--pred", default=None)
    s.add_argument("--k", type=int, default=1, help="steps for resolvents")
    s.set_defaults(func=cmd_semantics)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _config(args)
        if getattr(args, "op", None) in (3, 4) and not args.pred:
            raise ValueError("--pred is required for this semantics")
        return args.func(args)
    except (SyntaxErrorAt, SignatureError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
