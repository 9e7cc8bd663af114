"""Semantics read off refutation tiles, and goal equivalences.

Everything here is bounded: derivations by step count, instantiations by
term depth. Each report says whether a bound was hit, and a separation is
only claimed when it is backed by a concrete witness that no larger bound
could undo.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .engine import (AnswerSet, ResolutionMode, canonical_answer, canonical_renaming, goal_config,
                     program_tiles, sld_refute, tile_refute, tile_step)
from .syntax import (App, Atom, Goal, Program, Var, atom_str, goal_str, ground_atoms,
                     signature_of_atoms, substitute, term_depth, term_vars, terms_up_to)
from .theory import Arrow, Ph, Substitution, arrow_str, ph_order
from .tiles import TileSystem, vcomp, vid
from .unify import match


class StateSpaceOverflow(RuntimeError):
    pass


@dataclass(frozen=True)
class HerbrandSet:
    atoms: frozenset
    depth: int

    def __contains__(self, a) -> bool:
        return a in self.atoms

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self):
        return iter(sorted(self.atoms, key=atom_str))

    def __str__(self) -> str:
        return "{" + ", ".join(atom_str(a) for a in self) + "}"


def _sig(program: Program, *goals: Goal):
    sig = program.signature
    for g in goals:
        sig = sig.merge(signature_of_atoms(g.atoms))
    return sig


def _refutable(goal: Goal, program: Program, bound: int, sys: TileSystem | None = None):
    r = tile_refute(goal, program, bound, sys=sys)
    return len(r) > 0, r.complete


# ------------------------------------------------------------ Op1 .. Op4

def op1_least_herbrand(program: Program, depth: int, bound: int = 8) -> HerbrandSet:
    """Ground atoms of term depth <= ``depth`` that have a refutation tile."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    sys = program_tiles(program)
    found = set()
    for a in ground_atoms(program.signature, depth):
        if _refutable(Goal((a,)), program, bound, sys)[0]:
            found.add(a)
    return HerbrandSet(frozenset(found), depth)


def op1_ground_oracle(program: Program, depth: int, bound: int = 8) -> HerbrandSet:
    """Op1 by brute force: SLD with ground clause instances only."""
    found = set()
    for a in ground_atoms(program.signature, depth):
        if len(sld_refute(Goal((a,)), program, ResolutionMode.GROUND, bound, depth)):
            found.add(a)
    return HerbrandSet(frozenset(found), depth)


def _canonical_atoms(program: Program, depth: int) -> list:
    """Atoms over the program's predicates with arguments of depth <= depth,
    variables named ``X1, X2, ..`` in order of first occurrence."""
    funs = program.signature.fun_arity
    out = []
    for pred, k in program.signature.predicates:
        leaves = [Var(f"X{i}") for i in range(1, k + 1)]
        pool = terms_up_to(funs, depth, leaves)
        for args in itertools.product(pool, repeat=k):
            a = Atom(pred, args)
            names = [v.name for v in term_vars(a)]
            if names == [f"X{i}" for i in range(1, len(names) + 1)]:
                out.append(a)
    return out


def op2_correct_answers(program: Program, depth: int, bound: int = 8) -> frozenset:
    """Atomic goals refuted with the empty answer (effect ``id (x) !``)."""
    sys = program_tiles(program)
    out = set()
    for a in _canonical_atoms(program, depth):
        r = tile_refute(Goal((a,)), program, bound, sys=sys)
        if any(not ans.bindings for ans, _ in r):
            out.add(a)
    return frozenset(out)


def _bare_goal(program: Program, pred: str) -> Goal:
    arity = program.signature.pred_arity
    if pred not in arity:
        raise KeyError(f"unknown predicate {pred}")
    return Goal((Atom(pred, tuple(Var(f"X{i}") for i in range(1, arity[pred] + 1))),))


def op3_computed_answers(program: Program, pred: str, bound: int = 8) -> frozenset:
    """Instances ``theta;p`` for the computed answers ``theta`` of bare ``p``."""
    g = _bare_goal(program, pred)
    r = tile_refute(g, program, bound)
    return frozenset(substitute(g.atoms[0], ans.as_dict()) for ans in r.answers)


def _rename_first(a: Atom) -> Atom:
    return substitute(a, {v: Var(f"X{i}") for i, v in enumerate(term_vars(a), 1)})


@dataclass(frozen=True)
class ChainReport:
    """Violations of the inclusions between Op1, Op2 and Op3 at a depth."""

    depth: int
    violations: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations


def inclusion_chain(program: Program, depth: int, bound: int = 8) -> ChainReport:
    """Op1 is the ground part of Op2, every member of Op1 is an instance of
    a computed answer, and every computed answer of term depth <= ``depth``
    is a correct answer.

    Lifting keeps derivation length, so both hold exactly at one ``bound``.
    """
    op1 = op1_least_herbrand(program, depth, bound)
    op2 = op2_correct_answers(program, depth, bound)
    bad = []
    for a in op1:
        if a not in op2:
            bad.append(f"{atom_str(a)} in op1 but not op2")
    for a in op2:
        if not term_vars(a) and a not in op1:
            bad.append(f"{atom_str(a)} is a ground member of op2 but not op1")
    op3 = {pred: op3_computed_answers(program, pred, bound)
           for pred in program.signature.pred_arity}
    for a in op1:
        if not any(match(b, a) is not None for b in op3[a.predicate]):
            bad.append(f"{atom_str(a)} in op1 is no instance of op3")
    for atoms in op3.values():
        for b in atoms:
            c = _rename_first(b)
            if max((term_depth(t) for t in c.args), default=0) <= depth and c not in op2:
                bad.append(f"{atom_str(c)} in op3 but not op2")
    return ChainReport(depth, tuple(bad))


def _name_apex(names: list, effect: Arrow, final: Arrow) -> tuple:
    """Read an effect/final pair over placeholders as an answer and a goal."""
    rename = canonical_renaming(names, effect.comps)
    k = sum(1 for v in rename.values() if v.name.startswith("_F"))
    for j in ph_order(final.comps):
        if Ph(j) not in rename:
            k += 1
            rename[Ph(j)] = Var(f"_F{k}")
    ans = Substitution.of((Var(n), substitute(t, rename)) for n, t in zip(names, effect.comps))
    return ans, Goal(tuple(substitute(a, rename) for a in final.comps[0]))


def op4_resolvents(program: Program, pred: str, bound: int = 1) -> frozenset:
    """Pairs ``(theta;p, G)`` for every tile from bare ``p`` of <= bound steps."""
    g = _bare_goal(program, pred)
    cfg, names = goal_config(g)
    sys = program_tiles(program)
    out = set()
    frontier = [vid(cfg)]
    for level in range(bound + 1):
        nxt = []
        for acc in frontier:
            ans, goal = _name_apex(names, acc.effect, acc.final)
            out.add((substitute(g.atoms[0], ans.as_dict()), goal))
            if level < bound:
                for s in tile_step(acc.final, sys):
                    nxt.append(vcomp(acc, s.tile))
        frontier = nxt
    return frozenset(out)


# ------------------------------------------------------------ equivalences

@dataclass(frozen=True)
class EquivReport:
    relation: str                 # "~1" | "~2" | "~3" | "trace" | "bisim-k"
    verdict: str                  # "equivalent" | "separated" | "inconclusive"
    witness: Optional[str] = None
    detail: str = ""
    truncated: bool = False
    bounds: tuple = ()            # ((name, value), ...)
    witness_goal: Optional[str] = None   # the witness applied to its goal

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"

    @property
    def separated(self) -> bool:
        return self.verdict == "separated"

    def __str__(self) -> str:
        head = self.verdict + (f": {self.witness}" if self.witness else "")
        if self.truncated and self.verdict != "separated":
            head += " (at bound)"
        return head


def answer_profile(names: list, ans: Substitution) -> Substitution:
    """The answer as images of the goal variables by position, so goals
    that differ only in variable names compare equal."""
    binds = ans.as_dict()
    images = [binds.get(Var(n), Var(n)) for n in names]
    return canonical_answer([f"V{i}" for i in range(1, len(names) + 1)], images)


def _goal_names(g: Goal) -> list:
    return [v.name for v in term_vars_all(g)]


def term_vars_all(g: Goal) -> list:
    acc: list = []
    for a in g.atoms:
        term_vars(a, acc)
    return acc


def _compare_answers(tag: str, g1: Goal, g2: Goal, s1: AnswerSet, s2: AnswerSet,
                     bounds: tuple, extra_trunc: bool = False) -> EquivReport:
    n1, n2 = _goal_names(g1), _goal_names(g2)
    p1 = {answer_profile(n1, a): a for a in s1}
    p2 = {answer_profile(n2, a): a for a in s2}
    detail = f"{s1} vs {s2}"
    truncated = extra_trunc or not (s1.complete and s2.complete)
    only1 = [p1[k] for k in p1 if k not in p2]
    only2 = [p2[k] for k in p2 if k not in p1]
    if not only1 and not only2:
        # agreement up to a cut-off search proves nothing
        verdict = "inconclusive" if truncated else "equivalent"
        return EquivReport(tag, verdict, None, detail, truncated, bounds)
    # an answer found on one side is missing for good only if the other
    # side's search was exhaustive
    if only1 and s2.complete and not extra_trunc:
        return EquivReport(tag, "separated", str(only1[0]), detail, truncated, bounds,
                           _instance_str(g1, only1[0]))
    if only2 and s1.complete and not extra_trunc:
        return EquivReport(tag, "separated", str(only2[0]), detail, truncated, bounds,
                           _instance_str(g2, only2[0]))
    return EquivReport(tag, "inconclusive", None, detail, truncated, bounds)


def _instance_str(g: Goal, ans: Substitution) -> str:
    return goal_str(Goal(tuple(substitute(a, ans.as_dict()) for a in g.atoms)))


def trace_equiv(g1: Goal, g2: Goal, program: Program, bound: int = 8,
                tag: str = "trace") -> EquivReport:
    """Same computed answers (from refutation tiles), up to renaming."""
    s1 = tile_refute(g1, program, bound).answers
    s2 = tile_refute(g2, program, bound).answers
    return _compare_answers(tag, g1, g2, s1, s2, (("derivation", bound),))


def _ground_substitutions(program: Program, goals: tuple, depth: int) -> tuple:
    sig = _sig(program, *goals)
    vs: list = []
    for g in goals:
        vs.extend(v for v in term_vars_all(g) if v not in vs)
    funs = sig.fun_arity
    universe = terms_up_to(funs, depth)
    truncated = bool(vs) and any(n > 0 for n in funs.values())
    subs = [dict(zip(vs, choice)) for choice in itertools.product(universe, repeat=len(vs))]
    return subs, truncated


def closure_equiv(g1: Goal, g2: Goal, program: Program, relation: int | str,
                  depth: int = 2, bound: int = 8) -> EquivReport:
    """``~1``: same refutable ground instances; ``~2``: same answers when any
    clause instance may be used; ``~3``: same computed answers."""
    rel = str(relation).lstrip("~")
    bounds = (("instance", depth), ("derivation", bound))
    if rel == "3":
        return trace_equiv(g1, g2, program, bound, tag="~3")
    if rel == "2":
        s1 = sld_refute(g1, program, ResolutionMode.ANY_INSTANCE, bound, depth)
        s2 = sld_refute(g2, program, ResolutionMode.ANY_INSTANCE, bound, depth)
        return _compare_answers("~2", g1, g2, s1, s2, bounds)
    if rel != "1":
        raise ValueError(f"unknown closure relation {relation!r}")
    subs, truncated = _ground_substitutions(program, (g1, g2), depth)
    for sigma in subs:
        i1 = Goal(tuple(substitute(a, sigma) for a in g1.atoms))
        i2 = Goal(tuple(substitute(a, sigma) for a in g2.atoms))
        r1 = sld_refute(i1, program, ResolutionMode.MGU, bound)
        r2 = sld_refute(i2, program, ResolutionMode.MGU, bound)
        truncated = truncated or not (r1.complete and r2.complete)
        ok1, ok2 = len(r1) > 0, len(r2) > 0
        if ok1 != ok2:
            witness = str(Substitution.of(sigma))
            side = "left" if ok1 else "right"
            detail = f"only the {side} goal is refuted under {witness}"
            if (r2 if ok1 else r1).complete:
                return EquivReport("~1", "separated", witness, detail, truncated, bounds,
                                   goal_str(i1))
            return EquivReport("~1", "inconclusive", None, detail, truncated, bounds)
    return EquivReport("~1", "inconclusive" if truncated else "equivalent", None,
                       f"ground instances checked: {len(subs)}", truncated, bounds)


# ------------------------------------------------------------ bisimulation

def canonical_state(effect: Arrow, final: Arrow) -> tuple:
    """Renumber the apex by first use in the final configuration, then in
    the effect; returns ``(label, state)``."""
    order = ph_order(final.comps + effect.comps)
    mapping = {j: k for k, j in enumerate(order, 1)}
    n = len(order)
    dom = "t" * n
    eff = Arrow(dom, effect.cod, tuple(_renum(c, mapping) for c in effect.comps))
    fin = Arrow(dom, final.cod, tuple(_renum(c, mapping) for c in final.comps))
    return eff, fin


def _renum(x, mapping):
    if isinstance(x, Ph):
        return Ph(mapping[x.index])
    if isinstance(x, App) and x.args:
        return App(x.functor, tuple(_renum(a, mapping) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.predicate, tuple(_renum(a, mapping) for a in x.args))
    if isinstance(x, tuple):
        return tuple(_renum(a, mapping) for a in x)
    return x


class _LTS:
    """Goal configurations and their tile steps, explored on demand."""

    def __init__(self, sys: TileSystem, selection: str, limit: int):
        self.sys, self.selection, self.limit = sys, selection, limit
        self.succ: dict = {}

    def step(self, cfg: Arrow) -> tuple:
        if cfg not in self.succ:
            if len(self.succ) >= self.limit:
                raise StateSpaceOverflow(f"more than {self.limit} states")
            moves = set()
            for s in tile_step(cfg, self.sys, self.selection):
                label, nxt = canonical_state(s.effect, s.config)
                moves.add((label, nxt))
            self.succ[cfg] = tuple(sorted(moves, key=lambda m: (arrow_str(m[0]), arrow_str(m[1]))))
        return self.succ[cfg]


def bisim_equiv(g1: Goal, g2: Goal, program: Program, k: int = 3,
                selection: str = "any", limit: int = 5000) -> EquivReport:
    """k-step bisimilarity of two goals.

    Transitions are single tile steps labelled by their effect (triggers
    are identities for goal configurations). Level ``i`` classes are the
    sets of ``(label, level i-1 class)`` pairs, so level ``k+1`` refines
    level ``k``.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sys = program_tiles(program, _sig(program, g1, g2))
    lts = _LTS(sys, selection, limit)
    classes: dict = {}
    memo: dict = {}

    def cls(cfg, i):
        if i == 0:
            return 0
        key = (cfg, i)
        if key not in memo:
            sig = frozenset((label, cls(nxt, i - 1)) for label, nxt in lts.step(cfg))
            memo[key] = classes.setdefault((i, sig), len(classes) + 1)
        return memo[key]

    c1 = canonical_state(*_root(g1))[1]
    c2 = canonical_state(*_root(g2))[1]
    tag = f"bisim-{k}"
    bounds = (("k", k),)
    if cls(c1, k) == cls(c2, k):
        return EquivReport(tag, "equivalent", None, f"{len(lts.succ)} states", True, bounds)
    return EquivReport(tag, "separated", _distinguish(lts, cls, c1, c2, k),
                       f"{len(lts.succ)} states", True, bounds)


def _root(g: Goal) -> tuple:
    cfg, names = goal_config(g)
    return Arrow(cfg.dom, cfg.dom, tuple(Ph(i) for i in range(1, len(cfg.dom) + 1))), cfg


def _distinguish(lts: _LTS, cls, a, b, i) -> str:
    """A label path after which the two sides differ in what they offer."""
    path = []
    while i > 0:
        ma, mb = lts.step(a), lts.step(b)
        for (x, y, side) in ((ma, mb, "left"), (mb, ma, "right")):
            for label, nxt in x:
                same = [n for l, n in y if l == label]
                if not same:
                    path.append(f"{side} offers {arrow_str(label)}")
                    return "; ".join(path)
                if all(cls(n, i - 1) != cls(nxt, i - 1) for n in same):
                    path.append(arrow_str(label))
                    a, b = (nxt, same[0]) if side == "left" else (same[0], nxt)
                    break
            else:
                continue
            break
        i -= 1
    return "; ".join(path) or "classes differ"


# ------------------------------------------------------------ congruence

@dataclass(frozen=True)
class CongruenceReport:
    passed: bool
    violations: tuple = ()
    precondition: bool = True

    def __str__(self) -> str:
        if not self.precondition:
            return "skipped: the goals are not trace equivalent"
        if self.passed:
            return "PASS"
        return "FAIL " + "; ".join(self.violations)


def congruence_probe(g1: Goal, g2: Goal, program: Program, ctx: Goal,
                     sigma: Substitution, bound: int = 8) -> CongruenceReport:
    """Equivalent goals stay equivalent in a conjunction and under an
    instantiation."""
    base = trace_equiv(g1, g2, program, bound)
    if not base.equivalent:
        return CongruenceReport(False, (), precondition=False)
    violations = []
    c = trace_equiv(Goal(g1.atoms + ctx.atoms), Goal(g2.atoms + ctx.atoms), program, bound)
    if c.separated:
        violations.append(f"conjunction with {goal_str(ctx)}: {c.witness}")
    s = sigma.as_dict()
    i1 = Goal(tuple(substitute(a, s) for a in g1.atoms))
    i2 = Goal(tuple(substitute(a, s) for a in g2.atoms))
    r = trace_equiv(i1, i2, program, bound)
    if r.separated:
        violations.append(f"instance {sigma}: {r.witness}")
    return CongruenceReport(not violations, tuple(violations))
