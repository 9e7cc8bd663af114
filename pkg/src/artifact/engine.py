"""Resolution: classical SLD and its tile-logic counterpart.

The SLD side follows the usual small-step rule on the leftmost atom. The
tile side turns each clause into a rewrite tile whose effect carries the
head arguments; a goal then steps by pasting clause tiles below its
predicates and synthesizing the pullback that instantiates the rest of
the goal. Both sides report answers in the same canonical form so they
can be compared directly.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence

from .syntax import (App, Atom, Clause, FreshSource, Goal, Program, Signature, Var,
                     goal_str, is_ground, signature_of_atoms, substitute, term_str,
                     term_vars, terms_up_to, rename_clause)
from .theory import (Arrow, Ph, Substitution, compose, conj, identity, is_identity,
                     predicate_arrow, term_arrow)
from .tiles import (Basic, ProofTerm, Tile, TileSystem, _h, basic_tiles, hcomp, hid, lift_R,
                    par, synthesize_pullback, vcomp, vid)
from .unify import match, unify_atoms


class ResolutionMode(Enum):
    MGU = "mgu"
    GROUND = "ground"
    ANY_INSTANCE = "any"


# ------------------------------------------------------------ answers

def canonical_renaming(goal_vars: Sequence, images: Sequence) -> dict:
    """Names for the variables of ``images`` (the images of ``goal_vars``).

    A variable that is the whole image of some goal variable takes that
    goal variable's name (first such position wins); the remaining ones
    become ``_F1, _F2, ..`` by first occurrence. Placeholders count as
    variables, so tile effects canonicalize the same way.
    """
    goal_vars = [v if isinstance(v, Var) else Var(v) for v in goal_vars]
    rename: dict = {}
    for v, t in zip(goal_vars, images):
        if not isinstance(t, (App, Atom)) and t not in rename:
            rename[t] = v
    acc: list = []
    for t in images:
        term_vars(t, acc)
    k = 0
    for x in acc:
        if x not in rename:
            k += 1
            rename[x] = Var(f"_F{k}")
    return rename


def canonical_answer(goal_vars: Sequence, images: Sequence) -> Substitution:
    """The answer ``goal var -> image`` up to renaming of the images."""
    rename = canonical_renaming(goal_vars, images)
    goal_vars = [v if isinstance(v, Var) else Var(v) for v in goal_vars]
    return Substitution.of((v, substitute(t, rename)) for v, t in zip(goal_vars, images))


def answer_key(s: Substitution) -> tuple:
    return (len(str(s)), str(s))


@dataclass(frozen=True)
class AnswerSet:
    """Canonical computed answers plus whether the search was exhaustive."""

    answers: tuple = ()
    complete: bool = True

    @staticmethod
    def of(answers, complete: bool = True) -> "AnswerSet":
        return AnswerSet(tuple(sorted(set(answers), key=answer_key)), complete)

    def __iter__(self):
        return iter(self.answers)

    def __len__(self) -> int:
        return len(self.answers)

    def __contains__(self, s) -> bool:
        return s in self.answers

    def same_answers(self, other: "AnswerSet") -> bool:
        return set(self.answers) == set(other.answers)

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in self.answers) + "}"


def answer_lines(s: Substitution) -> str:
    """``X1 = f(a), X2 = a``, or ``yes.`` for the empty answer."""
    if not s.bindings:
        return "yes."
    return ", ".join(f"{v.name} = {term_str(t)}" for v, t in s.bindings)


# ------------------------------------------------------------ SLD

@dataclass(frozen=True)
class Step:
    goal: Goal
    clause: str
    substitution: Substitution
    position: int = 0


@dataclass(frozen=True)
class Derivation:
    steps: tuple
    final: Goal
    answer: Substitution

    @property
    def refutation(self) -> bool:
        return self.final.is_empty()


def _replace(atoms: tuple, i: int, body: tuple, theta: dict) -> Goal:
    new = atoms[:i] + body + atoms[i + 1:]
    return Goal(tuple(substitute(a, theta) for a in new) if theta else new)


def sld_step(goal: Goal, program: Program, mode: ResolutionMode = ResolutionMode.MGU,
             fresh: FreshSource | None = None, term_depth: int = 3,
             position: int = 0) -> list:
    """One-step resolvents ``(goal', substitution, clause id)`` of the atom
    at ``position`` (the leftmost by default). The empty goal has none."""
    if goal.is_empty() or position >= len(goal.atoms):
        return []
    fresh = fresh if fresh is not None else FreshSource()
    atom = goal.atoms[position]
    if mode is ResolutionMode.MGU:
        return _mgu_steps(goal, atom, position, program, fresh)
    if mode is ResolutionMode.GROUND:
        return _ground_steps(goal, atom, position, program, term_depth)
    return _instance_steps(goal, atom, position, program, fresh, term_depth)


def _mgu_steps(goal, atom, i, program, fresh) -> list:
    out = []
    for c in program.clauses:
        if c.head.predicate != atom.predicate or len(c.head.args) != len(atom.args):
            continue
        r = rename_clause(c, fresh)
        theta = unify_atoms(atom, r.head)
        if theta is None:
            continue
        out.append((_replace(goal.atoms, i, r.body, theta.as_dict()), theta, c.id))
    return out


def _herbrand(program: Program, goal: Goal, depth: int) -> list:
    funs = program.signature.merge(signature_of_atoms(goal.atoms)).fun_arity
    return terms_up_to(funs, depth)


def _ground_steps(goal, atom, i, program, depth) -> list:
    if not is_ground(atom):
        return []
    universe = None
    out = []
    for c in program.clauses:
        if c.head.predicate != atom.predicate or len(c.head.args) != len(atom.args):
            continue
        binding = match(c.head, atom)
        if binding is None:
            continue
        free: list = []
        for b in c.body:
            term_vars(b, free)
        free = [v for v in free if v not in binding]
        if free and universe is None:
            universe = _herbrand(program, goal, depth)
        for choice in itertools.product(universe or [], repeat=len(free)):
            sigma = dict(binding)
            sigma.update(zip(free, choice))
            body = tuple(substitute(b, sigma) for b in c.body)
            out.append((_replace(goal.atoms, i, body, {}), Substitution.of(sigma), c.id))
    return out


def _instance_steps(goal, atom, i, program, fresh, depth) -> list:
    """MGU steps followed by every instantiation of the goal-side variables
    to themselves or to a ground term of bounded depth."""
    universe = None
    out = []
    for new, theta, cid in _mgu_steps(goal, atom, i, program, fresh):
        visible: list = []
        term_vars(substitute(atom, theta.as_dict()), visible)
        if universe is None:
            universe = _herbrand(program, goal, depth)
        for choice in itertools.product(*[[v] + universe for v in visible]):
            tau = {v: t for v, t in zip(visible, choice) if v != t}
            if not tau:
                out.append((new, theta, cid))
                continue
            sigma = {v: substitute(t, tau) for v, t in theta.bindings}
            for v, t in tau.items():
                sigma.setdefault(v, t)
            out.append((Goal(tuple(substitute(a, tau) for a in new.atoms)),
                        Substitution.of(sigma), cid))
    return out


def _infinite_universe(program: Program, goal: Goal) -> bool:
    funs = program.signature.merge(signature_of_atoms(goal.atoms)).functions
    return any(n > 0 for _, n in funs)


def sld_derivations(goal: Goal, program: Program, mode: ResolutionMode = ResolutionMode.MGU,
                    bound: int = 8, term_depth: int = 3,
                    stats: dict | None = None) -> Iterator[Derivation]:
    """Refutations of length <= ``bound``, depth first, leftmost clause first.

    ``stats['truncated']`` is set when some branch was cut by the bound.
    """
    goal_vars = [Var(n) for n in _goal_var_names(goal)]
    fresh = FreshSource()
    stats = stats if stats is not None else {}
    stats.setdefault("truncated", False)

    def walk(g: Goal, images: tuple, steps: tuple):
        if g.is_empty():
            yield Derivation(steps, g, canonical_answer(goal_vars, images))
            return
        succ = sld_step(g, program, mode, fresh, term_depth)
        if len(steps) >= bound:
            if succ:
                stats["truncated"] = True
            return
        for new, theta, cid in succ:
            binds = theta.as_dict()
            imgs = tuple(substitute(t, binds) for t in images) if binds else images
            yield from walk(new, imgs, steps + (Step(g, cid, theta),))

    yield from walk(goal, tuple(goal_vars), ())


def _goal_var_names(goal: Goal) -> list:
    acc: list = []
    for a in goal.atoms:
        term_vars(a, acc)
    return [v.name for v in acc]


def sld_refute(goal: Goal, program: Program, mode: ResolutionMode = ResolutionMode.MGU,
               bound: int = 8, term_depth: int = 3) -> AnswerSet:
    """Computed answers of ``goal`` within ``bound`` resolution steps.

    Depth-first search to the bound visits exactly the derivations that
    iterative deepening would, so the answer set is the same.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    stats: dict = {}
    answers = [d.answer for d in sld_derivations(goal, program, mode, bound, term_depth, stats)]
    complete = not stats["truncated"]
    if mode is not ResolutionMode.MGU and _infinite_universe(program, goal):
        complete = False
    return AnswerSet.of(answers, complete)


# ------------------------------------------------------------ tiles

def goal_config(goal: Goal) -> tuple:
    """``(config, names)``: the goal as an arrow ``t^k -> p``."""
    names = _goal_var_names(goal)
    mapping = {Var(n): Ph(i) for i, n in enumerate(names, 1)}
    comp = tuple(substitute(a, mapping) for a in goal.atoms)
    return Arrow("t" * len(names), "p", (comp,)), names


def clause_tile(c: Clause, sig: Signature | None = None) -> Tile:
    """``<p, id_p, head args, body>`` over the clause's variables."""
    vs: list = []
    term_vars(c.head, vs)
    for b in c.body:
        term_vars(b, vs)
    mapping = {v: Ph(i) for i, v in enumerate(vs, 1)}
    n, k = len(vs), len(c.head.args)
    effect = term_arrow(n, *(substitute(t, mapping) for t in c.head.args))
    final = Arrow("t" * n, "p", (tuple(substitute(b, mapping) for b in c.body),))
    return Tile(predicate_arrow(c.head.predicate, k), identity("p"), effect, final,
                Basic(c.id))


def program_tiles(program: Program, extra: Signature | None = None) -> TileSystem:
    """Clause tiles plus the pullback basis over the program's operators."""
    sig = program.signature if extra is None else program.signature.merge(extra)
    base = basic_tiles(sig)
    return base.extend((c.id, clause_tile(c)) for c in program.clauses)


def _clause_tiles(sys: TileSystem) -> dict:
    by_pred: dict = {}
    for name, t in sys.tiles:
        if t.initial.cod == "p" and is_identity(t.trigger):
            (item,), = t.initial.comps
            by_pred.setdefault((item.predicate, len(item.args)), []).append((name, t))
    return by_pred


@functools.lru_cache(maxsize=65536)
def cached_pullback(north: Arrow, west: Arrow) -> Optional[Tile]:
    return synthesize_pullback(north, west)


@dataclass(frozen=True)
class TileStep:
    tile: Tile
    config: Arrow
    effect: Arrow
    clauses: tuple        # ((position, clause id), ...)


def config_atoms(cfg: Arrow) -> tuple:
    if cfg.cod != "p":
        raise ValueError("a goal configuration has a single p-sorted component")
    items = cfg.comps[0]
    if not all(isinstance(a, Atom) for a in items):
        raise ValueError("a goal configuration lists atoms only")
    return items


def _positions(r: int, selection: str) -> list:
    if r == 0:
        return []
    if selection == "leftmost":
        return [(0,)]
    if selection == "any":
        return [(i,) for i in range(r)]
    if selection == "maximal":
        return [tuple(range(r))]
    raise ValueError(f"unknown selection {selection!r}")


def tile_step(cfg: Arrow, sys: TileSystem, selection: str = "leftmost") -> list:
    """Steps of a goal configuration.

    The selected atoms are rewritten by clause tiles in parallel, the
    other atoms stay put, and the pullback of the argument tuple against
    the joint clause effect instantiates everything coherently.
    """
    atoms = config_atoms(cfg)
    r = len(atoms)
    clauses = _clause_tiles(sys)
    preds = [predicate_arrow(a.predicate, len(a.args)) for a in atoms]
    args = Arrow(cfg.dom, "t" * sum(len(a.args) for a in atoms),
                 tuple(t for a in atoms for t in a.args))
    out = []
    for chosen in _positions(r, selection):
        options = [clauses.get((atoms[i].predicate, len(atoms[i].args)), []) for i in chosen]
        for pick in itertools.product(*options):
            cells = [vid(pr) for pr in preds]
            for i, (_, t) in zip(chosen, pick):
                cells[i] = t
            rule = par(*cells)
            top = rule if r == 1 else hcomp(vid(conj(r)), rule)
            pb = cached_pullback(args, rule.effect)
            if pb is None:
                continue
            step = _h(top, pb)
            out.append(TileStep(step, step.final, step.effect,
                                tuple((i, name) for i, (name, _) in zip(chosen, pick))))
    return out


def is_refutation(t: Tile) -> bool:
    """Trigger an identity and final configuration the empty goal."""
    return is_identity(t.trigger) and t.final.cod == "p" and t.final.comps == ((),)


@dataclass(frozen=True)
class Refutation:
    answer: Substitution
    tile: Tile
    clauses: tuple = ()   # clause ids per step

    @property
    def proof(self) -> ProofTerm:
        return self.tile.proof


@dataclass(frozen=True)
class RefutationSet:
    refutations: tuple = ()
    complete: bool = True

    def __iter__(self):
        return iter((r.answer, r.proof) for r in self.refutations)

    def __len__(self) -> int:
        return len(self.refutations)

    @property
    def answers(self) -> AnswerSet:
        return AnswerSet.of((r.answer for r in self.refutations), self.complete)


def tile_refute(goal: Goal, program: Program, bound: int = 8, selection: str = "leftmost",
                sys: TileSystem | None = None) -> RefutationSet:
    """Refutation tiles of ``goal`` built from at most ``bound`` steps."""
    if bound < 0:
        raise ValueError("bound must be >= 0")
    cfg0, names = goal_config(goal)
    sys = sys if sys is not None else program_tiles(program, signature_of_atoms(goal.atoms))
    found: list = []
    truncated = False

    def walk(acc: Tile, trail: tuple):
        nonlocal truncated
        if not config_atoms(acc.final):
            found.append(Refutation(canonical_answer(names, acc.effect.comps), acc, trail))
            return
        steps = tile_step(acc.final, sys, selection)
        if len(trail) >= bound:
            truncated = truncated or bool(steps)
            return
        for s in steps:
            nxt = s.tile if not trail else vcomp(acc, s.tile)
            walk(nxt, trail + (s.clauses,))

    walk(vid(cfg0), ())
    return RefutationSet(tuple(found), not truncated)


# ------------------------------------------------------------ head decompositions

@dataclass(frozen=True)
class HeadDecomposition:
    head: Atom            # the instantiated head t2;p over x1..xm
    observation: Arrow    # t1
    tile: Tile            # <t2;p, id, t1, body>


def _generalizations(terms: tuple) -> list:
    """All discharger-free ``t2`` with ``terms = t1;t2``, as ``(t2 comps, t1
    comps)``. Each occurrence is either cut into a placeholder (shared with
    an earlier cut of an equal subterm, or fresh) or kept and entered."""
    results: list = []

    def go(todo: tuple, code: tuple, classes: tuple):
        if not todo:
            results.append((_rebuild(code, len(terms)), classes))
            return
        t, rest = todo[0], todo[1:]
        for j, u in enumerate(classes, 1):
            if u == t:
                go(rest, code + (("ph", j),), classes)
        go(rest, code + (("ph", len(classes) + 1),), classes + (t,))
        if isinstance(t, App):
            go(t.args + rest, code + (("app", t.functor, len(t.args)),), classes)

    go(tuple(terms), (), ())
    return results


def _rebuild(code: tuple, n: int) -> tuple:
    """Rebuild ``n`` terms from their prefix code."""
    pos = 0

    def one():
        nonlocal pos
        c = code[pos]
        pos += 1
        if c[0] == "ph":
            return Ph(c[1])
        return App(c[1], tuple(one() for _ in range(c[2])))

    return tuple(one() for _ in range(n))


def head_decompositions(c: Clause) -> list:
    """Every factorization ``head args = t1;t2`` with ``t2`` discharger-free,
    each with its witness tile ``hcomp(T_c, vcomp(lift_R(t2), hid(t1)))``."""
    tc = clause_tile(c)
    h = tc.effect
    out = []
    seen = set()
    for comps, classes in _generalizations(h.comps):
        t2 = term_arrow(len(classes), *comps)
        t1 = Arrow(h.dom, "t" * len(classes), classes)
        if (t1, t2) in seen:
            continue
        seen.add((t1, t2))
        witness = hcomp(tc, vcomp(lift_R(t2), hid(t1)))
        head = compose(t2, tc.initial).comps[0][0]
        out.append(HeadDecomposition(head, t1, witness))
    return out


# ------------------------------------------------------------ correspondence

@dataclass(frozen=True)
class CorrespondenceReport:
    goal: Goal
    sld: AnswerSet
    tile: AnswerSet
    only_sld: tuple = ()
    only_tile: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.only_sld and not self.only_tile

    def __str__(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {goal_str(self.goal)}"
        lines = [head, f"  sld:  {self.sld}", f"  tile: {self.tile}"]
        if self.only_sld:
            lines.append("  only sld: " + ", ".join(map(str, self.only_sld)))
        if self.only_tile:
            lines.append("  only tile: " + ", ".join(map(str, self.only_tile)))
        return "\n".join(lines)


def correspondence_check(program: Program, goal: Goal, bound: int = 8) -> CorrespondenceReport:
    s = sld_refute(goal, program, ResolutionMode.MGU, bound)
    t = tile_refute(goal, program, bound).answers
    only_s = tuple(a for a in s if a not in t)
    only_t = tuple(a for a in t if a not in s)
    return CorrespondenceReport(goal, s, t, only_s, only_t)
