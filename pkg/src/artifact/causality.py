"""Causal refutations: clause names as observations.

Here each atom of a goal is its own component and a clause ``c`` with
``m`` body atoms observes the operator ``c: p^m -> p``. The trigger of a
refutation is then a forest of clause names whose parent/child edges are
the causal dependencies between resolution steps; any schedule that
respects them replays to the same answer.
"""
from __future__ import annotations

from dataclasses import dataclass

from .engine import cached_pullback, canonical_answer, goal_config, sld_step
from .syntax import App, Clause, FreshSource, Goal, Program, Var, substitute, term_vars
from .theory import Arrow, Ph, Substitution, predicate_arrow, term_arrow
from .tiles import Basic, Tile, TileSystem, _h, basic_tiles, par, vcomp, vid


class ScheduleError(RuntimeError):
    """A schedule names a clause that cannot be applied where it says."""


# ------------------------------------------------------------ tiles

def causal_tile(c: Clause) -> Tile:
    """``<p, c, head args, <q1(s1), .., qm(sm)>>`` with ``c: p^m -> p``."""
    vs: list = []
    term_vars(c.head, vs)
    for b in c.body:
        term_vars(b, vs)
    mapping = {v: Ph(i) for i, v in enumerate(vs, 1)}
    n, m = len(vs), len(c.body)
    effect = term_arrow(n, *(substitute(t, mapping) for t in c.head.args))
    final = Arrow("t" * n, "p" * m, tuple((substitute(b, mapping),) for b in c.body))
    trigger = Arrow("p" * m, "p", ((App(c.id, tuple(Ph(i) for i in range(1, m + 1))),),))
    return Tile(predicate_arrow(c.head.predicate, len(c.head.args)), trigger, effect, final,
                Basic(c.id))


def causal_tiles(program: Program, extra=None) -> TileSystem:
    sig = program.signature if extra is None else program.signature.merge(extra)
    return basic_tiles(sig).extend((c.id, causal_tile(c)) for c in program.clauses)


def causal_config(goal: Goal) -> tuple:
    """The goal as ``t^k -> p^r``, one component per atom."""
    cfg, names = goal_config(goal)
    return Arrow(cfg.dom, "p" * len(goal.atoms), tuple((a,) for a in cfg.comps[0])), names


def causal_step(cfg: Arrow, program: Program, position: int = 0) -> list:
    """Steps rewriting the atom at ``position`` with each matching clause."""
    atoms = [c[0] for c in cfg.comps]
    if position >= len(atoms):
        return []
    atom = atoms[position]
    preds = [predicate_arrow(a.predicate, len(a.args)) for a in atoms]
    args = Arrow(cfg.dom, "t" * sum(len(a.args) for a in atoms),
                 tuple(t for a in atoms for t in a.args))
    out = []
    for c in program.clauses:
        if c.head.predicate != atom.predicate or len(c.head.args) != len(atom.args):
            continue
        cells = [vid(p) for p in preds]
        cells[position] = causal_tile(c)
        rule = par(*cells)
        pb = cached_pullback(args, rule.effect)
        if pb is not None:
            out.append((c.id, _h(rule, pb)))
    return out


# ------------------------------------------------------------ forests

@dataclass(frozen=True)
class Node:
    clause: str
    path: tuple            # root index, then body positions
    children: tuple = ()


@dataclass(frozen=True)
class CausalForest:
    roots: tuple = ()

    def nodes(self) -> list:
        out = []
        stack = list(reversed(self.roots))
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(reversed(n.children))
        return out

    def __len__(self) -> int:
        return len(self.nodes())

    def precedes(self, x: Node, y: Node) -> bool:
        """``x`` is an ancestor of (or equal to) ``y``."""
        return y.path[:len(x.path)] == x.path

    def __str__(self) -> str:
        lines = []

        def show(n, depth):
            lines.append("  " * depth + f"{n.clause} @ {path_str(n.path)}")
            for ch in n.children:
                show(ch, depth + 1)

        for r in self.roots:
            show(r, 0)
        return "\n".join(lines) if lines else "(empty forest)"


def path_str(path: tuple) -> str:
    return ".".join(str(i) for i in path)


def forest_of(trigger: Arrow) -> CausalForest:
    """Read a refutation trigger ``p^0 -> p^r`` as an ordered forest."""
    def tree(t, path):
        if not isinstance(t, App):
            raise ValueError("a causal trigger has clause names only")
        return Node(t.functor, path, tuple(tree(a, path + (j,)) for j, a in enumerate(t.args)))

    return CausalForest(tuple(tree(c[0], (i,)) for i, c in enumerate(trigger.comps)))


@dataclass(frozen=True)
class CausalRefutation:
    answer: Substitution
    forest: CausalForest
    tile: Tile


def causal_refute(goal: Goal, program: Program, bound: int = 8) -> list:
    """Refutations in the causal system, leftmost component first.

    A refutation ends when no component is left; facts leave none.
    """
    cfg0, names = causal_config(goal)
    found = []

    def walk(acc: Tile, depth: int):
        if not acc.final.cod:
            found.append(CausalRefutation(canonical_answer(names, acc.effect.comps),
                                          forest_of(acc.trigger), acc))
            return
        if depth >= bound:
            return
        for _, step in causal_step(acc.final, program, 0):
            walk(step if depth == 0 else vcomp(acc, step), depth + 1)

    walk(vid(cfg0), 0)
    return found


# ------------------------------------------------------------ schedules

@dataclass(frozen=True)
class Schedule:
    steps: tuple          # ((path, clause id), ...)

    def __str__(self) -> str:
        return ", ".join(f"{c}@{path_str(p)}" for p, c in self.steps)


@dataclass(frozen=True)
class Schedules:
    schedules: tuple
    exhaustive: bool

    def __iter__(self):
        return iter(self.schedules)

    def __len__(self) -> int:
        return len(self.schedules)


def linearizations(forest: CausalForest, limit: int = 64) -> Schedules:
    """Topological orders of the forest (parents before children), at most
    ``limit`` of them; ``exhaustive`` tells whether that was all."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    out: list = []

    def go(ready: tuple, acc: tuple) -> bool:
        if not ready:
            out.append(Schedule(acc))
            return len(out) <= limit
        for i, n in enumerate(ready):
            rest = ready[:i] + ready[i + 1:] + n.children
            if not go(rest, acc + ((n.path, n.clause),)):
                return False
        return True

    exhaustive = go(forest.roots, ())
    return Schedules(tuple(out[:limit]), exhaustive)


def replay(schedule: Schedule, goal: Goal, program: Program) -> Substitution:
    """Apply the scheduled clauses at their subgoal occurrences by SLD."""
    names = [v.name for v in _goal_vars(goal)]
    images = tuple(Var(n) for n in names)
    current = Goal(goal.atoms)
    paths = [(i,) for i in range(len(goal.atoms))]
    fresh = FreshSource()
    for path, cid in schedule.steps:
        if path not in paths:
            raise ScheduleError(f"no subgoal at {path_str(path)}")
        i = paths.index(path)
        pick = [r for r in sld_step(current, program, fresh=fresh, position=i) if r[2] == cid]
        if not pick:
            raise ScheduleError(f"clause {cid} does not apply at {path_str(path)}")
        new, theta, _ = pick[0]
        m = len(new.atoms) - len(current.atoms) + 1
        paths = paths[:i] + [path + (j,) for j in range(m)] + paths[i + 1:]
        binds = theta.as_dict()
        images = tuple(substitute(t, binds) for t in images)
        current = new
    if not current.is_empty():
        raise ScheduleError("the schedule leaves subgoals unresolved")
    return canonical_answer(names, images)


def _goal_vars(goal: Goal) -> list:
    acc: list = []
    for a in goal.atoms:
        term_vars(a, acc)
    return acc
