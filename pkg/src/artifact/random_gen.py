"""Seeded generators of random terms, arrows, cospans and programs, shared
by the test suite and the CLI self-checks."""
from __future__ import annotations

import random

from .syntax import (App, Atom, Clause, Goal, Program, Var, signature_of_clauses, substitute,
                     term_vars)
from .theory import Arrow, Ph, term_arrow

DEFAULT_FUNS = {"a": 0, "b": 0, "f": 1, "g": 2}


def random_term(rng: random.Random, funs: dict, leaves: list, depth: int):
    consts = [f for f, n in funs.items() if n == 0]
    ops = [f for f, n in funs.items() if n > 0]
    if depth <= 0 or not ops or rng.random() < 0.4:
        pool = leaves + [App(c, ()) for c in consts]
        if pool:
            return rng.choice(pool)
    f = rng.choice(ops)
    return App(f, tuple(random_term(rng, funs, leaves, depth - 1) for _ in range(funs[f])))


def random_arrow(rng: random.Random, m: int, n: int, depth: int = 2,
                 funs: dict | None = None) -> Arrow:
    funs = DEFAULT_FUNS if funs is None else funs
    leaves = [Ph(i) for i in range(1, m + 1)]
    return term_arrow(m, *(random_term(rng, funs, leaves, depth) for _ in range(n)))


def _generalize(rng: random.Random, t, fresh: list, memo: dict, p: float):
    """Replace random subterms of ``t`` by placeholders (shared per subterm)."""
    if t in memo and rng.random() < 0.7:
        return memo[t]
    if isinstance(t, App) and t.args and rng.random() > p:
        return App(t.functor, tuple(_generalize(rng, a, fresh, memo, p) for a in t.args))
    if isinstance(t, App) and not t.args and rng.random() > p:
        return t
    fresh.append(t)
    ph = Ph(len(fresh))
    memo.setdefault(t, ph)
    return ph


def _arrow_over(rng: random.Random, target: tuple, p: float) -> Arrow:
    fresh: list = []
    comps = tuple(_generalize(rng, t, fresh, {}, p) for t in target)
    return term_arrow(len(fresh), *comps)


def random_solvable_cospan(rng: random.Random, n: int, depth: int = 3,
                           funs: dict | None = None) -> tuple:
    """``(north, west)`` with a common instance, so their pullback exists."""
    funs = DEFAULT_FUNS if funs is None else funs
    leaves = [Var(f"V{i}") for i in range(rng.randint(0, 3))]
    target = tuple(random_term(rng, funs, leaves, depth) for _ in range(n))
    return _arrow_over(rng, target, 0.35), _arrow_over(rng, target, 0.35)


def random_cospan(rng: random.Random, n: int, depth: int = 3,
                  funs: dict | None = None) -> tuple:
    """An unconstrained pair of arrows into ``t^n``."""
    m1, m2 = rng.randint(0, 3), rng.randint(0, 3)
    return random_arrow(rng, m1, n, depth, funs), random_arrow(rng, m2, n, depth, funs)


# ------------------------------------------------------------ programs

def random_program(rng: random.Random, max_clauses: int = 4, max_body: int = 2,
                   depth: int = 2) -> Program:
    """A small random program over predicates ``p/1, q/1, r/2`` and
    functions ``a/0, b/0, s/1``."""
    preds = {"p": 1, "q": 1, "r": 2}
    funs = {"a": 0, "b": 0, "s": 1}
    clauses = []
    for i in range(rng.randint(1, max_clauses)):
        names = [Var(v) for v in ("X", "Y", "Z")[:rng.randint(1, 3)]]
        head_p = rng.choice(sorted(preds))
        head = Atom(head_p, tuple(random_term(rng, funs, names, depth) for _ in range(preds[head_p])))
        body = []
        for _ in range(rng.randint(0, max_body)):
            bp = rng.choice(sorted(preds))
            body.append(Atom(bp, tuple(random_term(rng, funs, names, depth - 1)
                                       for _ in range(preds[bp]))))
        clauses.append(Clause(head, tuple(body), f"c{i + 1}"))
    clauses = tuple(clauses)
    return Program(clauses, signature_of_clauses(clauses))


def random_goal(rng: random.Random, max_atoms: int = 2, depth: int = 1) -> Goal:
    preds = {"p": 1, "q": 1, "r": 2}
    funs = {"a": 0, "b": 0, "s": 1}
    names = [Var(v) for v in ("U", "W")]
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        p = rng.choice(sorted(preds))
        atoms.append(Atom(p, tuple(random_term(rng, funs, names, depth) for _ in range(preds[p]))))
    return Goal(tuple(atoms))


def random_goal_for(rng: random.Random, program: Program, max_atoms: int = 2,
                    depth: int = 1) -> Goal:
    """A random goal over a program's own functions and the predicates its
    clauses define. Half of the atoms are clause heads with their
    variables renamed into the goal's, so that goals often succeed."""
    arity = program.signature.pred_arity
    preds = {c.head.predicate: arity[c.head.predicate] for c in program.clauses}
    funs = program.signature.fun_arity
    if not preds:
        return Goal(())
    names = [Var(v) for v in ("U", "W", "Z")]
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        if rng.random() < 0.5:
            head = rng.choice(program.clauses).head
            vs = sorted({v for v in term_vars(head)}, key=lambda v: v.name)
            atoms.append(substitute(head, {v: rng.choice(names) for v in vs}))
            continue
        p = rng.choice(sorted(preds))
        atoms.append(Atom(p, tuple(random_term(rng, funs, names, depth) for _ in range(preds[p]))))
    return Goal(tuple(atoms))
