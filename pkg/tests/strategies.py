"""Hypothesis strategies for terms, programs and arrows."""
from hypothesis import strategies as st

from artifact.syntax import App, Atom, Clause, Goal, Program, Var, signature_of_clauses
from artifact.theory import Arrow, Ph

FUNS = {"a": 0, "b": 0, "f": 1, "g": 2}
PREDS = {"p": 1, "q": 1, "r": 2}
VARS = [Var(n) for n in ("X", "Y", "Z", "W")]


def terms(leaves, depth=2, funs=FUNS):
    consts = [App(f, ()) for f, n in funs.items() if n == 0]
    base = st.sampled_from(consts + list(leaves))
    compound = [(f, n) for f, n in funs.items() if n > 0]
    if depth <= 0 or not compound:
        return base

    def build(inner):
        return st.one_of(*[st.tuples(*[inner] * n).map(lambda args, f=f: App(f, args))
                           for f, n in compound])

    return st.recursive(base, build, max_leaves=4 * depth)


def atoms(leaves=VARS, depth=2):
    return st.sampled_from(sorted(PREDS)).flatmap(
        lambda p: st.tuples(*[terms(leaves, depth)] * PREDS[p]).map(lambda args: Atom(p, args)))


@st.composite
def programs(draw, max_clauses=4, max_body=2):
    n = draw(st.integers(1, max_clauses))
    clauses = []
    for i in range(n):
        head = draw(atoms())
        body = tuple(draw(st.lists(atoms(depth=1), max_size=max_body)))
        clauses.append(Clause(head, body, f"c{i + 1}"))
    clauses = tuple(clauses)
    return Program(clauses, signature_of_clauses(clauses))


def goals(max_atoms=3):
    return st.lists(atoms(), max_size=max_atoms).map(lambda xs: Goal(tuple(xs)))


@st.composite
def arrows(draw, m=None, n=None, depth=2):
    m = draw(st.integers(0, 3)) if m is None else m
    n = draw(st.integers(0, 3)) if n is None else n
    leaves = [Ph(i) for i in range(1, m + 1)]
    comps = tuple(draw(terms(leaves, depth)) for _ in range(n))
    return Arrow("t" * m, "t" * n, comps)
