import doctest
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import artifact.unify
from artifact.random_gen import random_solvable_cospan
from artifact.syntax import App, Var, parse_atom, parse_term, substitute, term_vars
from artifact.theory import Arrow, Ph, compose, discharger, duplicator, identity, term_arrow
from artifact.unify import (PullbackResult, equalizer, match, mgu, pullback_oracle, unify_atoms,
                            verify_universal)

from strategies import terms

a, b = App("a", ()), App("b", ())
x1, x2 = Ph(1), Ph(2)
SMALL = [Var("X"), Var("Y"), Var("Z")]


def t(s):
    return parse_term(s)


def apply(s, x):
    return substitute(x, s.as_dict())


def test_doctests():
    assert doctest.testmod(artifact.unify).failed == 0


def test_mgu_examples():
    assert mgu([(t("f(X)"), t("g(Y)"))]) is None
    assert mgu([(t("f(X)"), t("X"))]) is None
    assert mgu([(t("X"), t("X"))]).bindings == ()
    assert str(mgu([(t("sum(0,X1,X1)"), t("sum(0,s(0),Z)"))])) == "[s(0)/X1, s(0)/Z]"


def test_unify_atoms_examples():
    assert str(unify_atoms(parse_atom("p(X1,X2)"), parse_atom("p(f(Y1),Y2)"))) == "[f(Y1)/X1, Y2/X2]"
    assert unify_atoms(parse_atom("q(b)"), parse_atom("q(a)")) is None
    assert str(unify_atoms(parse_atom("q(b)"), parse_atom("q(X)"))) == "[b/X]"
    assert unify_atoms(parse_atom("q(b)"), parse_atom("r(b)")) is None


def _pairs(depth=2):
    return st.lists(st.tuples(terms(SMALL, depth), terms(SMALL, depth)), min_size=1, max_size=3)


@settings(max_examples=300)
@given(_pairs())
def test_mgu_sound_and_idempotent(eqs):
    s = mgu(eqs)
    if s is None:
        return
    for l, r in eqs:
        assert apply(s, l) == apply(s, r)
        assert apply(s, apply(s, l)) == apply(s, l)


def _grounds(depth):
    pool = [a, b]
    for _ in range(depth):
        pool = pool + [App("f", (x,)) for x in pool if App("f", (x,)) not in pool]
    return pool


@settings(max_examples=150)
@given(st.lists(st.tuples(terms(SMALL, 1, {"a": 0, "b": 0, "f": 1, "g": 2}),
                          terms(SMALL, 1, {"a": 0, "b": 0, "f": 1, "g": 2})),
                min_size=1, max_size=2))
def test_mgu_is_most_general(eqs):
    # every ground unifier found by enumeration factors through the mgu
    s = mgu(eqs)
    vs = []
    for l, r in eqs:
        term_vars(l, vs)
        term_vars(r, vs)
    for vals in itertools.product(_grounds(1), repeat=len(vs)):
        g = dict(zip(vs, vals))
        if all(substitute(l, g) == substitute(r, g) for l, r in eqs):
            assert s is not None
            binding = {}
            for v in vs:
                binding = match(apply(s, v), g[v], binding)
                assert binding is not None


def test_large_inputs_terminate():
    n = 10_000
    vs = [Var(f"V{i}") for i in range(n + 1)]
    assert len(mgu([(vs[i], vs[i + 1]) for i in range(n)])) == n
    ws = [Var(f"W{i}") for i in range(n)]
    assert len(mgu([(ws[i], App("f", (vs[i],))) for i in range(n)])) == n
    chain = [(vs[i], App("f", (vs[i + 1],))) for i in range(100)]
    assert len(mgu(chain)) == 100
    assert mgu(chain + [(vs[100], vs[0])]) is None


def test_equalizer_examples():
    g = term_arrow(2, App("g", (x1, x2)))
    assert equalizer(g, g) == identity("tt")
    assert equalizer(term_arrow(1, App("f", (x1,))), term_arrow(1, App("f", (a,)))) == term_arrow(0, a)
    assert equalizer(term_arrow(1, x1), term_arrow(1, App("f", (x1,)))) is None


def test_pullback_oracle_examples():
    aa, ba = Arrow("", "tt", (a, a)), Arrow("", "tt", (b, a))
    r = pullback_oracle(aa, duplicator("t"))
    assert r == PullbackResult("", identity(""), term_arrow(0, a))
    assert pullback_oracle(ba, duplicator("t")) is None
    r = pullback_oracle(discharger("t"), discharger("t"))
    assert r.apex == "tt"
    assert r.proj_left == term_arrow(2, x1) and r.proj_right == term_arrow(2, x2)


def test_verify_universal_examples():
    bang = discharger("t")
    good = pullback_oracle(bang, bang)
    assert verify_universal(good, bang, bang, 2, {"a": 0, "f": 1})
    bad = PullbackResult("tt", term_arrow(2, x2), term_arrow(2, x2))
    assert not verify_universal(bad, bang, bang, 2, {"a": 0, "f": 1})
    aa = Arrow("", "tt", (a, a))
    alpha = pullback_oracle(aa, duplicator("t"))
    assert verify_universal(alpha, aa, duplicator("t"), 2)


def test_equalizer_and_pullback_agree():
    rng = random.Random(3)
    for _ in range(200):
        north, west = random_solvable_cospan(rng, rng.randint(1, 3), 3)
        r = pullback_oracle(west, north)
        assert r is not None
        assert compose(r.proj_left, west) == compose(r.proj_right, north)
        # merging the projections equalizes the disjoint-union arrows
        nx = len(west.dom)
        merged = Arrow(r.apex, west.dom + north.dom, r.proj_left.comps + r.proj_right.comps)
        left = Arrow(west.dom + north.dom, west.cod, west.comps)
        shifted = term_arrow(nx + len(north.dom),
                             *(substitute(c, {Ph(j): Ph(j + nx) for j in range(1, len(north.dom) + 1)})
                               for c in north.comps))
        assert compose(merged, left) == compose(merged, shifted)


@pytest.mark.parametrize("seed", range(3))
def test_random_pullbacks_are_universal(seed):
    rng = random.Random(seed)
    for _ in range(5):
        north, west = random_solvable_cospan(rng, 1, 2, {"a": 0, "f": 1})
        r = pullback_oracle(west, north)
        if len(r.apex) <= 2:
            assert verify_universal(r, west, north, 1, {"a": 0, "f": 1})
