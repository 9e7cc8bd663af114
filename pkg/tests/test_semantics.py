import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.random_gen import random_goal_for, random_program
from artifact.semantics import (StateSpaceOverflow, bisim_equiv, closure_equiv, congruence_probe,
                                inclusion_chain, op1_ground_oracle, op1_least_herbrand,
                                op2_correct_answers, op3_computed_answers, op4_resolvents,
                                trace_equiv)
from artifact.syntax import (App, Clause, Program, Var, atom_str, goal_str, parse_atom,
                             parse_goal, parse_program, variables_of)
from artifact.theory import Substitution

from conftest import P41, P41_QA, P45

a = App("a", ())


def goal(text):
    return parse_goal(f"?- {text}.")


def atoms(xs):
    return {atom_str(x) for x in xs}


# ------------------------------------------------------------ Op1 .. Op4

def test_op1_examples(p41, p41_qa):
    assert atoms(op1_least_herbrand(p41, 2)) == {"q(b)", "r(a,a)"}
    assert atoms(op1_least_herbrand(p41_qa, 2)) == {"p(f(a),a)", "q(a)", "r(a,a)"}
    assert len(op1_least_herbrand(Program(), 2)) == 0


@pytest.mark.parametrize("text", [P41, P41_QA, P45])
def test_op1_matches_ground_oracle(text):
    p = parse_program(text)
    assert op1_least_herbrand(p, 2).atoms == op1_ground_oracle(p, 2).atoms


def test_op2_examples(p41_qa, p45):
    assert parse_atom("q(X1)") in op2_correct_answers(parse_program("q(X)."), 1)
    op2 = op2_correct_answers(p41_qa, 1)
    assert parse_atom("p(f(a),a)") in op2
    assert parse_atom("p(f(X1),X2)") not in op2
    assert parse_atom("p(a)") in op2_correct_answers(p45, 1)


def test_op3_examples(p45, p41_qa):
    assert atoms(op3_computed_answers(p45, "p")) == {"p(X1)", "p(a)"}
    assert atoms(op3_computed_answers(p45, "q")) == {"q(X1)"}
    assert atoms(op3_computed_answers(p41_qa, "p")) == {"p(f(a),a)"}
    with pytest.raises(KeyError):
        op3_computed_answers(p45, "zz")


def test_op4_examples(p41):
    got = {(atom_str(x), goal_str(g)) for x, g in op4_resolvents(p41, "p", 1)}
    assert got == {("p(X1,X2)", "?- p(X1,X2)."), ("p(f(_F1),X2)", "?- q(_F1), r(_F1,X2).")}
    got = {(atom_str(x), goal_str(g)) for x, g in op4_resolvents(p41, "q", 1)}
    assert got == {("q(X1)", "?- q(X1)."), ("q(b)", "?- true.")}
    assert len(op4_resolvents(p41, "r", 0)) == 1


def test_inclusion_chain_on_worked_programs(p41, p41_qa, p45, sum_program):
    for p in (p41, p41_qa, p45):
        assert inclusion_chain(p, 2).passed
    assert inclusion_chain(sum_program, 2).passed


# ------------------------------------------------------------ equivalences

def test_trace_examples(p45):
    assert trace_equiv(goal("p(X)"), goal("p(X)"), p45).equivalent
    r = trace_equiv(goal("p(X)"), goal("q(X)"), p45)
    assert r.separated and r.witness == "[a/X]" and str(r) == "separated: [a/X]"
    assert trace_equiv(goal("q(X)"), goal("q(Y)"), p45).equivalent


def test_closure_examples(p45):
    p, q = goal("p(X)"), goal("q(X)")
    assert closure_equiv(p, q, p45, 1, depth=2).equivalent
    assert closure_equiv(p, q, p45, 2, depth=2).equivalent
    assert closure_equiv(p, q, p45, 3).separated
    for rel in (1, 2, 3):
        assert closure_equiv(p, p, p45, rel).equivalent


def test_closure_one_separates_with_a_ground_witness(p41):
    r = closure_equiv(goal("q(X)"), goal("r(X,X)"), p41, 1)
    assert r.separated and r.witness in ("[a/X]", "[b/X]")


def test_inconclusive_when_truncated(sum_program):
    r = trace_equiv(goal("sum(X,Y,Z)"), goal("sum(Y,X,Z)"), sum_program, 3)
    assert r.verdict == "inconclusive" and r.truncated


def test_bisim_examples(p45):
    p, q = goal("p(X)"), goal("q(X)")
    assert bisim_equiv(p, q, p45, 0).equivalent
    assert bisim_equiv(p, q, p45, 1).separated
    dup = p45.with_clauses(p45.clauses + (Clause(parse_atom("p(Y)"), (), "c4"),))
    for k in range(5):
        assert bisim_equiv(p, p, dup, k).equivalent


def test_bisim_refines_with_k(p41_qa):
    goals = [goal(t) for t in ("p(X,Y)", "q(X)", "r(X,Y)", "r(a,X)", "q(a)")]
    for g1, g2 in itertools.combinations(goals, 2):
        prev = True
        for k in range(4):
            now = bisim_equiv(g1, g2, p41_qa, k).equivalent
            assert prev or not now
            prev = now


def test_bisim_overflow():
    p = parse_program("n(s(X)) :- n(X), n(X).\nn(0).")
    with pytest.raises(StateSpaceOverflow):
        bisim_equiv(goal("n(X)"), goal("n(Y)"), p, 6, limit=20)


def test_congruence_examples(p45):
    ctx = goal("q(Y)")
    sigma = Substitution.of([(Var("X"), a)])
    assert congruence_probe(goal("p(X)"), goal("p(X)"), p45, ctx, sigma).passed
    assert congruence_probe(goal("p(a)"), goal("p(a)"), p45, ctx, sigma).passed


def _sample(rng, p, n):
    return [random_goal_for(rng, p, max_atoms=1) for _ in range(n)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_trace_is_an_equivalence(seed):
    rng = random.Random(seed)
    p = random_program(rng)
    gs = _sample(rng, p, 4)
    eq = {}
    for x, y in itertools.product(range(4), repeat=2):
        eq[x, y] = trace_equiv(gs[x], gs[y], p, 5).verdict
    for x in range(4):
        assert eq[x, x] != "separated"
    for x, y in itertools.product(range(4), repeat=2):
        assert eq[x, y] == eq[y, x]
    for x, y, z in itertools.product(range(4), repeat=3):
        if eq[x, y] == eq[y, z] == "equivalent":
            assert eq[x, z] == "equivalent"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_trace_refines_closure_one(seed):
    rng = random.Random(seed)
    p = random_program(rng)
    g1, g2 = _sample(rng, p, 2)
    if trace_equiv(g1, g2, p, 5).equivalent:
        assert not closure_equiv(g1, g2, p, 1, depth=1, bound=5).separated


def test_truncated_agreement_is_inconclusive(sum_program):
    r = closure_equiv(goal("sum(X,0,X)"), goal("sum(X,0,X)"), sum_program, 1)
    assert r.verdict == "inconclusive" and r.truncated and str(r) == "inconclusive (at bound)"


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_congruence_random(seed):
    # pairs found equivalent stay equivalent in context and under instantiation
    rng = random.Random(seed)
    p = random_program(rng)
    gs = _sample(rng, p, 6)
    ctx = random_goal_for(rng, p, max_atoms=1)
    for g1, g2 in itertools.combinations(gs, 2):
        if variables_of(g1) != variables_of(g2):
            continue
        sigma = Substitution.of([(Var(v), a) for v in variables_of(g1)[:1]])
        r = congruence_probe(g1, g2, p, ctx, sigma, 4)
        assert r.passed or not r.precondition
