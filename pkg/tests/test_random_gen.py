import random

from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.random_gen import (random_cospan, random_goal, random_goal_for, random_program,
                                 random_solvable_cospan)
from artifact.syntax import Goal, Program, Signature
from artifact.unify import pullback_oracle

seeds = st.integers(0, 2**32 - 1)


@given(seeds)
def test_random_goal_shape(seed):
    g = random_goal(random.Random(seed))
    assert 1 <= len(g.atoms) <= 2
    assert all(a.predicate in ("p", "q", "r") for a in g.atoms)


@given(seeds)
def test_goals_use_defined_predicates(seed):
    rng = random.Random(seed)
    p = random_program(rng)
    g = random_goal_for(rng, p)
    defined = {c.head.predicate for c in p.clauses}
    assert all(a.predicate in defined for a in g.atoms)


def test_goal_for_empty_program():
    assert random_goal_for(random.Random(0), Program((), Signature())) == Goal(())


def test_seeded_generation_is_reproducible():
    assert random_program(random.Random(9)) == random_program(random.Random(9))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 3))
def test_solvable_cospans_are_solvable(seed, n):
    rng = random.Random(seed)
    north, west = random_solvable_cospan(rng, n, 3)
    assert north.cod == west.cod
    assert pullback_oracle(west, north) is not None


@given(seeds, st.integers(1, 3))
def test_cospans_share_a_codomain(seed, n):
    north, west = random_cospan(random.Random(seed), n, 3)
    assert north.cod == west.cod
