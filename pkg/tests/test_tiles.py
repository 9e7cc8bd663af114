import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.laws import exchange_holds, random_tile_grid
from artifact.random_gen import random_cospan, random_solvable_cospan
from artifact.syntax import App, Signature
from artifact.theory import (Arrow, Ph, compose, discharger, duplicator, identity, symmetry,
                             tensor, term_arrow)
from artifact.tiles import (Basic, BorderError, D_nabla, D_op, Dh_op, HComp, R_gamma, R_nabla,
                            R_op, Tile, basic_tiles, dh_nabla, dh_prime, dual, eval_proof, hcomp,
                            hid, lift_R, par, proof_lines, sequential_decompose,
                            synthesize_pullback, system_for, vcomp, vid)
from artifact.unify import PullbackResult, pullback_oracle, verify_universal

from artifact.engine import clause_tile, head_decompositions, program_tiles
from artifact.syntax import parse_program

from strategies import arrows

a, b = App("a", ()), App("b", ())
x1, x2 = Ph(1), Ph(2)
f = term_arrow(1, App("f", (x1,)))


def as_result(t: Tile) -> PullbackResult:
    return PullbackResult(t.final.dom, t.final, t.effect)


def test_basic_tiles_counts():
    sys = basic_tiles(Signature.of({"a": 0, "b": 0, "f": 1}))
    assert len(sys) == 12
    assert sorted(basic_tiles(Signature()).names()) == ["D_nabla", "R_gamma", "R_nabla"]
    assert all(t.commutes() for _, t in sys.tiles)


def test_basic_tile_borders():
    assert R_op("f", 1).border == (f, f, identity("t"), identity("t"))
    dup_f = compose(duplicator("t"), tensor(identity("t"), f))
    assert D_op("f", 1).border == (tensor(f, identity("t")), duplicator("t"), dup_f, f)
    assert Dh_op("f", 1).border == (duplicator("t"), tensor(f, identity("t")), f, dup_f)
    assert R_nabla().border == (duplicator("t"), duplicator("t"), identity("t"), identity("t"))
    assert R_gamma().border == (symmetry("t", "t"), symmetry("t", "t"),
                                identity("tt"), identity("tt"))
    assert D_nabla().border == (tensor(duplicator("t"), identity("t")),
                                tensor(identity("t"), duplicator("t")),
                                duplicator("t"), duplicator("t"))


def test_identities():
    t = R_op("f", 1)
    assert hcomp(t, hid(t.effect)) == t
    assert vcomp(t, vid(t.final)) == t
    assert hid(identity("t")) == vid(identity("t"))
    assert par(t, hid(identity(""))) == t
    v = vid(duplicator("t"))
    assert v.initial == v.final == duplicator("t")


def test_mismatched_borders():
    with pytest.raises(BorderError):
        hcomp(R_op("f", 1), R_nabla())
    with pytest.raises(BorderError):
        vcomp(R_op("f", 1), R_nabla())
    bad = HComp(Basic("R_f"), Basic("R_nabla"))
    with pytest.raises(BorderError):
        eval_proof(bad, basic_tiles(Signature.of({"f": 1})))


def test_discharger_square_is_par_of_identities():
    bang = discharger("t")
    sq = par(hid(bang), vid(bang))
    r = pullback_oracle(bang, bang)
    assert sq.initial == bang and sq.trigger == bang
    assert (sq.final, sq.effect) == (r.proj_left, r.proj_right)


def test_synthesis_examples():
    nabla = duplicator("t")
    alpha = synthesize_pullback(nabla, Arrow("", "tt", (a, a)))
    assert alpha.border == (nabla, Arrow("", "tt", (a, a)), term_arrow(0, a), identity(""))
    assert synthesize_pullback(nabla, Arrow("", "tt", (b, a))) is None
    assert synthesize_pullback(f, f).border == R_op("f", 1).border
    west = tensor(identity("t"), term_arrow(0, a))
    t = synthesize_pullback(nabla, west)
    assert t is not None and t.border == dh_prime("a", 0).border


def test_lift_r():
    assert lift_R(f).border == R_op("f", 1).border
    t = compose(duplicator("t"), tensor(identity("t"), f))
    lifted = lift_R(t)
    assert lifted.border == (t, t, identity("t"), identity("t"))
    assert eval_proof(lifted.proof, system_for(lifted)) == lifted
    assert lift_R(symmetry("t", "t")).border == R_gamma().border
    with pytest.raises(ValueError):
        lift_R(discharger("t"))


def test_dual():
    assert dual(D_op("f", 1)).border == Dh_op("f", 1).border
    d = dual(D_nabla())
    assert d.border == dh_nabla().border
    assert eval_proof(d.proof, system_for(d)) == d
    t = R_op("f", 1)
    assert dual(dual(t)).border == t.border


def test_macros_have_their_borders():
    for cell in (dh_nabla(), dh_prime("f", 1), dh_prime("a", 0)):
        assert cell.commutes()
        assert eval_proof(cell.proof, system_for(cell)) == cell


def _check(north, west):
    t = synthesize_pullback(north, west)
    r = pullback_oracle(west, north)
    assert (t is None) == (r is None)
    if t is None:
        return
    assert (t.initial, t.trigger) == (north, west)
    assert t.commutes()
    assert eval_proof(t.proof, system_for(t)) == t
    return t


@pytest.mark.parametrize("seed", range(3))
def test_synthesis_matches_oracle(seed):
    rng = random.Random(seed)
    for i in range(100):
        n = rng.randint(1, 3)
        _check(*(random_solvable_cospan(rng, n, 3) if i % 2 else random_cospan(rng, n, 3)))


def test_synthesized_squares_are_universal():
    rng = random.Random(11)
    funs = {"a": 0, "f": 1}
    checked = 0
    while checked < 15:
        north, west = random_solvable_cospan(rng, 1, 2, funs)
        t = _check(north, west)
        if len(t.final.dom) <= 2:
            assert verify_universal(as_result(t), west, north, 1, funs)
            d = dual(t)
            assert verify_universal(as_result(d), d.trigger, d.initial, 1, funs)
            checked += 1


@settings(max_examples=200)
@given(st.integers(0, 2).flatmap(lambda n: st.tuples(arrows(n=n), arrows(n=n))))
def test_synthesis_matches_oracle_hypothesis(pair):
    _check(*pair)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_exchange_law(seed):
    assert exchange_holds(*random_tile_grid(random.Random(seed)))


def test_proof_lines_indent_by_depth():
    t = synthesize_pullback(duplicator("t"), Arrow("", "tt", (a, a)))
    assert proof_lines(t.proof) == ["vcomp", "  Dh_a", "  R_a"]


def test_sequential_decompose_seam():
    left = R_op("f", 1)
    t = hcomp(left, vid(compose(f, f)))
    got = sequential_decompose(t, f, compose(f, f))
    assert got is not None
    s1, s2 = got
    assert (s1.initial, s2.initial) == (f, compose(f, f))
    assert hcomp(s1, s2) == t
    assert sequential_decompose(t, identity("t"), t.initial)[1] == t


def test_head_witness_splits_into_clause_and_column():
    p = parse_program("sum(s(X1),X2,s(X3)) :- sum(X1,X2,X3).")
    c = p.clauses[0]
    tc = clause_tile(c)
    for d in head_decompositions(c):
        t2 = term_arrow(len(d.observation.cod), *d.head.args)
        s1, s2 = sequential_decompose(d.tile, tc.initial, t2, sys=program_tiles(p))
        assert s1 == tc
        assert s2.initial == t2 and s2.trigger == tc.effect and s2.effect == d.observation
