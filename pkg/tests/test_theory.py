import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.syntax import App, Atom, Var
from artifact.theory import (Arrow, InterfaceError, Ph, Substitution, arrow_str,
                             arrow_to_substitution, compose, compose_all, decompose_slices,
                             discharger, duplicator, identity, substitution_to_arrow, symmetry,
                             tensor, term_arrow)

from strategies import arrows

a, b = App("a", ()), App("b", ())
x1, x2 = Ph(1), Ph(2)


def f(t):
    return App("f", (t,))


def test_compose_plugs_in():
    assert compose(term_arrow(0, a), term_arrow(1, f(x1))) == term_arrow(0, f(a))
    g = term_arrow(2, App("g", (x2, x1)))
    assert compose(identity("tt"), g) == g


def test_compose_into_predicates():
    r = Arrow("tt", "p", ((Atom("r", (x1, x2)),),))
    got = compose(duplicator("t"), r)
    assert got == Arrow("t", "p", ((Atom("r", (x1, x1)),),))


def test_compose_interface_mismatch():
    with pytest.raises(InterfaceError):
        compose(identity("t"), identity("tt"))


def test_tensor():
    assert tensor(identity("t"), identity("t")) == identity("tt")
    assert tensor(term_arrow(1, f(x1)), term_arrow(0, a)) == term_arrow(1, f(x1), a)
    g = term_arrow(2, App("g", (x1, x2)))
    assert tensor(g, identity("")) == g
    assert tensor(term_arrow(1, x1), term_arrow(1, f(x1))) == term_arrow(2, x1, f(x2))


def test_identity_and_auxiliaries():
    assert identity("").comps == ()
    assert identity("t").comps == (x1,)
    assert symmetry("t", "t").comps == (x2, x1)
    assert symmetry("", "tt") == identity("tt")
    assert compose(symmetry("t", "t"), symmetry("t", "t")) == identity("tt")
    assert duplicator("t").comps == (x1, x1)
    assert compose(duplicator("t"), symmetry("t", "t")) == duplicator("t")
    assert duplicator("") == identity("")
    assert discharger("t") == Arrow("t", "", ())
    assert tensor(discharger("t"), discharger("t")) == discharger("tt")


@given(arrows())
def test_discharger_is_terminal(x):
    assert compose(x, discharger(x.cod)) == discharger(x.dom)


def test_substitution_round_trip_examples():
    X1, X2, Y = Var("X1"), Var("X2"), Var("Y")
    s = Substitution.of([(X1, f(a)), (X2, a)])
    arr = substitution_to_arrow(s, [], [X1, X2])
    assert arr == term_arrow(0, f(a), a)
    assert arrow_to_substitution(arr, [], [X1, X2]) == s
    X = Var("X")
    assert substitution_to_arrow(Substitution.of([]), [X], [X]) == identity("t")
    share = Substitution.of([(X1, Y), (X2, Y)])
    assert substitution_to_arrow(share, [Y], [X1, X2]) == duplicator("t")
    assert arrow_to_substitution(duplicator("t"), [Y], [X1, X2]) == share


def test_substitution_drops_identity_bindings():
    X = Var("X")
    assert Substitution.of([(X, X)]).bindings == ()
    assert str(Substitution.of([])) == "ε"


def test_decompose_examples():
    assert decompose_slices(term_arrow(1, f(x1))) == [term_arrow(1, f(x1))]
    s = decompose_slices(term_arrow(0, f(a)))
    assert len(s) == 2 and compose_all(s) == term_arrow(0, f(a))
    dup_f = compose(duplicator("t"), tensor(identity("t"), term_arrow(1, f(x1))))
    s = decompose_slices(dup_f)
    assert s == [duplicator("t"), term_arrow(2, x1, f(x2))]


@settings(max_examples=500)
@given(st.integers(0, 4).flatmap(lambda m: arrows(m=m, depth=3)))
def test_slices_recompose(x):
    slices = decompose_slices(x)
    if slices:
        assert compose_all(slices) == x
    else:
        assert x == identity(x.dom)


@given(arrows())
def test_substitution_arrow_round_trip(x):
    names_in = [Var(f"V{i}") for i in range(len(x.dom))]
    names_out = [Var(f"W{i}") for i in range(len(x.cod))]
    s = arrow_to_substitution(x, names_in, names_out)
    assert substitution_to_arrow(s, names_in, names_out) == x


def test_arrow_str():
    assert arrow_str(term_arrow(1, f(x1), a)) == "<f(x1), a> : t -> tt"
