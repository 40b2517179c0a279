import pickle

import pytest
from hypothesis import given, strategies as st

from rnprover.formula import (
    BOTTOM, TOP, And, Atom, Binary, Box, Connective, Implies, Not, Or, Unary,
    atoms, connectives, consistency_degree, contradiction, impneg_depth,
    main_connective, modal_depth, size, subformulas,
)
from conftest import P

p, q = Atom("p"), Atom("q")


def formulas(max_leaves=12):
    leaves = st.sampled_from([Atom("p"), Atom("q"), Atom("r"), TOP, BOTTOM])
    return st.recursive(
        leaves,
        lambda kids: st.one_of(
            st.builds(Not, kids), st.builds(Box, kids),
            st.builds(And, kids, kids), st.builds(Or, kids, kids), st.builds(Implies, kids, kids),
        ),
        max_leaves=max_leaves,
    )


def test_subformula_order_matches_listing():
    t = subformulas(Or(p, Not(p)))
    assert list(t) == [p, Not(p), Or(p, Not(p))]
    assert t.root == Or(p, Not(p))
    assert t.child_positions(2) == (0, 1)


def test_single_atom():
    assert list(subformulas(p)) == [p]


def test_shared_subformulas_counted_once():
    f = And(Not(p), Not(p))
    assert len(subformulas(f)) == 3


def test_equal_formulas_are_identical():
    a = consistency_degree(p, 12)
    b = consistency_degree(Atom("p"), 12)
    assert a is b
    assert hash(a) == hash(b)


def test_deep_tower_is_cheap():
    f = consistency_degree(p, 400)
    assert len(subformulas(f)) == 1 + 3 * 400
    assert size(consistency_degree(p, 3)) == 29


def test_consistency_degree():
    assert consistency_degree(p, 0) is p
    assert consistency_degree(p, 1) == Not(And(p, Not(p)))
    with pytest.raises(ValueError):
        consistency_degree(p, -1)


def test_contradiction():
    assert contradiction(p, 0) == And(p, Not(p))
    c1 = consistency_degree(p, 1)
    assert contradiction(p, 1) == And(c1, Not(c1))


def test_depths():
    assert modal_depth(P("#box p => p")) == 1
    assert modal_depth(P("#box (#box p | q)")) == 2
    assert modal_depth(p) == 0
    assert impneg_depth(P("~~(p | ~p)")) == 3
    assert impneg_depth(P("p => (q => p)")) == 2
    assert impneg_depth(P("p & q")) == 0


def test_queries():
    f = P("$true => ~(p & q)")
    assert connectives(f) == {Connective.TOP, Connective.IMPLIES, Connective.NOT, Connective.AND}
    assert atoms(f) == [p, q]
    assert main_connective(p) is None
    assert main_connective(f) is Connective.IMPLIES


def test_constructor_checks():
    with pytest.raises(ValueError):
        Unary(Connective.AND, p)
    with pytest.raises(ValueError):
        Binary(Connective.NOT, p, q)
    with pytest.raises(TypeError):
        Not("p")
    with pytest.raises(AttributeError):
        p.name = "q"


def test_pickle_keeps_identity():
    f = P("#box (p => ~q)")
    assert pickle.loads(pickle.dumps(f)) is f


@given(formulas())
def test_table_children_first(f):
    t = subformulas(f)
    assert t.root is f
    assert len(set(t)) == len(t)
    for i, g in enumerate(t):
        assert all(j < i for j in t.child_positions(i))


@given(formulas())
def test_table_deterministic(f):
    assert list(subformulas(f)) == list(subformulas(f))


@given(formulas())
def test_depth_bounds(f):
    assert 0 <= modal_depth(f) <= len(subformulas(f))
    assert impneg_depth(f) <= size(f)
