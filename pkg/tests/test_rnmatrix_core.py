import dataclasses

import pytest

from rnprover.formula import And, Atom, Connective as C, Implies, Not, subformulas
from rnprover.logics import make_cn, make_ipl, make_s4
from rnprover.rnmatrix_core import (
    LocalInstance, Multifunction, WitnessInstance, instantiate, is_designated, lookup, validate_spec,
)

p = Atom("p")


def test_lookup_examples():
    c1, s4, ipl = make_cn(1), make_s4(), make_ipl()
    T1, t0, F1 = c1.values
    assert lookup(c1, C.NOT, [t0]) == {T1, t0}
    assert lookup(s4, C.IMPLIES, [s4.value(1), s4.value(1)]) == {s4.value(1), s4.value(2)}
    assert lookup(ipl, C.IMPLIES, [ipl.value("F"), ipl.value("T")]) == {ipl.value("T")}


def test_lookup_errors():
    c1 = make_cn(1)
    with pytest.raises(KeyError):
        lookup(c1, C.BOX, [c1.values[0]])
    with pytest.raises(ValueError):
        lookup(c1, C.AND, [c1.values[0]])


def test_is_designated():
    c1, s4, ipl = make_cn(1), make_s4(), make_ipl()
    assert not is_designated(c1, c1.value("F1"))
    assert is_designated(s4, s4.value(1))
    assert is_designated(ipl, ipl.value("T"))
    with pytest.raises(ValueError):
        is_designated(ipl, s4.value(2))


def test_value_lookup_by_label_symbol_id():
    c2 = make_cn(2)
    assert c2.value("t1_2") is c2.value("tt1") is c2.value(2)
    with pytest.raises(KeyError):
        c2.value("nope")


def test_validate_empty_cell():
    ipl = make_ipl()
    F, T = ipl.values
    table = dict(ipl.ops[C.AND].table)
    table[(T, T)] = set()
    bad = dataclasses.replace(ipl, ops={**ipl.ops, C.AND: Multifunction(2, table)})
    assert validate_spec(bad) == ["empty output set at and(T, T)"]


def test_validate_designated_everything():
    ipl = make_ipl()
    bad = dataclasses.replace(ipl, designated=frozenset(ipl.values), restrictions=())
    assert validate_spec(bad) == ["designated must be proper subset of values"]


def test_validate_missing_connective_and_cell():
    s4 = make_s4()
    ops = dict(s4.ops)
    del ops[C.BOX]
    table = dict(s4.ops[C.NOT].table)
    del table[(s4.value(0),)]
    ops[C.NOT] = Multifunction(1, table)
    found = validate_spec(dataclasses.replace(s4, ops=ops))
    assert "no multifunction for connective box" in found
    assert "missing cell at not(0)" in found


def test_validate_preserve_must_be_designated():
    s4 = make_s4()
    rule = dataclasses.replace(s4.restrictions[0], preserve=frozenset({s4.value(0)}))
    found = validate_spec(dataclasses.replace(s4, restrictions=(rule,)))
    assert len(found) == 1 and "preserve set not designated" in found[0]


def test_multifunction_arity():
    with pytest.raises(ValueError):
        make_s4().ops[C.BOX](make_s4().value(0), make_s4().value(0))


def test_local_rule_clauses_need_their_columns():
    c2 = make_cn(2)
    # t1 on p: p & ~p present, p^1 absent
    t = subformulas(And(p, Not(p)))
    insts = [i for r in c2.local_rules for i in instantiate(r, t)]
    assert insts == [
        LocalInstance(0, c2.value("t0_2"), ((2, frozenset({c2.value("T2")})),)),
        LocalInstance(0, c2.value("t1_2"), ((2, frozenset({c2.value("t0_2"), c2.value("t1_2")})),)),
    ]
    assert [i for r in c2.local_rules for i in instantiate(r, subformulas(p))] == []


def test_witness_rules_shapes():
    ipl = make_ipl()
    t = subformulas(Implies(p, Not(p)))
    insts = [i for r in ipl.witness_rules for i in instantiate(r, t)]
    F, T = ipl.values
    assert [type(i) for i in insts] == [WitnessInstance, WitnessInstance]
    imp = next(i for i in insts if i.column == 2)
    assert imp.trigger == ((0, F), (1, F), (2, F))
    assert imp.witness == ((0, T), (1, F))
    neg = next(i for i in insts if i.column == 1)
    assert neg.witness == ((0, T),)
    s4 = make_s4()
    assert len(instantiate(s4.witness_rules[0], t)) == 3
