import itertools

import pytest

from rnprover.formula import Connective as C
from rnprover.logics import get_logic, make_cn, make_ipl, make_s4
from rnprover.rnmatrix_core import validate_spec


def cell(spec, conn, *labels):
    return {v.label for v in spec.lookup(conn, tuple(spec.value(x) for x in labels))}


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40, 100])
def test_cn_validates(n):
    assert validate_spec(make_cn(n)) == []


def test_shipped_specs_validate():
    assert validate_spec(make_ipl()) == []
    assert validate_spec(make_s4()) == []


def test_c1_values_and_snapshots():
    c1 = make_cn(1)
    assert [v.label for v in c1.values] == ["T1", "t0_1", "F1"]
    assert [v.snapshot for v in c1.values] == [(1, 0, 1), (1, 1, 0), (0, 1, 1)]
    assert {v.label for v in c1.designated} == {"T1", "t0_1"}
    assert len(make_cn(3).values) == 5


def test_cn_tables():
    c3 = make_cn(3)
    D = {"T3", "t0_3", "t1_3", "t2_3"}
    assert cell(c3, C.NOT, "T3") == {"F3"}
    assert cell(c3, C.NOT, "F3") == {"T3"}
    assert cell(c3, C.NOT, "t1_3") == D
    assert cell(c3, C.AND, "t0_3", "T3") == D
    assert cell(c3, C.AND, "F3", "t2_3") == {"F3"}
    assert cell(c3, C.OR, "F3", "F3") == {"F3"}
    assert cell(c3, C.OR, "T3", "F3") == {"T3"}
    assert cell(c3, C.OR, "T3", "t1_3") == D
    assert cell(c3, C.IMPLIES, "t2_3", "F3") == {"F3"}
    assert cell(c3, C.IMPLIES, "F3", "F3") == {"T3"}
    assert cell(c3, C.IMPLIES, "F3", "t0_3") == D
    assert cell(c3, C.IMPLIES, "t0_3", "T3") == D


def test_cn_rules():
    c3 = make_cn(3)
    rules = c3.local_rules
    assert [r.trigger.label for r in rules] == ["t0_3", "t1_3", "t2_3"]
    assert rules[0].forced == (("contradiction", frozenset({c3.value("T3")})),)
    assert dict(rules[2].forced)["consistency"] == {c3.value("t1_3")}
    assert dict(rules[2].forced)["contradiction"] == {c3.value(f"t{k}_3") for k in range(3)}


def test_cn_rejects_zero():
    with pytest.raises(ValueError):
        make_cn(0)


def test_ipl_tables():
    ipl = make_ipl()
    assert cell(ipl, C.NOT, "F") == {"F", "T"}
    assert cell(ipl, C.NOT, "T") == {"F"}
    assert cell(ipl, C.IMPLIES, "F", "F") == {"F", "T"}
    assert cell(ipl, C.IMPLIES, "T", "F") == {"F"}
    assert cell(ipl, C.AND, "T", "F") == {"F"}
    assert cell(ipl, C.OR, "T", "F") == {"T"}
    assert cell(ipl, C.TOP) == {"T"} and cell(ipl, C.BOTTOM) == {"F"}


def test_ipl_picking_true_is_classical():
    ipl = make_ipl()
    F, T = ipl.values
    classical = {
        C.NOT: lambda a: not a, C.AND: lambda a, b: a and b,
        C.OR: lambda a, b: a or b, C.IMPLIES: lambda a, b: (not a) or b,
    }
    for conn, fn in classical.items():
        for args in itertools.product([F, T], repeat=conn.arity):
            out = ipl.lookup(conn, args)
            pick = T if T in out else F
            assert (pick == T) == fn(*(a == T for a in args))


def test_s4_tables():
    s4 = make_s4()
    assert cell(s4, C.BOX, "1") == {"0"}
    assert cell(s4, C.OR, "1", "0") == {"1", "2"}
    assert cell(s4, C.NOT, "0") == {"1", "2"}
    assert [cell(s4, C.IMPLIES, "2", y) for y in "210"] == [{"2"}, {"1"}, {"0"}]
    assert [cell(s4, C.IMPLIES, "1", y) for y in "210"] == [{"2"}, {"1", "2"}, {"0"}]
    assert [cell(s4, C.IMPLIES, "0", y) for y in "210"] == [{"2"}, {"1", "2"}, {"1", "2"}]
    assert cell(s4, C.AND, "1", "2") == {"1"}
    for v in s4.values:
        assert len(s4.lookup(C.BOX, (v,))) == 1
    assert {v.label for v in s4.designated} == {"1", "2"}


def test_get_logic():
    assert get_logic("c40").logic_id == "c40"
    assert get_logic("IPL").logic_id == "ipl"
    assert get_logic("s4").depth_measure == "modal"
    for bad in ("c0", "c", "k", "c-1", "s5"):
        with pytest.raises(ValueError):
            get_logic(bad)
