"""The shipped RNmatrices: da Costa's C_n, 2-valued intuitionistic logic, S4."""

from __future__ import annotations

import itertools
import re

from .formula import Connective as C
from .rnmatrix_core import LocalRule, Multifunction, RNmatrixSpec, TruthValue, WitnessRule

CN_LANGUAGE = frozenset({C.NOT, C.AND, C.OR, C.IMPLIES})
IPL_LANGUAGE = frozenset({C.TOP, C.BOTTOM, C.NOT, C.AND, C.OR, C.IMPLIES})
S4_LANGUAGE = IPL_LANGUAGE | {C.BOX}


def _table(values, fn, arity):
    return Multifunction(arity, {args: fn(*args) for args in itertools.product(values, repeat=arity)})


def make_cn(n: int) -> RNmatrixSpec:
    """RNmatrix for C_n: values T_n, t^n_0 .. t^n_(n-1), F_n."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"C_n needs n >= 1, got {n!r}")
    # snapshot <b(a), b(~a), b(a^1), ..., b(a^n)>: t_k has a^(k+1) false
    top = TruthValue(0, f"T{n}", "TT", (1, 0) + (1,) * n)
    incons = tuple(
        TruthValue(k + 1, f"t{k}_{n}", f"tt{k}", (1, 1) + tuple(0 if j == k + 1 else 1 for j in range(1, n + 1)))
        for k in range(n)
    )
    bottom = TruthValue(n + 1, f"F{n}", "FF", (0, 1) + (1,) * n)
    values = (top,) + incons + (bottom,)
    designated = frozenset(values) - {bottom}
    inc = set(incons)

    def neg(x):
        if x == top:
            return {bottom}
        if x == bottom:
            return {top}
        return designated

    def imp(x, y):
        if y == bottom:
            return {top} if x == bottom else {bottom}
        if y in inc:
            return designated
        return designated if x in inc else {top}

    def conj(x, y):
        if x == bottom or y == bottom:
            return {bottom}
        if x == top and y == top:
            return {top}
        return designated

    def disj(x, y):
        if x in inc or y in inc:
            return designated
        if x == bottom and y == bottom:
            return {bottom}
        return {top}

    ops = {
        C.NOT: _table(values, neg, 1),
        C.IMPLIES: _table(values, imp, 2),
        C.AND: _table(values, conj, 2),
        C.OR: _table(values, disj, 2),
    }
    rules = [LocalRule(incons[0], (("contradiction", frozenset({top})),), "t0 on b forces T on b & ~b")]
    for k in range(1, n):
        rules.append(
            LocalRule(
                incons[k],
                (("contradiction", frozenset(inc)), ("consistency", frozenset({incons[k - 1]}))),
                f"t{k} on b forces b & ~b inconsistent and b^1 = t{k - 1}",
            )
        )
    return RNmatrixSpec(
        logic_id=f"c{n}",
        values=values,
        designated=designated,
        ops=ops,
        restrictions=tuple(rules),
        language=CN_LANGUAGE,
        depth_measure=None,
        rendering="datatype",
    )


def make_ipl() -> RNmatrixSpec:
    """Two-valued RNmatrix for intuitionistic propositional logic (proved / not proved)."""
    T = TruthValue(1, "T", "TT")
    F = TruthValue(0, "F", "FF")
    values = (F, T)

    def imp(x, y):
        if x == F and y == F:
            return {F, T}
        return {T} if y == T else {F}

    ops = {
        C.BOTTOM: Multifunction(0, {(): {F}}),
        C.TOP: Multifunction(0, {(): {T}}),
        C.NOT: _table(values, lambda x: {F, T} if x == F else {F}, 1),
        C.IMPLIES: _table(values, imp, 2),
        C.AND: _table(values, lambda x, y: {T} if x == T and y == T else {F}, 2),
        C.OR: _table(values, lambda x, y: {T} if T in (x, y) else {F}, 2),
    }
    keep_proved = frozenset({T})
    rules = (
        WitnessRule(
            C.IMPLIES,
            trigger=(("left", F), ("right", F), ("self", F)),
            witness=(("left", T), ("right", F)),
            preserve=keep_proved,
            description="unproved implication needs a row proving the antecedent but not the consequent",
        ),
        WitnessRule(
            C.NOT,
            trigger=(("child", F), ("self", F)),
            witness=(("child", T),),
            preserve=keep_proved,
            description="unproved negation needs a row proving the negated formula",
        ),
    )
    return RNmatrixSpec(
        logic_id="ipl",
        values=values,
        designated=frozenset({T}),
        ops=ops,
        restrictions=rules,
        language=IPL_LANGUAGE,
        depth_measure="impneg",
        rendering="bool",
    )


def make_s4() -> RNmatrixSpec:
    """Three-valued RNmatrix for S4: 2 necessarily true, 1 contingently true, 0 false."""
    zero, one, two = (TruthValue(i, str(i), f"V{i}") for i in range(3))
    values = (zero, one, two)

    def imp(x, y):
        if y == two:
            return {two}
        if x == two:
            return {y}
        if y == one or x == zero:
            return {one, two}
        return {zero}

    def conj(x, y):
        return {min(x, y)}

    def disj(x, y):
        if two in (x, y):
            return {two}
        if x == zero and y == zero:
            return {zero}
        return {one, two}

    ops = {
        C.BOTTOM: Multifunction(0, {(): {zero}}),
        C.TOP: Multifunction(0, {(): {two}}),
        C.NOT: _table(values, lambda x: {one, two} if x == zero else {zero}, 1),
        C.BOX: _table(values, lambda x: {two} if x == two else {zero}, 1),
        C.IMPLIES: _table(values, imp, 2),
        C.AND: _table(values, conj, 2),
        C.OR: _table(values, disj, 2),
    }
    rules = (
        WitnessRule(
            None,
            trigger=(("self", one),),
            witness=(("self", zero),),
            preserve=frozenset({two}),
            description="contingent truth needs a row falsifying the formula that keeps necessary truths",
        ),
    )
    return RNmatrixSpec(
        logic_id="s4",
        values=values,
        designated=frozenset({one, two}),
        ops=ops,
        restrictions=rules,
        language=S4_LANGUAGE,
        depth_measure="modal",
        rendering="int",
    )


_CN = re.compile(r"c([1-9][0-9]*)\Z")


def get_logic(selector: str) -> RNmatrixSpec:
    """Spec for a selector string: ``c<n>``, ``ipl`` or ``s4``."""
    key = selector.strip().lower()
    if key == "ipl":
        return make_ipl()
    if key == "s4":
        return make_s4()
    m = _CN.match(key)
    if m:
        return make_cn(int(m.group(1)))
    raise ValueError(f"unknown logic {selector!r}; expected c<n> (n >= 1), ipl or s4")
