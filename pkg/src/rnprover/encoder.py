"""SMT-LIB rendering of "is there a restriction-consistent falsifying valuation".

A script is unsatisfiable exactly when the goal is valid (for the sound
variants).  Three variants are produced:

``SingleRow``
    One constant per column, no quantifiers.  Only for logics whose
    restrictions are all same-row rules.
``DepthIndexed(bound)``
    An uninterpreted row sort, a column datatype and ``mat : Row x Col -> Val``.
    Witness rules become ``forall r . trigger(r) => exists w . ...`` with a
    depth function on rows, ``depth(r_0) = 0`` and every depth <= bound.
``BoundedRows(k)``
    The row sort is a datatype of ``k`` constants and there is no depth.
    Only ``sat`` answers are conclusive.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from .formula import (
    Atom,
    Binary,
    Constant,
    Formula,
    SubformulaTable,
    Unary,
    connectives,
    impneg_depth,
    main_connective,
    modal_depth,
    subformulas,
)
from .rnmatrix_core import LocalInstance, RNmatrixSpec, TruthValue, WitnessRule, instantiate
from .tptp_io import format_formula


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class SingleRow:
    @property
    def name(self) -> str:
        return "single-row"


@dataclass(frozen=True)
class DepthIndexed:
    bound: Optional[int] = None  # None: the logic's depth measure of the goal

    @property
    def name(self) -> str:
        return "depth-indexed"


@dataclass(frozen=True)
class BoundedRows:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise EncodingError("BoundedRows needs at least one row")

    @property
    def name(self) -> str:
        return f"bounded-{self.k}"


EncodingVariant = Union[SingleRow, DepthIndexed, BoundedRows]


def depth_bound(spec: RNmatrixSpec, goal: Formula) -> int:
    if spec.depth_measure == "modal":
        return modal_depth(goal)
    if spec.depth_measure == "impneg":
        return impneg_depth(goal)
    return 0


def sound_variant(spec: RNmatrixSpec, goal: Formula) -> EncodingVariant:
    if spec.local_only:
        return SingleRow()
    return DepthIndexed(depth_bound(spec, goal))


# -- value rendering ---------------------------------------------------------

class ValueRendering:
    """How truth values of one logic appear in SMT-LIB terms."""

    def __init__(self, spec: RNmatrixSpec, style: Optional[str] = None):
        style = style or spec.rendering
        if style == "bool" and len(spec.values) != 2:
            raise EncodingError("Boolean rendering needs exactly two truth values")
        if style not in ("datatype", "int", "bool"):
            raise EncodingError(f"unknown value rendering {style!r}")
        self.spec = spec
        self.style = style
        self.values = tuple(spec.values)
        self.templates: dict = {}
        if style == "bool":
            # the designated value is true
            self.truthy = next(v for v in self.values if v in spec.designated)
        if style == "datatype":
            syms = [v.symbol or v.label for v in self.values]
            if len(set(syms)) != len(syms):
                raise EncodingError("truth value symbols must be distinct")

    @property
    def sort(self) -> str:
        return {"datatype": "VAL", "int": "Int", "bool": "Bool"}[self.style]

    def declarations(self) -> list:
        if self.style != "datatype":
            return []
        ctors = " ".join(f"({v.symbol or v.label})" for v in self.values)
        return [f"(declare-datatypes ((VAL 0)) (({ctors})))"]

    def literal(self, v: TruthValue) -> str:
        if self.style == "datatype":
            return v.symbol or v.label
        if self.style == "int":
            return str(v.id)
        return "true" if v == self.truthy else "false"

    def domain(self, term: str) -> Optional[str]:
        """Range constraint for one cell, when the sort is wider than the values."""
        if self.style != "int":
            return None
        ids = sorted(v.id for v in self.values)
        if ids != list(range(ids[0], ids[-1] + 1)):
            return "(or " + " ".join(f"(= {term} {i})" for i in ids) + ")"
        return f"(and (<= {ids[0]} {term}) (<= {term} {ids[-1]}))"

    def member(self, term: str, allowed) -> str:
        allowed = allowed if isinstance(allowed, (set, frozenset)) else frozenset(allowed)
        if len(allowed) == len(self.values) and allowed >= set(self.values):
            return "true"
        allowed_set = allowed
        allowed = [v for v in self.values if v in allowed_set]
        if not allowed:
            return "false"
        if self.style == "bool":
            return term if allowed[0] == self.truthy else f"(not {term})"
        others = [v for v in self.values if v not in allowed_set]
        if len(allowed) == 1:
            return f"(= {term} {self.literal(allowed[0])})"
        if len(others) == 1:
            return f"(distinct {term} {self.literal(others[0])})"
        if len(others) < len(allowed):
            return "(and " + " ".join(f"(distinct {term} {self.literal(v)})" for v in others) + ")"
        return "(or " + " ".join(f"(= {term} {self.literal(v)})" for v in allowed) + ")"

    def decode(self, text: str) -> TruthValue:
        text = text.strip()
        for v in self.values:
            if self.literal(v) == text:
                return v
        if self.style == "int" and text.startswith("(-"):
            raise ValueError(f"value {text!r} outside the truth values")
        raise ValueError(f"unrecognised truth value {text!r}")


def _conj(parts) -> str:
    parts = [p for p in parts if p != "true"]
    if not parts:
        return "true"
    if "false" in parts:
        return "false"
    return parts[0] if len(parts) == 1 else "(and " + " ".join(parts) + ")"


def _disj(parts) -> str:
    parts = [p for p in parts if p != "false"]
    if "true" in parts:
        return "true"
    if not parts:
        return "false"
    return parts[0] if len(parts) == 1 else "(or " + " ".join(parts) + ")"


# -- matrix constraints ------------------------------------------------------

def column_table(goal: Formula) -> dict:
    return {f: f"v{i}" for i, f in enumerate(subformulas(goal))}


def _ordered_groups(rv: ValueRendering, inputs, out_of) -> list:
    """Group input tuples by output set, ordered by first input; largest group last."""
    groups: dict = {}
    for args in inputs:
        groups.setdefault(out_of(args), []).append(args)
    ordered = list(groups.items())
    # the biggest group becomes the unconditional else-branch
    last = max(range(len(ordered)), key=lambda i: (len(ordered[i][1]), -i))
    ordered.append(ordered.pop(last))
    return ordered


def _rectangles(rv: ValueRendering, tuples) -> list:
    """Cover a set of (left, right) pairs by left-set x right-set products."""
    by_left: dict = {}
    for a, b in tuples:
        by_left.setdefault(a, set()).add(b)
    rects: dict = {}
    for a in rv.values:
        if a in by_left:
            rects.setdefault(frozenset(by_left[a]), []).append(a)
    return [(frozenset(lefts), rights) for rights, lefts in rects.items()]


def render_cons(
    spec: RNmatrixSpec,
    beta: Formula,
    columns: dict,
    cell: Optional[Callable[[str], str]] = None,
    rendering: Optional[ValueRendering] = None,
) -> Optional[str]:
    """Constraint tying column ``beta`` to its children through the table.

    ``cell`` maps a column symbol to the term holding its value (identity
    for single-row scripts).  Atoms give ``None``: they are unconstrained.
    """
    cell = cell or (lambda sym: sym)
    rv = rendering or ValueRendering(spec)
    conn = main_connective(beta)
    if conn is None:
        return None
    mf = spec.ops.get(conn)
    if mf is None:
        raise EncodingError(f"connective {conn.value} is not in the language of {spec.logic_id}")
    here = cell(columns[beta])
    if isinstance(beta, Constant):
        return rv.member(here, mf())
    template = rv.templates.get(conn)
    if template is None:
        template = rv.templates[conn] = _template(rv, mf)
    if isinstance(beta, Unary):
        return template.format(s=here, a=cell(columns[beta.child]))
    return template.format(s=here, a=cell(columns[beta.left]), b=cell(columns[beta.right]))


def _template(rv: ValueRendering, mf) -> str:
    """Nested-ite constraint for a connective over placeholders {s}, {a}, {b}."""
    if mf.arity == 1:
        groups = _ordered_groups(rv, [(v,) for v in rv.values], lambda a: mf(*a))
        branches = [(rv.member("{a}", {a[0] for a in args}), rv.member("{s}", out)) for out, args in groups]
    else:
        inputs = [(a, b) for a in rv.values for b in rv.values]
        groups = _ordered_groups(rv, inputs, lambda a: mf(*a))
        branches = []
        for out, args in groups:
            cond = _disj(
                _conj([rv.member("{a}", ls), rv.member("{b}", rs)]) for ls, rs in _rectangles(rv, args)
            )
            branches.append((cond, rv.member("{s}", out)))
    text = branches[-1][1]
    for cond, then in reversed(branches[:-1]):
        text = f"(ite {cond} {then} {text})"
    return text


# -- scripts -----------------------------------------------------------------

@dataclass
class SmtScript:
    text: str
    columns: dict
    variant: EncodingVariant
    logic_id: str
    rendering: ValueRendering = field(repr=False, default=None)
    model_terms: tuple = ()  # (Formula, term) pairs read back for a countermodel

    def __str__(self) -> str:
        return self.text


def _shallow(f: Formula, columns: dict) -> str:
    if isinstance(f, (Atom, Constant)):
        return format_formula(f)
    if isinstance(f, Unary):
        inner = columns[f.child]
        return f"~{inner}" if main_connective(f).value == "not" else f"#box {inner}"
    op = {"and": "&", "or": "|", "implies": "=>"}[f.connective.value]
    return f"({columns[f.left]} {op} {columns[f.right]})"


def _header(spec, goal, table, columns, variant, bound) -> list:
    shallow = [f"{columns[f]} = {_shallow(f, columns)}" for f in table]
    digest = hashlib.sha256("\n".join(shallow).encode()).hexdigest()
    lines = [
        f"; logic: {spec.logic_id}",
        f"; variant: {variant.name}" + (f" (depth bound {bound})" if bound is not None else ""),
        f"; goal-sha256: {digest}",
        f"; columns: {len(table)}",
    ]
    full = format_formula(goal) if len(table) <= 64 else None
    if full is not None and len(full) <= 200:
        lines.append(f"; goal: {full}")
    lines.extend("; " + s for s in shallow)
    return lines


def _check_goal(spec: RNmatrixSpec, goal: Formula):
    bad = connectives(goal) - set(spec.language)
    if bad:
        names = ", ".join(sorted(c.value for c in bad))
        raise EncodingError(f"goal uses {names}, outside the language of {spec.logic_id}")


def _local_constraint(rv: ValueRendering, inst: LocalInstance, syms, cell) -> str:
    forced = _conj(rv.member(cell(syms[c]), allowed) for c, allowed in inst.forced)
    return f"(=> {rv.member(cell(syms[inst.column]), {inst.trigger})} {forced})"


def encode(
    spec: RNmatrixSpec,
    goal: Formula,
    variant: EncodingVariant,
    *,
    rendering: Optional[str] = None,
    expand_preserve: bool = False,
    strict_depth: bool = False,
) -> SmtScript:
    """Render the falsification problem for ``goal``.

    ``rendering="datatype"`` forces an enumerated value sort.  With
    ``expand_preserve`` the witness preservation condition is a conjunction
    over the columns instead of a quantifier over ``Col``.  ``strict_depth``
    places every witness exactly one level deeper than its trigger row; by
    default a witness of a row already at the bound stays at the bound.
    """
    _check_goal(spec, goal)
    if isinstance(variant, SingleRow) and not spec.local_only:
        raise EncodingError(f"{spec.logic_id} has witness rules; a single row is not enough")
    rv = ValueRendering(spec, rendering)
    table = subformulas(goal)
    columns = column_table(goal)
    syms = [columns[f] for f in table]
    bound = None
    if isinstance(variant, DepthIndexed):
        bound = variant.bound if variant.bound is not None else depth_bound(spec, goal)
        if bound < 0:
            raise EncodingError("depth bound must be non-negative")

    out = ["(set-option :produce-models true)"]
    out.extend(_header(spec, goal, table, columns, variant, bound))
    out.extend(rv.declarations())
    local = [i for r in spec.local_rules for i in instantiate(r, table)]
    witness = [i for r in spec.witness_rules for i in instantiate(r, table)]
    goal_sym = syms[-1]

    if isinstance(variant, SingleRow):
        cell = lambda s: s  # noqa: E731
        for f, s in zip(table, syms):
            out.append(f"(declare-fun {s} () {rv.sort})")
        for s in syms:
            dom = rv.domain(s)
            if dom:
                out.append(f"(assert {dom})")
        out.append(f"(assert {_disj(rv.member(goal_sym, {v}) for v in spec.non_designated)})")
        for f in table:
            cons = render_cons(spec, f, columns, cell, rv)
            if cons is not None:
                out.append(f"(assert {cons})")
        for inst in local:
            out.append(f"(assert {_local_constraint(rv, inst, syms, cell)})")
        out.append("(check-sat)")
        return SmtScript("\n".join(out) + "\n", columns, variant, spec.logic_id, rv, tuple(zip(table, syms)))

    out.append(f"(declare-datatypes ((Col 0)) (({' '.join(f'({s})' for s in syms)})))")
    if isinstance(variant, BoundedRows):
        rows = " ".join(f"(r_{i})" for i in range(variant.k))
        out.append(f"(declare-datatypes ((Row 0)) (({rows})))")
    else:
        out.append("(declare-sort Row 0)")
        out.append("(declare-const r_0 Row)")
    out.append(f"(declare-fun mat (Row Col) {rv.sort})")
    if bound is not None:
        out.append("(declare-fun depth (Row) Int)")
        out.append("(assert (= (depth r_0) 0))")
        out.append(f"(assert (forall ((r Row)) (and (<= 0 (depth r)) (<= (depth r) {bound}))))")

    dom = rv.domain("(mat r c)")
    if dom:
        out.append(f"(assert (forall ((r Row) (c Col)) {dom}))")
    out.append(f"(assert {_disj(rv.member(f'(mat r_0 {goal_sym})', {v}) for v in spec.non_designated)})")
    row_cell = lambda s: f"(mat r {s})"  # noqa: E731
    for f in table:
        cons = render_cons(spec, f, columns, row_cell, rv)
        if cons is not None:
            out.append(f"(assert (forall ((r Row)) {cons}))")
    for inst in local:
        out.append(f"(assert (forall ((r Row)) {_local_constraint(rv, inst, syms, row_cell)}))")

    if bound is None:
        depth_eq = None
    elif strict_depth:
        depth_eq = "(= (depth w) (+ (depth r) 1))"
    else:
        depth_eq = f"(= (depth w) (ite (< (depth r) {bound}) (+ (depth r) 1) {bound}))"

    def preserve(rule: WitnessRule) -> str:
        if expand_preserve:
            return _conj(
                f"(=> {rv.member(f'(mat r {s})', rule.preserve)} {rv.member(f'(mat w {s})', rule.preserve)})"
                for s in syms
            )
        return (
            f"(forall ((k Col)) (=> {rv.member('(mat r k)', rule.preserve)} "
            f"{rv.member('(mat w k)', rule.preserve)}))"
        )

    def witness_body(rule, wit_cond) -> str:
        parts = [p for p in (depth_eq, wit_cond, preserve(rule)) if p]
        return f"(exists ((w Row)) {_conj(parts)})"

    for rule in spec.witness_rules:
        column_free = rule.shape is None and all(p == "self" for p, _ in rule.trigger + rule.witness)
        if column_free:
            trig = _conj(rv.member("(mat r c)", {v}) for _, v in rule.trigger)
            wit = _conj(rv.member("(mat w c)", {v}) for _, v in rule.witness)
            out.append(f"(assert (forall ((r Row) (c Col)) (=> {trig} {witness_body(rule, wit)})))")
            continue
        for inst in (i for i in witness if i.rule is rule):
            trig = _conj(rv.member(f"(mat r {syms[c]})", {v}) for c, v in inst.trigger)
            wit = _conj(rv.member(f"(mat w {syms[c]})", {v}) for c, v in inst.witness)
            out.append(f"(assert (forall ((r Row)) (=> {trig} {witness_body(rule, wit)})))")
    out.append("(check-sat)")
    terms = tuple((f, f"(mat r_0 {s})") for f, s in zip(table, syms))
    return SmtScript("\n".join(out) + "\n", columns, variant, spec.logic_id, rv, terms)
