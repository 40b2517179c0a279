"""Generic non-deterministic matrices and their row restrictions.

A logic is an :class:`RNmatrixSpec`: truth values, the designated subset,
one multifunction per connective (stored extensionally, cell by cell) and a
list of restriction rules that prune the admissible valuations.

Restriction rules come in two machine shapes:

* :class:`LocalRule` constrains a single row: a trigger value on a column
  forces the values of columns derived from it (``b & ~b``, ``~(b & ~b)``).
* :class:`WitnessRule` demands another row: when the trigger fires on a row
  ``v`` there must be an admissible row ``w`` meeting the witness conditions
  and keeping every column whose value in ``v`` is in the preserve set.

Rules refer to columns through *patterns*, named functions from the column
formula to a related formula (or ``None`` when the pattern does not apply).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .formula import (
    And,
    Connective,
    Formula,
    Not,
    SubformulaTable,
    Unary,
    Binary,
    main_connective,
)


@dataclass(frozen=True, order=True)
class TruthValue:
    id: int
    label: str
    symbol: str = field(compare=False, default="")
    snapshot: Optional[tuple] = field(compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.id, self.label)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, TruthValue):
            return NotImplemented
        return self.id == other.id and self.label == other.label

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self.label


class Multifunction:
    """A total map from argument tuples to non-empty sets of truth values."""

    def __init__(self, arity: int, table: dict):
        self.arity = arity
        self.table = {tuple(k): frozenset(v) for k, v in table.items()}

    def __call__(self, *args: TruthValue) -> frozenset:
        if len(args) != self.arity:
            raise ValueError(f"arity mismatch: expected {self.arity} arguments, got {len(args)}")
        return self.table[args]

    def __eq__(self, other):
        return isinstance(other, Multifunction) and (self.arity, self.table) == (other.arity, other.table)

    def __repr__(self) -> str:
        return f"Multifunction(arity={self.arity}, cells={len(self.table)})"


# -- column patterns ---------------------------------------------------------

def _self(f):
    return f


def _child(f):
    return f.child if isinstance(f, Unary) else None


def _left(f):
    return f.left if isinstance(f, Binary) else None


def _right(f):
    return f.right if isinstance(f, Binary) else None


def _contradiction(f):
    return And(f, Not(f))


def _consistency(f):
    return Not(And(f, Not(f)))


PATTERNS: dict = {
    "self": _self,
    "child": _child,
    "left": _left,
    "right": _right,
    "contradiction": _contradiction,
    "consistency": _consistency,
}


def resolve(pattern: str, f: Formula) -> Optional[Formula]:
    return PATTERNS[pattern](f)


@dataclass(frozen=True)
class LocalRule:
    """If column ``b`` takes ``trigger``, each existing derived column is forced.

    ``forced`` lists ``(pattern, allowed values)``; a clause whose column is
    absent from the subformula table is dropped.
    """

    trigger: TruthValue
    forced: tuple
    description: str = ""


@dataclass(frozen=True)
class WitnessRule:
    """Existence of a witness row, as in level valuations.

    ``shape`` limits the columns the rule is instantiated on (a main
    connective), or ``None`` for every column.  ``trigger`` and ``witness``
    are tuples of ``(pattern, value)`` resolved against that column.
    """

    shape: Optional[Connective]
    trigger: tuple
    witness: tuple
    preserve: frozenset
    description: str = ""
    depth_offset: int = 1


RestrictionRule = Union[LocalRule, WitnessRule]


@dataclass(frozen=True)
class LocalInstance:
    column: int
    trigger: TruthValue
    forced: tuple  # ((column, frozenset of TruthValue), ...)


@dataclass(frozen=True)
class WitnessInstance:
    column: int
    trigger: tuple  # ((column, TruthValue), ...)
    witness: tuple
    preserve: frozenset
    rule: WitnessRule


def _resolve_all(pairs, f, table):
    out = []
    for pattern, value in pairs:
        g = resolve(pattern, f)
        if g is None or g not in table:
            return None
        out.append((table.position(g), value))
    return tuple(out)


def instantiate(rule, table: SubformulaTable) -> list:
    """Bind a rule to the columns of a subformula table."""
    found = []
    for i, f in enumerate(table):
        if isinstance(rule, LocalRule):
            forced = []
            for pattern, allowed in rule.forced:
                g = resolve(pattern, f)
                if g is not None and g in table:
                    forced.append((table.position(g), frozenset(allowed)))
            if forced:
                found.append(LocalInstance(i, rule.trigger, tuple(forced)))
        else:
            if rule.shape is not None and main_connective(f) is not rule.shape:
                continue
            trig = _resolve_all(rule.trigger, f, table)
            wit = _resolve_all(rule.witness, f, table)
            if trig is None or wit is None:
                continue
            found.append(WitnessInstance(i, trig, wit, rule.preserve, rule))
    return found


@dataclass(frozen=True)
class RNmatrixSpec:
    logic_id: str
    values: tuple
    designated: frozenset
    ops: dict
    restrictions: tuple = ()
    language: frozenset = frozenset()
    depth_measure: Optional[str] = None  # "modal", "impneg" or None
    rendering: str = "datatype"  # default SMT value sort: datatype, int or bool

    def __hash__(self) -> int:
        return hash(self.logic_id)

    @property
    def non_designated(self) -> tuple:
        return tuple(v for v in self.values if v not in self.designated)

    @property
    def local_only(self) -> bool:
        return all(isinstance(r, LocalRule) for r in self.restrictions)

    @property
    def local_rules(self) -> tuple:
        return tuple(r for r in self.restrictions if isinstance(r, LocalRule))

    @property
    def witness_rules(self) -> tuple:
        return tuple(r for r in self.restrictions if isinstance(r, WitnessRule))

    def value(self, key) -> TruthValue:
        """Look a truth value up by label, symbol or id."""
        for v in self.values:
            if key in (v.label, v.symbol) or (isinstance(key, int) and v.id == key):
                return v
        raise KeyError(f"{self.logic_id} has no truth value {key!r}")

    def lookup(self, connective: Connective, args) -> frozenset:
        if connective not in self.ops:
            raise KeyError(f"connective {connective.value!r} is not in the language of {self.logic_id}")
        return self.ops[connective](*args)

    def is_designated(self, v: TruthValue) -> bool:
        if v not in self.values:
            raise ValueError(f"{v} is not a truth value of {self.logic_id}")
        return v in self.designated

    def allowed(self, f: Formula, child_values: tuple) -> frozenset:
        """Values the matrix allows for f given its children's values."""
        c = main_connective(f)
        if c is None:
            return frozenset(self.values)
        return self.ops[c](*child_values)


def lookup(spec: RNmatrixSpec, connective: Connective, args) -> frozenset:
    return spec.lookup(connective, tuple(args))


def is_designated(spec: RNmatrixSpec, v: TruthValue) -> bool:
    return spec.is_designated(v)


def validate_spec(spec: RNmatrixSpec) -> list:
    """Diagnostics for every violated structural invariant; empty when sound."""
    problems = []
    values = set(spec.values)
    if not spec.values:
        problems.append("no truth values")
    ids = [v.id for v in spec.values]
    labels = [v.label for v in spec.values]
    if len(set(ids)) != len(ids):
        problems.append("truth value ids must be pairwise distinct")
    if len(set(labels)) != len(labels):
        problems.append("truth value labels must be pairwise distinct")
    if not spec.designated:
        problems.append("designated set must be non-empty")
    elif not spec.designated < values:
        problems.append("designated must be proper subset of values")
    ops = set(spec.ops)
    if ops != set(spec.language):
        for c in sorted(set(spec.language) - ops, key=lambda c: c.value):
            problems.append(f"no multifunction for connective {c.value}")
        for c in sorted(ops - set(spec.language), key=lambda c: c.value):
            problems.append(f"multifunction for {c.value} outside the language")
    for c, mf in sorted(spec.ops.items(), key=lambda kv: kv[0].value):
        if mf.arity != c.arity:
            problems.append(f"{c.value}: arity {mf.arity}, expected {c.arity}")
            continue
        for args in itertools.product(spec.values, repeat=mf.arity):
            out = mf.table.get(args)
            where = f"{c.value}({', '.join(a.label for a in args)})"
            if out is None:
                problems.append(f"missing cell at {where}")
            elif not out:
                problems.append(f"empty output set at {where}")
            elif not out <= values:
                problems.append(f"output at {where} contains unknown values")
        extra = set(mf.table) - set(itertools.product(spec.values, repeat=mf.arity))
        if extra:
            problems.append(f"{c.value}: cells over unknown arguments")
    for rule in spec.restrictions:
        if isinstance(rule, WitnessRule):
            if not rule.preserve <= spec.designated:
                problems.append(f"witness rule {rule.description!r}: preserve set not designated")
            used = [v for _, v in rule.trigger + rule.witness]
        else:
            used = [rule.trigger] + [v for _, vs in rule.forced for v in vs]
        if any(v not in values for v in used):
            problems.append(f"rule {rule.description!r} mentions unknown truth values")
    return problems
