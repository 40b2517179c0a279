"""Propositional formulas and the structural queries the provers need.

Formulas are immutable and hash-consed: building the same tree twice yields
the same object, so equality is identity and hashing is O(1).  This matters
for consistency towers, whose tree size doubles at every level.
"""

from __future__ import annotations

import enum
import threading
import weakref
from typing import Iterator, Union


class Connective(enum.Enum):
    TOP = "top"
    BOTTOM = "bottom"
    NOT = "not"
    BOX = "box"
    AND = "and"
    OR = "or"
    IMPLIES = "implies"

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {
    Connective.TOP: 0,
    Connective.BOTTOM: 0,
    Connective.NOT: 1,
    Connective.BOX: 1,
    Connective.AND: 2,
    Connective.OR: 2,
    Connective.IMPLIES: 2,
}

UNARY = frozenset({Connective.NOT, Connective.BOX})
BINARY = frozenset({Connective.AND, Connective.OR, Connective.IMPLIES})
CONSTANTS = frozenset({Connective.TOP, Connective.BOTTOM})


_INTERN: "weakref.WeakValueDictionary" = weakref.WeakValueDictionary()
_INTERN_LOCK = threading.Lock()


def _interned(cls, key, fields):
    obj = _INTERN.get(key)
    if obj is not None:
        return obj
    with _INTERN_LOCK:
        obj = _INTERN.get(key)
        if obj is None:
            obj = object.__new__(cls)
            for name, value in fields:
                object.__setattr__(obj, name, value)
            object.__setattr__(obj, "_hash", hash(key[1:]))
            _INTERN[key] = obj
    return obj


class _Node:
    __slots__ = ("_hash", "__weakref__")

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other):
        # interning makes equal formulas identical
        return self is other

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (type(self), self._args())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self})"

    def __str__(self) -> str:
        from .tptp_io import format_formula

        return format_formula(self)


class Atom(_Node):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        if not isinstance(name, str) or not name:
            raise ValueError("atom names are non-empty strings")
        return _interned(cls, (cls, "atom", name), (("name", name),))

    def _args(self):
        return (self.name,)

    @property
    def children(self) -> tuple:
        return ()


class Constant(_Node):
    __slots__ = ("connective",)

    def __new__(cls, connective: Connective):
        if connective not in CONSTANTS:
            raise ValueError(f"not a constant: {connective}")
        return _interned(cls, (cls, "const", connective), (("connective", connective),))

    def _args(self):
        return (self.connective,)

    @property
    def children(self) -> tuple:
        return ()


class Unary(_Node):
    __slots__ = ("connective", "child")

    def __new__(cls, connective: Connective, child: "Formula"):
        if connective not in UNARY:
            raise ValueError(f"not a unary connective: {connective}")
        if not isinstance(child, _Node):
            raise TypeError(f"not a formula: {child!r}")
        return _interned(cls, (cls, connective, child), (("connective", connective), ("child", child)))

    def _args(self):
        return (self.connective, self.child)

    @property
    def children(self) -> tuple:
        return (self.child,)


class Binary(_Node):
    __slots__ = ("connective", "left", "right")

    def __new__(cls, connective: Connective, left: "Formula", right: "Formula"):
        if connective not in BINARY:
            raise ValueError(f"not a binary connective: {connective}")
        if not isinstance(left, _Node) or not isinstance(right, _Node):
            raise TypeError("binary connectives take two formulas")
        return _interned(
            cls, (cls, connective, left, right),
            (("connective", connective), ("left", left), ("right", right)),
        )

    def _args(self):
        return (self.connective, self.left, self.right)

    @property
    def children(self) -> tuple:
        return (self.left, self.right)


Formula = Union[Atom, Constant, Unary, Binary]

TOP = Constant(Connective.TOP)
BOTTOM = Constant(Connective.BOTTOM)


def Not(f: Formula) -> Unary:
    return Unary(Connective.NOT, f)


def Box(f: Formula) -> Unary:
    return Unary(Connective.BOX, f)


def And(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.AND, a, b)


def Or(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.OR, a, b)


def Implies(a: Formula, b: Formula) -> Binary:
    return Binary(Connective.IMPLIES, a, b)


def main_connective(f: Formula) -> Connective | None:
    """The outermost connective, or None for atoms."""
    if isinstance(f, Atom):
        return None
    return f.connective


class SubformulaTable:
    """All distinct subformulas of a formula, children before parents.

    Entries are in post-order of first occurrence (left subtree first), so
    the table, and everything rendered from it, is reproducible.  The last
    entry is the formula itself.
    """

    __slots__ = ("entries", "index")

    def __init__(self, entries):
        self.entries: tuple = tuple(entries)
        self.index: dict = {f: i for i, f in enumerate(self.entries)}
        if len(self.index) != len(self.entries):
            raise ValueError("duplicate subformulas in table")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Formula]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Formula:
        return self.entries[i]

    def __contains__(self, f) -> bool:
        return f in self.index

    def position(self, f: Formula) -> int:
        return self.index[f]

    @property
    def root(self) -> Formula:
        return self.entries[-1]

    def child_positions(self, i: int) -> tuple:
        return tuple(self.index[c] for c in self.entries[i].children)

    def __eq__(self, other):
        return isinstance(other, SubformulaTable) and other.entries == self.entries

    def __repr__(self) -> str:
        return "SubformulaTable([" + ", ".join(str(e) for e in self.entries) + "])"


def subformulas(f: Formula) -> SubformulaTable:
    seen: set = set()
    order: list = []
    # explicit stack: towers of consistency degrees get deep
    stack = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in seen:
            continue
        if expanded or not node.children:
            seen.add(node)
            order.append(node)
            continue
        stack.append((node, True))
        for child in reversed(node.children):
            if child not in seen:
                stack.append((child, False))
    return SubformulaTable(order)


def _nesting(f: Formula, counted: frozenset) -> int:
    depth: dict = {}
    for g in subformulas(f):
        below = max((depth[c] for c in g.children), default=0)
        depth[g] = below + (1 if main_connective(g) in counted else 0)
    return depth[f]


def modal_depth(f: Formula) -> int:
    return _nesting(f, frozenset({Connective.BOX}))


def impneg_depth(f: Formula) -> int:
    """Maximum nesting of implications and negations."""
    return _nesting(f, frozenset({Connective.IMPLIES, Connective.NOT}))


def size(f: Formula) -> int:
    """Node count of the formula as a tree (shared subtrees counted each time)."""
    counts: dict = {}
    for g in subformulas(f):
        counts[g] = 1 + sum(counts[c] for c in g.children)
    return counts[f]


def connectives(f: Formula) -> set:
    """Connectives and constants occurring in f."""
    return {main_connective(g) for g in subformulas(f)} - {None}


def atoms(f: Formula) -> list:
    return [g for g in subformulas(f) if isinstance(g, Atom)]


def consistency_degree(f: Formula, n: int) -> Formula:
    """f^n, with f^0 = f and f^(k+1) = ~(f^k & ~f^k)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    for _ in range(n):
        f = Not(And(f, Not(f)))
    return f


def contradiction(f: Formula, k: int) -> Formula:
    """The k-depth contradiction f^k & ~f^k."""
    fk = consistency_degree(f, k)
    return And(fk, Not(fk))
