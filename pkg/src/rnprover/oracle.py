"""Solver-free decision procedure used as ground truth for the SMT pipeline.

Valuations here are partial: tuples of truth values aligned with the
subformula table of the goal.  The procedure is the textbook one:

1. enumerate every table-consistent valuation (children first),
2. drop rows violating a same-row rule,
3. repeatedly drop rows whose witness rules find no supporting row among the
   survivors, until a round removes nothing (greatest fixpoint),
4. the goal is valid iff every survivor designates it.

For logics with only same-row rules, step 1-2 is replaced by a pruned
depth-first search for a falsifying row, which decides the same question
without materialising the whole product.
"""

from __future__ import annotations

import math
import time
from typing import Iterable, Optional

from .formula import Formula, SubformulaTable, subformulas
from .results import Conclusion, Outcome
from .rnmatrix_core import LocalInstance, LocalRule, RNmatrixSpec, WitnessInstance, instantiate

# exhaustive enumeration over 3 values stops at 14 columns; other value
# counts get the cap with the same product size
_BASE_CAP = 14
SEARCH_CAP = 64


class CapExceeded(Exception):
    pass


def default_cap(spec: RNmatrixSpec) -> int:
    return int(math.floor(_BASE_CAP * math.log(3) / math.log(len(spec.values)) + 1e-9))


def _table_of(goal_or_table) -> SubformulaTable:
    if isinstance(goal_or_table, SubformulaTable):
        return goal_or_table
    return subformulas(goal_or_table)


def enumerate_valuations(spec: RNmatrixSpec, goal, max_columns: Optional[int] = None) -> list:
    """Every table-consistent valuation over the subformulas of ``goal``.

    Order is deterministic: columns expand children first and values in id
    order.
    """
    table = _table_of(goal)
    cap = default_cap(spec) if max_columns is None else max_columns
    if len(table) > cap:
        raise CapExceeded(f"{len(table)} columns exceed the enumeration cap of {cap}")
    rows = [()]
    for i in range(len(table)):
        f = table[i]
        kids = table.child_positions(i)
        grown = []
        for row in rows:
            allowed = spec.allowed(f, tuple(row[k] for k in kids))
            for v in spec.values:
                if v in allowed:
                    grown.append(row + (v,))
        rows = grown
    return rows


def _local_instances(spec, table) -> list:
    found = []
    for rule in spec.local_rules:
        found.extend(instantiate(rule, table))
    return found


def _witness_instances(spec, table) -> list:
    found = []
    for rule in spec.witness_rules:
        found.extend(instantiate(rule, table))
    return found


def _local_ok(inst: LocalInstance, row) -> bool:
    if row[inst.column] != inst.trigger:
        return True
    return all(row[c] in allowed for c, allowed in inst.forced)


def local_filter(vals: Iterable, spec: RNmatrixSpec, goal) -> list:
    """Keep the valuations satisfying every same-row rule that applies."""
    table = _table_of(goal)
    insts = _local_instances(spec, table)
    return [row for row in vals if all(_local_ok(i, row) for i in insts)]


def _mask(row, preserve) -> int:
    m = 0
    for i, v in enumerate(row):
        if v in preserve:
            m |= 1 << i
    return m


def _fires(inst: WitnessInstance, row) -> bool:
    return all(row[c] == v for c, v in inst.trigger)


def _maximal(masks) -> list:
    out = []
    for m in sorted(set(masks), key=lambda m: -bin(m).count("1")):
        if not any(m & ~k == 0 for k in out):
            out.append(m)
    return out


def level_fixpoint(vals: Iterable, spec: RNmatrixSpec, goal, *, with_rounds: bool = False):
    """Greatest subset in which every fired witness rule finds a witness.

    Each round removes, all at once, the rows lacking a witness among the
    rows that survived the previous round; iteration stops at the first
    round that removes nothing.
    """
    table = _table_of(goal)
    current = list(vals)
    insts = _witness_instances(spec, table)
    fired = {row: [k for k, inst in enumerate(insts) if _fires(inst, row)] for row in current}
    masks: dict = {}
    for inst in insts:
        if inst.preserve not in masks:
            masks[inst.preserve] = {row: _mask(row, inst.preserve) for row in current}
    rounds = 0
    while current:
        support = []
        for inst in insts:
            pm = masks[inst.preserve]
            support.append(_maximal(pm[w] for w in current if all(w[c] == v for c, v in inst.witness)))
        cache: dict = {}
        kept = []
        for row in current:
            ok = True
            for k in fired[row]:
                need = masks[insts[k].preserve][row]
                key = (k, need)
                hit = cache.get(key)
                if hit is None:
                    hit = cache[key] = any(need & ~m == 0 for m in support[k])
                if not hit:
                    ok = False
                    break
            if ok:
                kept.append(row)
        rounds += 1
        if len(kept) == len(current):
            break
        current = kept
    if with_rounds:
        return current, rounds
    return current


def _search(spec: RNmatrixSpec, table: SubformulaTable):
    """Depth-first search for a same-row-admissible row falsifying the goal."""
    n = len(table)
    insts = _local_instances(spec, table)
    due: list = [[] for _ in range(n)]
    for inst in insts:
        last = max([inst.column] + [c for c, _ in inst.forced])
        due[last].append(inst)
    kids = [table.child_positions(i) for i in range(n)]
    falsifying = frozenset(spec.non_designated)
    row: list = [None] * n

    def extend(i):
        if i == n:
            return True
        allowed = spec.allowed(table[i], tuple(row[k] for k in kids[i]))
        if i == n - 1:
            allowed = allowed & falsifying
        for v in spec.values:
            if v not in allowed:
                continue
            row[i] = v
            if all(_local_ok(inst, row) for inst in due[i]) and extend(i + 1):
                return True
        row[i] = None
        return False

    return tuple(row) if extend(0) else None


def admissible_rows(spec: RNmatrixSpec, goal, max_columns: Optional[int] = None) -> list:
    """All rows surviving table, same-row and witness restrictions."""
    table = _table_of(goal)
    rows = local_filter(enumerate_valuations(spec, table, max_columns), spec, table)
    if spec.witness_rules:
        rows = level_fixpoint(rows, spec, table)
    return rows


def oracle_decide(spec: RNmatrixSpec, goal: Formula, max_columns: Optional[int] = None) -> Conclusion:
    start = time.perf_counter()
    table = subformulas(goal)

    def done(outcome, row=None, detail=""):
        cm = dict(zip(table, row)) if row is not None else None
        return Conclusion(outcome, cm, "oracle", (time.perf_counter() - start) * 1000, detail)

    if spec.local_only:
        cap = SEARCH_CAP if max_columns is None else max_columns
        if len(table) > cap:
            return done(Outcome.INCONCLUSIVE, detail=f"{len(table)} columns exceed the search cap of {cap}")
        row = _search(spec, table)
        return done(Outcome.VALID) if row is None else done(Outcome.INVALID, row)
    try:
        rows = admissible_rows(spec, table, max_columns)
    except CapExceeded as exc:
        return done(Outcome.INCONCLUSIVE, detail=str(exc))
    for row in rows:
        if row[-1] not in spec.designated:
            return done(Outcome.INVALID, row)
    return done(Outcome.VALID)


def table_consistent(spec: RNmatrixSpec, goal, row) -> bool:
    table = _table_of(goal)
    return all(
        row[i] in spec.allowed(table[i], tuple(row[k] for k in table.child_positions(i)))
        for i in range(len(table))
    )


def check_countermodel(spec: RNmatrixSpec, goal: Formula, countermodel: dict, max_columns: Optional[int] = None) -> list:
    """Problems with a claimed countermodel; empty when the oracle accepts it.

    Unconstrained (``None``) cells are accepted if some admissible completion
    exists.
    """
    table = subformulas(goal)
    problems = []
    missing = [f for f in table if f not in countermodel]
    if missing:
        problems.append(f"no value for {len(missing)} column(s)")
        return problems
    row = tuple(countermodel[f] for f in table)
    if row[-1] is not None and row[-1] in spec.designated:
        problems.append("goal is designated")
    if None in row:
        candidates = admissible_rows(spec, table, max_columns)
        if not any(all(a is None or a == b for a, b in zip(row, cand)) for cand in candidates):
            problems.append("no admissible completion of the partial valuation")
        return problems
    if not table_consistent(spec, table, row):
        problems.append("violates the matrix tables")
    if local_filter([row], spec, table) != [row]:
        problems.append("violates a same-row restriction")
    if spec.witness_rules and not problems:
        if row not in set(admissible_rows(spec, table, max_columns)):
            problems.append("removed by the witness fixpoint")
    return problems
