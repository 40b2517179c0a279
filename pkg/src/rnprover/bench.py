"""Benchmark families, corpus ingestion and suite reports."""

from __future__ import annotations

import csv
import io
import logging
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional

from .formula import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Binary,
    Box,
    Connective,
    Formula,
    Implies,
    Not,
    Or,
    consistency_degree,
    subformulas,
)
from .oracle import oracle_decide
from .results import Conclusion, Outcome
from .rnmatrix_core import RNmatrixSpec
from .solver_runner import PortfolioConfig, SolverSpawnError, portfolio
from .tptp_io import DEFAULT_BOX_TOKENS, TptpError, read_problem

log = logging.getLogger(__name__)

CSV_HEADER = ("instance", "logic", "conclusion", "source", "elapsed_ms")
SIDECAR = "statuses.txt"

FAMILIES = {
    "conj": Connective.AND,
    "disj": Connective.OR,
    "imp": Connective.IMPLIES,
}
_FAMILY_OF = {c: name for name, c in FAMILIES.items()}


@dataclass(frozen=True)
class BenchmarkInstance:
    family: str
    index: int
    logic_id: str
    formula: Formula
    expected: Optional[Outcome] = None
    name: str = ""

    @property
    def instance_id(self) -> str:
        return self.name or f"{self.family}_{self.index}"


def consistency_upto(f: Formula, n: int) -> Formula:
    """f^(n) = f^1 & f^2 & ... & f^n (left-nested); f^(0) is not defined."""
    if n < 1:
        raise ValueError("cumulative consistency needs n >= 1")
    return reduce(And, [consistency_degree(f, k) for k in range(1, n + 1)])


def gen_cn_propag(i: int, connective: Connective, *, cumulative: bool = True) -> Formula:
    """p^(i) & q^(i) => (p # q)^(i).

    With ``cumulative`` (default) the degree-i consistency is the
    conjunction of degrees 1..i; otherwise it is the single iterate
    ``consistency_degree(., i)``.
    """
    if not isinstance(i, int) or not 1 <= i <= 15:
        raise ValueError(f"index must be in 1..15, got {i!r}")
    if connective not in _FAMILY_OF:
        raise ValueError(f"connective must be And, Or or Implies, got {connective}")
    deg = consistency_upto if cumulative else consistency_degree
    p, q = Atom("p"), Atom("q")
    return Implies(And(deg(p, i), deg(q, i)), deg(Binary(connective, p, q), i))


def cn_propag_expected(i: int, n: int) -> Outcome:
    return Outcome.VALID if n <= i else Outcome.INVALID


def cn_propag_suite(n: int, indices: Iterable[int] = range(1, 16), *, cumulative: bool = True) -> list:
    """The 3 x 15 family instances for C_n, with staircase expectations."""
    out = []
    for family, conn in FAMILIES.items():
        for i in indices:
            out.append(
                BenchmarkInstance(family, i, f"c{n}", gen_cn_propag(i, conn, cumulative=cumulative), cn_propag_expected(i, n))
            )
    return out


# -- suites ------------------------------------------------------------------

@dataclass
class SuiteRow:
    instance: str
    logic: str
    conclusion: Optional[Outcome]
    source: str
    elapsed_ms: float
    expected: Optional[Outcome] = None
    error: str = ""

    @property
    def mismatch(self) -> bool:
        return (
            self.expected is not None
            and self.conclusion in (Outcome.VALID, Outcome.INVALID)
            and self.conclusion is not self.expected
        )


@dataclass
class SuiteReport:
    rows: list = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def solved(self) -> int:
        return sum(1 for r in self.rows if r.conclusion in (Outcome.VALID, Outcome.INVALID))

    @property
    def unsolved(self) -> int:
        return len(self.rows) - self.solved

    @property
    def mismatches(self) -> list:
        return [r for r in self.rows if r.mismatch]

    @property
    def errors(self) -> list:
        return [r for r in self.rows if r.error]

    def count(self, outcome: Outcome) -> int:
        return sum(1 for r in self.rows if r.conclusion is outcome)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            verdict = r.conclusion.value if r.conclusion else "error"
            w.writerow([r.instance, r.logic, verdict, r.source, f"{r.elapsed_ms:.1f}"])
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())

    def summary(self) -> str:
        return (
            f"{len(self.rows)} instances: {self.count(Outcome.VALID)} Valid, "
            f"{self.count(Outcome.INVALID)} Invalid, {self.count(Outcome.INCONCLUSIVE)} Inconclusive, "
            f"{len(self.errors)} errors, {len(self.mismatches)} mismatches; {self.elapsed_ms / 1000:.1f} s"
        )


def _run_one(inst: BenchmarkInstance, spec: RNmatrixSpec, cfg, engine: str) -> SuiteRow:
    try:
        if engine == "oracle":
            c: Conclusion = oracle_decide(spec, inst.formula)
        else:
            c = portfolio(spec, inst.formula, cfg)
    except SolverSpawnError:
        raise
    except Exception as exc:  # recorded per instance, the suite goes on
        return SuiteRow(inst.instance_id, spec.logic_id, None, "", 0.0, inst.expected, f"{type(exc).__name__}: {exc}")
    return SuiteRow(inst.instance_id, spec.logic_id, c.outcome, c.source, c.elapsed_ms, inst.expected)


def run_suite(
    instances: Iterable[BenchmarkInstance],
    spec: RNmatrixSpec,
    cfg: Optional[PortfolioConfig] = None,
    *,
    engine: str = "smt",
    jobs: int = 1,
) -> SuiteReport:
    """Decide every instance; per-instance failures land in the report."""
    if engine not in ("smt", "oracle"):
        raise ValueError(f"unknown engine {engine!r}")
    cfg = cfg or PortfolioConfig()
    instances = list(instances)
    start = time.perf_counter()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(lambda i: _run_one(i, spec, cfg, engine), instances))
    else:
        rows = [_run_one(i, spec, cfg, engine) for i in instances]
    return SuiteReport(rows, (time.perf_counter() - start) * 1000)


# -- corpora -----------------------------------------------------------------

_STATUS = {"theorem": Outcome.VALID, "non-theorem": Outcome.INVALID, "countersatisfiable": Outcome.INVALID}


def read_sidecar(path) -> dict:
    """``<filename> <Theorem|Non-Theorem>`` per line; ``#``/``%`` lines are comments."""
    statuses = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2 or parts[1].lower() not in _STATUS:
                raise ValueError(f"{path}:{n}: expected '<filename> <Theorem|Non-Theorem>'")
            statuses[parts[0]] = _STATUS[parts[1].lower()]
    return statuses


def ingest_corpus(
    directory,
    *,
    spec: Optional[RNmatrixSpec] = None,
    box_tokens=DEFAULT_BOX_TOKENS,
    sidecar: str = SIDECAR,
    diagnostics: Optional[list] = None,
) -> list:
    """One instance per parseable ``.p``/``.tptp`` file, sorted by name.

    Unparseable files are skipped; their messages go to ``diagnostics``
    (and the log).  An unreadable directory raises ``OSError``.
    """
    names = sorted(os.listdir(directory))
    statuses = {}
    side = os.path.join(directory, sidecar)
    if os.path.isfile(side):
        statuses = read_sidecar(side)
    out = []
    for name in names:
        if not name.endswith((".p", ".tptp")):
            continue
        path = os.path.join(directory, name)
        try:
            prob = read_problem(
                path,
                language=spec.language if spec else None,
                logic_name=spec.logic_id if spec else None,
                box_tokens=box_tokens,
            )
        except (TptpError, OSError, UnicodeDecodeError) as exc:
            msg = str(exc) if isinstance(exc, TptpError) else f"{path}: {exc}"
            log.warning("skipping %s", msg)
            if diagnostics is not None:
                diagnostics.append(msg)
            continue
        stem = os.path.splitext(name)[0]
        expected = statuses.get(name, statuses.get(stem))
        out.append(
            BenchmarkInstance("corpus", len(out) + 1, spec.logic_id if spec else "", prob.formula, expected, stem)
        )
    return out


# -- random formulas ---------------------------------------------------------

def random_formula(rng: random.Random, spec: RNmatrixSpec, max_atoms: int = 3, max_subformulas: int = 9) -> Formula:
    """A formula in the language of ``spec`` with at most the given atoms and columns."""
    atoms = [Atom(n) for n in "pqrstu"[:max_atoms]]
    unary = [c for c in (Connective.NOT, Connective.BOX) if c in spec.language]
    binary = [c for c in (Connective.AND, Connective.OR, Connective.IMPLIES) if c in spec.language]
    consts = [c for c in (Connective.TOP, Connective.BOTTOM) if c in spec.language]
    build = {Connective.NOT: Not, Connective.BOX: Box, Connective.AND: And, Connective.OR: Or, Connective.IMPLIES: Implies}

    def grow(budget: int) -> Formula:
        if budget <= 1 or rng.random() < 0.15:
            if consts and rng.random() < 0.08:
                return TOP if rng.choice(consts) is Connective.TOP else BOTTOM
            return rng.choice(atoms)
        if budget == 2 or rng.random() < 0.35:
            return build[rng.choice(unary)](grow(budget - 1))
        split = rng.randint(1, budget - 2)
        return build[rng.choice(binary)](grow(split), grow(budget - 1 - split))

    while True:
        f = grow(rng.randint(2, max_subformulas + 2))
        if len(subformulas(f)) <= max_subformulas:
            return f
