"""Running external SMT solvers and turning their answers into verdicts."""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from typing import Optional

from .encoder import BoundedRows, EncodingVariant, SmtScript, encode, sound_variant
from .formula import Formula
from .results import Conclusion, Outcome
from .rnmatrix_core import RNmatrixSpec

SAT, UNSAT, UNKNOWN, TIMEOUT, SOLVER_ERROR = "sat", "unsat", "unknown", "timeout", "solver-error"

DEFAULT_COMMAND = ("z3", "-smt2", "{file}")
DEFAULT_BOUNDS = (1, 2, 4, 8)
POLL_SECONDS = 0.01


class SolverError(RuntimeError):
    pass


class SolverSpawnError(SolverError):
    """The solver executable could not be started."""


class CountermodelError(ValueError):
    pass


def solver_command_from_env() -> tuple:
    env = os.environ.get("RNPROVER_SOLVER")
    if env and env.strip():
        return tuple(shlex.split(env))
    return DEFAULT_COMMAND


@dataclass(frozen=True)
class RawVerdict:
    status: str
    model_text: Optional[str] = None
    elapsed_ms: float = 0.0
    detail: str = ""


@dataclass(frozen=True)
class PortfolioConfig:
    solver_command: tuple = field(default_factory=solver_command_from_env)
    timeout_ms: int = 60_000
    bounds: tuple = DEFAULT_BOUNDS
    parallelism: Optional[int] = None  # None: one worker per member
    expand_preserve: bool = False
    strict_depth: bool = False
    rendering: Optional[str] = None

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout must be positive")
        bounds = tuple(self.bounds)
        if any(b < 1 for b in bounds):
            raise ValueError("row bounds must be positive")
        if any(a >= b for a, b in zip(bounds, bounds[1:])):
            raise ValueError("row bounds must be strictly increasing")
        if len(bounds) > 4:
            raise ValueError("at most 4 bounded members")
        if not self.solver_command:
            raise ValueError("empty solver command")
        if self.parallelism is not None and self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "solver_command", tuple(self.solver_command))


# -- single runs -------------------------------------------------------------

def _argv(command: tuple, path: str) -> list:
    if any("{file}" in part for part in command):
        return [part.replace("{file}", path) for part in command]
    return list(command) + [path]


def _get_value(script: SmtScript) -> str:
    terms = " ".join(t for _, t in script.model_terms)
    return f"(get-value ({terms}))\n"


def run_solver(
    script: SmtScript,
    cfg: Optional[PortfolioConfig] = None,
    *,
    want_model: bool = True,
    cancel: Optional[threading.Event] = None,
) -> RawVerdict:
    """Run the solver on ``script`` once.

    The process is killed at the timeout or as soon as ``cancel`` is set;
    both report status ``timeout``.
    """
    cfg = cfg or PortfolioConfig()
    text = script.text
    if want_model and script.model_terms:
        text += _get_value(script)
    with tempfile.TemporaryDirectory(prefix="rnprover-") as tmp:
        path = os.path.join(tmp, "problem.smt2")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        out_path = os.path.join(tmp, "out.txt")
        start = time.perf_counter()
        deadline = start + cfg.timeout_ms / 1000
        with open(out_path, "w+", encoding="utf-8") as out:
            try:
                proc = subprocess.Popen(_argv(cfg.solver_command, path), stdout=out, stderr=subprocess.STDOUT)
            except OSError as exc:
                raise SolverSpawnError(f"cannot start solver {cfg.solver_command[0]!r}: {exc}") from exc
            stopped = None
            while proc.poll() is None:
                if time.perf_counter() >= deadline:
                    stopped = "timeout"
                elif cancel is not None and cancel.is_set():
                    stopped = "cancelled"
                if stopped:
                    proc.kill()
                    proc.wait()
                    break
                time.sleep(POLL_SECONDS)
            elapsed = (time.perf_counter() - start) * 1000
            if stopped:
                return RawVerdict(TIMEOUT, None, elapsed, stopped)
            out.seek(0)
            output = out.read()
    return parse_output(output, elapsed, want_model)


def parse_output(output: str, elapsed_ms: float = 0.0, want_model: bool = True) -> RawVerdict:
    stripped = output.lstrip()
    first = stripped.split(None, 1)[0] if stripped else ""
    if first in (SAT, UNSAT, UNKNOWN):
        model = None
        if first == SAT and want_model:
            model = stripped[len(first):].strip() or None
        return RawVerdict(first, model, elapsed_ms)
    if first == "timeout":
        return RawVerdict(TIMEOUT, None, elapsed_ms, "solver reported timeout")
    return RawVerdict(SOLVER_ERROR, None, elapsed_ms, output.strip()[:500])


# -- model parsing -----------------------------------------------------------

def parse_sexprs(text: str) -> list:
    """Tiny s-expression reader: lists become Python lists, atoms stay strings."""
    stack: list = [[]]
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif ch == "(":
            stack.append([])
            i += 1
        elif ch == ")":
            if len(stack) == 1:
                raise CountermodelError("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
            i += 1
        elif ch == '"':
            j = text.index('"', i + 1)
            stack[-1].append(text[i : j + 1])
            i = j + 1
        elif ch == "|":
            j = text.index("|", i + 1)
            stack[-1].append(text[i : j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "();":
                j += 1
            stack[-1].append(text[i:j])
            i = j
    if len(stack) != 1:
        raise CountermodelError("unbalanced '(' in solver output")
    return stack[0]


def _unparse(sx) -> str:
    if isinstance(sx, list):
        return "(" + " ".join(_unparse(x) for x in sx) + ")"
    return sx


def extract_countermodel(model_text: Optional[str], script: SmtScript) -> dict:
    """Row r0's values from a ``get-value`` answer, keyed by column formula.

    Cells the answer does not mention are ``None`` (any value will do).
    """
    if not model_text or not model_text.strip():
        raise CountermodelError("empty model")
    parsed = parse_sexprs(model_text)
    pairs = None
    for item in parsed:
        if isinstance(item, list) and item and all(isinstance(p, list) and len(p) == 2 for p in item):
            pairs = item
            break
    if pairs is None:
        raise CountermodelError("unrecognised model grammar")
    seen = {_unparse(term): _unparse(value) for term, value in pairs}
    result = {}
    for f, term in script.model_terms:
        value = seen.get(_unparse(parse_sexprs(term)[0]))
        if value is None:
            result[f] = None
            continue
        try:
            result[f] = script.rendering.decode(value)
        except ValueError as exc:
            raise CountermodelError(str(exc)) from exc
    return result


def interpret(v: RawVerdict, variant: EncodingVariant, script: Optional[SmtScript] = None) -> Conclusion:
    source = variant.name
    if v.status == UNSAT:
        if isinstance(variant, BoundedRows):
            return Conclusion(Outcome.INCONCLUSIVE, None, source, v.elapsed_ms, "unsat with bounded rows")
        return Conclusion(Outcome.VALID, None, source, v.elapsed_ms)
    if v.status == SAT:
        model = None
        detail = ""
        if v.model_text and script is not None:
            try:
                model = extract_countermodel(v.model_text, script)
            except CountermodelError as exc:
                detail = f"countermodel unreadable: {exc}"
        return Conclusion(Outcome.INVALID, model, source, v.elapsed_ms, detail)
    return Conclusion(Outcome.INCONCLUSIVE, None, source, v.elapsed_ms, v.status + (f": {v.detail}" if v.detail else ""))


# -- portfolio ---------------------------------------------------------------

def members(spec: RNmatrixSpec, goal: Formula, cfg: PortfolioConfig) -> list:
    sound = sound_variant(spec, goal)
    if spec.local_only:
        return [sound]
    return [sound] + [BoundedRows(k) for k in cfg.bounds]


def _run_member(spec, goal, variant, cfg, cancel) -> tuple:
    script = encode(
        spec, goal, variant,
        rendering=cfg.rendering, expand_preserve=cfg.expand_preserve, strict_depth=cfg.strict_depth,
    )
    raw = run_solver(script, cfg, cancel=cancel)
    return raw, interpret(raw, variant, script)


def portfolio(spec: RNmatrixSpec, goal: Formula, cfg: Optional[PortfolioConfig] = None) -> Conclusion:
    """Race the sound encoding against bounded-row encodings.

    The first conclusive answer wins and the remaining members are killed.
    When several members have finished by the time a winner is picked, the
    sound member is preferred.
    """
    cfg = cfg or PortfolioConfig()
    start = time.perf_counter()
    variants = members(spec, goal, cfg)
    cancel = threading.Event()
    workers = cfg.parallelism or len(variants)
    timings: dict = {}
    results: dict = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(_run_member, spec, goal, v, cfg, cancel): v for v in variants}
        pending = set(futures)
        winner = None
        try:
            while pending and winner is None:
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    raw, concl = fut.result()
                    v = futures[fut]
                    results[v] = (raw, concl)
                    timings[v.name] = round(concl.elapsed_ms, 3)
                conclusive = [v for v in variants if v in results and results[v][1].conclusive]
                if conclusive:
                    winner = conclusive[0]  # variants lists the sound member first
        finally:
            cancel.set()
    elapsed = (time.perf_counter() - start) * 1000
    if winner is not None:
        c = results[winner][1]
        return Conclusion(c.outcome, c.countermodel, c.source, elapsed, c.detail, timings)
    raws = [results[v][0] for v in variants if v in results]
    if raws and all(r.status == SOLVER_ERROR for r in raws):
        raise SolverError("every portfolio member failed: " + raws[0].detail)
    details = "; ".join(f"{v.name}: {results[v][1].detail}" for v in variants if v in results)
    return Conclusion(Outcome.INCONCLUSIVE, None, "portfolio", elapsed, details, timings)
