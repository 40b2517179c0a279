import os
import shutil
import shlex

import pytest

from rnprover.tptp_io import parse_formula


def _solver_available() -> bool:
    env = os.environ.get("RNPROVER_SOLVER")
    exe = shlex.split(env)[0] if env and env.strip() else "z3"
    return shutil.which(exe) is not None


HAVE_SOLVER = _solver_available()

needs_solver = pytest.mark.skipif(not HAVE_SOLVER, reason="no SMT solver on PATH")


def P(text):
    return parse_formula(text)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line; shown again in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
