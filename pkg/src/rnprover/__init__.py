"""Validity checking for da Costa's C_n, intuitionistic logic and S4.

Formulas are decided through restricted non-deterministic matrices
(RNmatrices) rendered as SMT-LIB problems, with a solver-free enumeration
oracle for cross-checking.
"""

__version__ = "0.1.0"

from .formula import (  # noqa: E402
    BOTTOM,
    TOP,
    And,
    Atom,
    Box,
    Connective,
    Formula,
    Implies,
    Not,
    Or,
    SubformulaTable,
    consistency_degree,
    contradiction,
    impneg_depth,
    modal_depth,
    subformulas,
)
from .logics import get_logic, make_cn, make_ipl, make_s4  # noqa: E402
from .oracle import oracle_decide  # noqa: E402
from .results import Conclusion, Outcome  # noqa: E402
from .rnmatrix_core import RNmatrixSpec, TruthValue, validate_spec  # noqa: E402
from .solver_runner import PortfolioConfig, portfolio  # noqa: E402
from .tptp_io import parse_formula, parse_problem, read_problem  # noqa: E402

__all__ = [
    "BOTTOM", "TOP", "And", "Atom", "Box", "Connective", "Formula", "Implies", "Not", "Or",
    "SubformulaTable", "consistency_degree", "contradiction", "impneg_depth", "modal_depth",
    "subformulas", "get_logic", "make_cn", "make_ipl", "make_s4", "oracle_decide", "Conclusion",
    "Outcome", "RNmatrixSpec", "TruthValue", "validate_spec", "PortfolioConfig", "portfolio",
    "parse_formula", "parse_problem", "read_problem",
]
