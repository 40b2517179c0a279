"""Reading and writing problems in the propositional ``fof`` subset of TPTP.

Surface syntax::

    fof(name, conjecture, formula).

    ~ Not        & And        | Or        => Implies (right associative)
    $true        $false       #box  (Box; aliases configurable, optional ':')

Not/Box bind tightest, then ``&``, then ``|``, then ``=>``.  Comments
(``%`` to end of line and ``/* ... */``) are skipped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .formula import (
    BOTTOM,
    TOP,
    Atom,
    Binary,
    Connective,
    Constant,
    Formula,
    Unary,
    connectives,
    subformulas,
)

DEFAULT_BOX_TOKENS = ("#box",)

_SYMBOLS = {
    Connective.AND: "&",
    Connective.OR: "|",
    Connective.IMPLIES: "=>",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<line_comment>%[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<op><=>|<~>|=>|<=|~\||~&|[~&|(),.:\[\]])
  | (?P<dollar>\$[a-z_]+)
  | (?P<hash>\#[A-Za-z_][A-Za-z0-9_]*)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  """,
    re.VERBOSE | re.DOTALL,
)


class TptpError(Exception):
    """Syntax or content error, located at a line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, path: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"{self.line}:{self.column}"
        if self.path:
            where = f"{self.path}:{where}"
        return f"{where}: {self.message}"


@dataclass(frozen=True)
class Problem:
    name: str
    formula: Formula
    role: str = "conjecture"
    source_path: Optional[str] = None


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str, path: Optional[str], box_tokens=DEFAULT_BOX_TOKENS) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    boxes = sorted(box_tokens, key=len, reverse=True)
    while pos < len(text):
        box = next((b for b in boxes if text.startswith(b, pos)), None)
        if box is not None:
            tokens.append(_Token("box", box, line, pos - line_start + 1))
            pos += len(box)
            continue
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise TptpError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, path)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "line_comment", "block_comment"):
            tokens.append(_Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, path):
        self.tokens = tokens
        self.i = 0
        self.path = path

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[_Token] = None) -> TptpError:
        tok = tok or self.tok
        return TptpError(message, tok.line, tok.column, self.path)

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def annotated(self):
        start = self.tok
        if start.kind != "word":
            raise self.error(f"expected an annotated formula, found {start.text!r}")
        if start.text != "fof":
            raise self.error(f"unsupported statement {start.text!r}; only propositional fof is accepted")
        self.advance()
        self.expect("(")
        name_tok = self.advance()
        if name_tok.kind not in ("word", "quoted"):
            raise self.error("expected a formula name", name_tok)
        self.expect(",")
        role_tok = self.advance()
        if role_tok.kind != "word":
            raise self.error("expected a formula role", role_tok)
        self.expect(",")
        formula = self.formula()
        if self.tok.text == ",":
            raise self.error("annotations after the formula are not supported")
        self.expect(")")
        self.expect(".")
        return name_tok.text.strip("'"), role_tok, formula

    # precedence: => (right assoc) < | < & < unary
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.tok.text == "=>":
            self.advance()
            return Binary(Connective.IMPLIES, left, self.formula())
        self.reject_unknown_binary()
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.tok.text == "|":
            self.advance()
            f = Binary(Connective.OR, f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.tok.text == "&":
            self.advance()
            f = Binary(Connective.AND, f, self.unary())
        return f

    def reject_unknown_binary(self):
        if self.tok.text in ("<=>", "<~>", "<=", "~|", "~&"):
            raise self.error(f"unknown connective {self.tok.text!r}")

    def unary(self) -> Formula:
        tok = self.tok
        if tok.text == "~":
            self.advance()
            return Unary(Connective.NOT, self.unary())
        if tok.kind == "hash":
            raise self.error(f"unknown connective {tok.text!r}")
        if tok.kind == "box":
            self.advance()
            if self.tok.text == ":":
                self.advance()
            return Unary(Connective.BOX, self.unary())
        if tok.text == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "dollar":
            self.advance()
            if tok.text == "$true":
                return TOP
            if tok.text == "$false":
                return BOTTOM
            raise self.error(f"unknown constant {tok.text!r}", tok)
        if tok.kind == "word":
            if not tok.text[0].islower():
                raise self.error(f"variables are not propositional: {tok.text!r}", tok)
            self.advance()
            if self.tok.text == "(":
                raise self.error(f"{tok.text!r} applied to arguments; only propositional atoms are accepted")
            return Atom(tok.text)
        if tok.kind == "quoted":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unknown connective {tok.text!r}" if tok.kind == "op" else f"unexpected token {tok.text!r}")


def parse_formula(text: str, box_tokens: Iterable[str] = DEFAULT_BOX_TOKENS) -> Formula:
    """Parse a bare formula such as ``p | ~p``."""
    parser = _Parser(_tokenize(text, None, box_tokens), None)
    f = parser.formula()
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected token {parser.tok.text!r}")
    return f


def parse_problem(
    text: str,
    *,
    language: Optional[frozenset] = None,
    logic_name: Optional[str] = None,
    box_tokens: Iterable[str] = DEFAULT_BOX_TOKENS,
    path: Optional[str] = None,
) -> Problem:
    """Parse a document holding exactly one conjecture.

    With ``language`` given, formulas using a connective outside it are
    rejected with a diagnostic naming ``logic_name``.
    """
    parser = _Parser(_tokenize(text, path, box_tokens), path)
    found = None
    while parser.tok.kind != "eof":
        start = parser.tok
        name, role_tok, formula = parser.annotated()
        if role_tok.text != "conjecture":
            raise TptpError(
                f"unsupported role {role_tok.text!r}; only a single conjecture is accepted",
                role_tok.line, role_tok.column, path,
            )
        if found is not None:
            raise TptpError("multiple conjectures", start.line, start.column, path)
        found = (name, formula, start)
    if found is None:
        raise TptpError("no conjecture found", parser.tok.line, parser.tok.column, path)
    name, formula, start = found
    if language is not None:
        bad = connectives(formula) - set(language)
        if bad:
            names = ", ".join(sorted(c.value for c in bad))
            raise TptpError(
                f"connective(s) {names} not in the language of {logic_name or 'the selected logic'}",
                start.line, start.column, path,
            )
    return Problem(name=name, formula=formula, source_path=path)


def read_problem(path, **kwargs) -> Problem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_problem(text, path=str(path), **kwargs)


def format_formula(f: Formula, box_token: str = DEFAULT_BOX_TOKENS[0]) -> str:
    """Canonical text: binary formulas parenthesised, unary prefixes bare."""
    out: dict = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            out[g] = g.name
        elif isinstance(g, Constant):
            out[g] = "$true" if g.connective is Connective.TOP else "$false"
        elif isinstance(g, Unary):
            inner = out[g.child]
            if g.connective is Connective.NOT:
                out[g] = "~" + inner
            else:
                out[g] = f"{box_token} {inner}"
        else:
            out[g] = f"({out[g.left]} {_SYMBOLS[g.connective]} {out[g.right]})"
    return out[f]


def serialize_problem(problem: Problem, box_token: str = DEFAULT_BOX_TOKENS[0]) -> str:
    return f"fof({problem.name}, {problem.role}, {format_formula(problem.formula, box_token)}).\n"
