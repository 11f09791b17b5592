"""Recursive-descent parser for the ASCII formula syntax.

Grammar (loosest binding first)::

    formula  := imp ('<->' imp)*
    imp      := or ('->' imp)?                      right associative
    or       := and ('|' and)*
    and      := temporal ('&' temporal)*
    temporal := unary (('U' | 'S' | 'W') temporal)?  right associative
    unary    := '~' unary | ('X' | 'Yw' | 'Ys' | 'F' | 'G' | 'P-' | 'H' | 'A') unary
              | '[' term ']_' agent unary | 'O[' term ']_' agent unary
              | '<' term '>_' agent unary | 'P[' term ']_' agent unary
              | 'O_' agent unary | 'P_' agent unary
              | 'time=' NUMBER | 'true_' NUMBER '(' formula ')'
              | 'bot' | 'top' | atom | '(' formula ')'
    term     := prod ('+' prod)*
    prod     := tunary ('*' tunary)*
    tunary   := '!' tunary | '#' tunary | '$' NAME | NAME | '(' term ')'

Atoms start with a lowercase letter.  ``$c`` is the constant ``c``; a bare
name is a variable unless it is listed in ``constants``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .syntax import (
    BOT,
    TOP,
    Always,
    AlwaysBoxdot,
    And,
    Atom,
    Bang,
    Const,
    Dagger,
    Eventually,
    Formula,
    Iff,
    Implies,
    JBox,
    JDiamond,
    Next,
    Not,
    OBox,
    Once,
    OPermit,
    Or,
    Prod,
    Since,
    Sofar,
    StrongPrev,
    Sum,
    Term,
    Time,
    Until,
    Var,
    WeakPrev,
    WeakUntil,
    Wildcard,
    true_at,
)

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<op><->|->|P-(?!>)|[()\[\]<>~&|!+*\#_=$])
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_PREFIX = {
    "X": Next,
    "Yw": WeakPrev,
    "Ys": StrongPrev,
    "F": Eventually,
    "G": Always,
    "P-": Once,
    "H": Sofar,
    "A": AlwaysBoxdot,
}
_TEMPORAL = {"U": Until, "S": Since, "W": WeakUntil}
RESERVED = set(_PREFIX) | set(_TEMPORAL) | {"O", "P", "bot", "top", "time"}
_WILD = re.compile(r"^([OP])_([A-Za-z0-9]+)$")
_TRUE = re.compile(r"^true_(\d+)$")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, constants: frozenset[str]):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.constants = constants

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected: set[str], message: str | None = None) -> ParseError:
        line, col = _line_col(self.text, self.tok.offset)
        found = self.tok.text or "end of input"
        return ParseError(message or f"unexpected {found!r}", line, col, frozenset(expected))

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise self.fail({text})

    def number(self) -> int:
        if self.tok.kind != "num":
            raise self.fail({"NUMBER"})
        value = int(self.tok.text)
        self.i += 1
        return value

    # formulas

    def formula(self) -> Formula:
        out = self.implication()
        while self.accept("<->"):
            out = Iff(out, self.implication())
        return out

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        out = self.conjunction()
        while self.accept("|"):
            out = Or(out, self.conjunction())
        return out

    def conjunction(self) -> Formula:
        out = self.temporal()
        while self.accept("&"):
            out = And(out, self.temporal())
        return out

    def temporal(self) -> Formula:
        left = self.unary()
        node = _TEMPORAL.get(self.tok.text) if self.tok.kind == "name" else None
        if node is not None:
            self.i += 1
            return node(left, self.temporal())
        return left

    def agent(self) -> str:
        self.expect("_")
        if self.tok.kind not in ("name", "num"):
            raise self.fail({"AGENT"})
        name = self.tok.text
        self.i += 1
        return name

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("~"):
            return Not(self.unary())
        if tok.text in _PREFIX and tok.kind in ("name", "op"):
            self.i += 1
            return _PREFIX[tok.text](self.unary())
        if self.accept("("):
            inner = self.formula()
            self.expect(")")
            return inner
        if self.accept("["):
            term = self.term()
            self.expect("]")
            agent = self.agent()
            return JBox(agent, term, self.unary())
        if self.accept("<"):
            term = self.term()
            self.expect(">")
            agent = self.agent()
            return JDiamond(agent, term, self.unary())
        if tok.kind == "name":
            if tok.text in ("O", "P") and self.tokens[self.i + 1].text == "[":
                self.i += 2
                term = self.term()
                self.expect("]")
                agent = self.agent()
                node = OBox if tok.text == "O" else OPermit
                return node(agent, term, self.unary())
            wild = _WILD.match(tok.text)
            if wild:
                self.i += 1
                node = OBox if wild.group(1) == "O" else OPermit
                return node(wild.group(2), Wildcard(), self.unary())
            if tok.text == "bot":
                self.i += 1
                return BOT
            if tok.text == "top":
                self.i += 1
                return TOP
            if tok.text == "time":
                self.i += 1
                self.expect("=")
                return Time(self.number())
            when = _TRUE.match(tok.text)
            if when:
                self.i += 1
                self.expect("(")
                body = self.formula()
                self.expect(")")
                return true_at(int(when.group(1)), body)
            if tok.text[0].islower():
                self.i += 1
                return Atom(tok.text)
        raise self.fail({"ATOM", "(", "~", "[", "<", "O[", "P[", "X", "Yw", "Ys", "F", "G", "P-", "H", "A", "bot", "top", "time="})

    # terms

    def term(self) -> Term:
        out = self.product()
        while self.accept("+"):
            out = Sum(out, self.product())
        return out

    def product(self) -> Term:
        out = self.term_unary()
        while self.accept("*"):
            out = Prod(out, self.term_unary())
        return out

    def term_unary(self) -> Term:
        if self.accept("!"):
            return Bang(self.term_unary())
        if self.accept("#"):
            return Dagger(self.term_unary())
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        if self.accept("$"):
            if self.tok.kind != "name":
                raise self.fail({"NAME"})
            name = self.tok.text
            self.i += 1
            return Const(name)
        if self.tok.kind == "name":
            name = self.tok.text
            self.i += 1
            return Const(name) if name in self.constants else Var(name)
        raise self.fail({"NAME", "$", "!", "#", "("})

    def finish(self) -> None:
        if self.tok.kind != "eof":
            raise self.fail({"end of input"})


def parse_formula(text: str, constants: frozenset[str] | set[str] = frozenset()) -> Formula:
    """Parse one formula; raises :class:`ParseError` or :class:`SortError`."""
    p = _Parser(text, frozenset(constants))
    out = p.formula()
    p.finish()
    return out


def parse_term(text: str, constants: frozenset[str] | set[str] = frozenset()) -> Term:
    p = _Parser(text, frozenset(constants))
    out = p.term()
    p.finish()
    return out


@dataclass
class FormulaFile:
    """Contents of a ``.jto`` file: ordered, optionally named formulas."""

    formulas: list[tuple[str | None, Formula]]
    agents: list[str]
    constants: list[str]

    def named(self) -> dict[str, Formula]:
        return {name: f for name, f in self.formulas if name is not None}

    def all(self) -> list[Formula]:
        return [f for _, f in self.formulas]


_DEFINITION = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_'-]*)\s*:=\s*(.*)$")


def parse_formula_file(text: str) -> FormulaFile:
    """Parse ``.jto`` text: one formula per line, ``name := formula`` allowed, ``#`` line comments,
    ``@agents`` and ``@constants`` directives."""
    out = FormulaFile([], [], [])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            key, *values = line[1:].split()
            if key == "agents":
                out.agents.extend(values)
            elif key == "constants":
                out.constants.extend(values)
            else:
                raise ParseError(f"unknown directive @{key}", lineno, 1)
            continue
        name = None
        m = _DEFINITION.match(line)
        if m:
            name, line = m.group(1), m.group(2)
        try:
            f = parse_formula(line, out.constants)
        except ParseError as err:
            raise ParseError(str(err).split(" at line")[0], lineno, err.column, err.expected) from None
        out.formulas.append((name, f))
    return out


def format_formula_file(ff: FormulaFile) -> str:
    lines = []
    if ff.agents:
        lines.append("@agents " + " ".join(ff.agents))
    if ff.constants:
        lines.append("@constants " + " ".join(ff.constants))
    for name, f in ff.formulas:
        lines.append(f"{name} := {f}" if name else str(f))
    return "\n".join(lines) + "\n"
