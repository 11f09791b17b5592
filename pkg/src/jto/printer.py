"""ASCII rendering of terms and formulas, inverse to :mod:`jto.parser`."""

from __future__ import annotations

from .syntax import (
    Always,
    AlwaysBoxdot,
    And,
    Atom,
    Bang,
    Bottom,
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
    Top,
    Until,
    Var,
    WeakPrev,
    WeakUntil,
    Wildcard,
)

# binding strength: larger binds tighter
IFF, IMP, OR, AND, TEMPORAL, UNARY = 1, 2, 3, 4, 5, 6

_UNARY_SYMBOL = {
    Not: "~",
    Next: "X ",
    WeakPrev: "Yw ",
    StrongPrev: "Ys ",
    Eventually: "F ",
    Always: "G ",
    Once: "P- ",
    Sofar: "H ",
    AlwaysBoxdot: "A ",
}

_BINARY = {
    Iff: ("<->", IFF, "left"),
    Implies: ("->", IMP, "right"),
    Or: ("|", OR, "left"),
    And: ("&", AND, "left"),
    Until: ("U", TEMPORAL, "right"),
    Since: ("S", TEMPORAL, "right"),
    WeakUntil: ("W", TEMPORAL, "right"),
}


def pretty_term(t: Term, level: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return "$" + t.name
    if isinstance(t, Wildcard):
        return "_"
    if isinstance(t, Bang):
        return "!" + pretty_term(t.sub, 3)
    if isinstance(t, Dagger):
        return "#" + pretty_term(t.sub, 3)
    if isinstance(t, Sum):
        text = f"{pretty_term(t.left, 1)}+{pretty_term(t.right, 2)}"
        return f"({text})" if level > 1 else text
    if isinstance(t, Prod):
        text = f"{pretty_term(t.left, 2)}*{pretty_term(t.right, 3)}"
        return f"({text})" if level > 2 else text
    raise TypeError(f"not a term: {t!r}")


def _modal_prefix(f: Formula) -> str:
    term = pretty_term(f.term)
    if isinstance(f.term, Wildcard):
        return f"{'O' if isinstance(f, OBox) else 'P'}_{f.agent} "
    if isinstance(f, JBox):
        return f"[{term}]_{f.agent} "
    if isinstance(f, OBox):
        return f"O[{term}]_{f.agent} "
    if isinstance(f, JDiamond):
        return f"<{term}>_{f.agent} "
    return f"P[{term}]_{f.agent} "


def pretty(f: Formula, level: int = 0) -> str:
    """Render ``f`` with the fewest parentheses the grammar needs."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bottom):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Time):
        return f"time={f.m}"
    if isinstance(f, (JBox, OBox, JDiamond, OPermit)):
        return _modal_prefix(f) + pretty(f.sub, UNARY)
    symbol = _UNARY_SYMBOL.get(type(f))
    if symbol is not None:
        return symbol + pretty(f.sub, UNARY)
    op, strength, assoc = _BINARY[type(f)]
    left_level = strength if assoc == "left" else strength + 1
    right_level = strength if assoc == "right" else strength + 1
    text = f"{pretty(f.left, left_level)} {op} {pretty(f.right, right_level)}"
    return f"({text})" if level > strength else text
