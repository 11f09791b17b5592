"""Terms, formulas, desugaring, subformula closures and temporal sugar.

Formulas are immutable trees.  Core nodes are ``Atom``, ``Bottom``,
``Implies``, ``Next``, ``WeakPrev``, ``Until``, ``Since``, ``JBox`` and
``OBox``; every other formula node is an abbreviation removed by
:func:`desugar`.  Agents are referred to by name (a string such as ``"e"``
or ``"1"``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from operator import attrgetter
from typing import Iterator

from .errors import BadInterval, SortError


class Node:
    """Structural equality with a cached hash, shared by terms and formulas."""

    __slots__ = ()

    def _args(self) -> tuple:
        cls = type(self)
        get = cls.__dict__.get("_getter")
        if get is None:
            names = tuple(cls.__dataclass_fields__)
            get = attrgetter(*names) if len(names) > 1 else (lambda o, n=names: tuple(getattr(o, x) for x in n))
            cls._getter = get
        return get(self)

    def __hash__(self) -> int:
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + self._args())
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._args() == other._args()

    def __ne__(self, other: object) -> bool:
        return not self == other

    def __str__(self) -> str:
        from .printer import pretty, pretty_term

        return pretty_term(self) if isinstance(self, Term) else pretty(self)


def _node(cls):
    return dataclass(frozen=True, eq=False, repr=True)(cls)


# ---------------------------------------------------------------- terms


class Sort(enum.Enum):
    EPISTEMIC = "epistemic"
    DEONTIC = "deontic"


class Term(Node):
    pass


@_node
class Const(Term):
    name: str


@_node
class Var(Term):
    name: str


@_node
class Bang(Term):
    sub: Term


@_node
class Sum(Term):
    left: Term
    right: Term


@_node
class Prod(Term):
    left: Term
    right: Term


@_node
class Dagger(Term):
    sub: Term


@_node
class Wildcard(Term):
    """Stand-in term of a forgetfully projected obligation ``O_i φ``."""


def _join_sorts(a: Sort | None, b: Sort | None, term: Term) -> Sort | None:
    if a is None:
        return b
    if b is None or a is b:
        return a
    raise SortError(f"term {term} mixes epistemic and deontic operators")


@lru_cache(maxsize=None)
def term_sort(t: Term) -> Sort | None:
    """Infer the sort of ``t``; ``None`` means poly-sorted (built from atoms and products only)."""
    if isinstance(t, (Const, Var, Wildcard)):
        return None
    if isinstance(t, Bang):
        return _join_sorts(term_sort(t.sub), Sort.EPISTEMIC, t)
    if isinstance(t, Dagger):
        return _join_sorts(term_sort(t.sub), Sort.DEONTIC, t)
    if isinstance(t, Sum):
        inner = _join_sorts(term_sort(t.left), term_sort(t.right), t)
        return _join_sorts(inner, Sort.EPISTEMIC, t)
    if isinstance(t, Prod):
        return _join_sorts(term_sort(t.left), term_sort(t.right), t)
    if isinstance(t, Term):
        return None  # schematic term variables
    raise TypeError(f"not a term: {t!r}")


def check_sort(t: Term, sort: Sort) -> None:
    if isinstance(t, Wildcard) and sort is Sort.EPISTEMIC:
        raise SortError("the projection wildcard can only index obligations")
    found = term_sort(t)
    if found is not None and found is not sort:
        raise SortError(f"term {t} is {found.value} but a {sort.value} term is required here")


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, (Bang, Dagger)):
        yield from subterms(t.sub)
    elif isinstance(t, (Sum, Prod)):
        yield from subterms(t.left)
        yield from subterms(t.right)


# ---------------------------------------------------------------- formulas


class Formula(Node):
    pass


@_node
class Atom(Formula):
    name: str


@_node
class Bottom(Formula):
    pass


@_node
class Implies(Formula):
    left: Formula
    right: Formula


@_node
class Next(Formula):
    sub: Formula


@_node
class WeakPrev(Formula):
    sub: Formula


@_node
class Until(Formula):
    left: Formula
    right: Formula


@_node
class Since(Formula):
    left: Formula
    right: Formula


class Modal(Formula):
    """Common shape of the four justification modalities."""

    agent: str
    term: Term
    sub: Formula


@_node
class JBox(Modal):
    agent: str
    term: Term
    sub: Formula

    def __post_init__(self):
        check_sort(self.term, Sort.EPISTEMIC)


@_node
class OBox(Modal):
    agent: str
    term: Term
    sub: Formula

    def __post_init__(self):
        check_sort(self.term, Sort.DEONTIC)


# sugar


@_node
class Not(Formula):
    sub: Formula


@_node
class Top(Formula):
    pass


@_node
class And(Formula):
    left: Formula
    right: Formula


@_node
class Or(Formula):
    left: Formula
    right: Formula


@_node
class Iff(Formula):
    left: Formula
    right: Formula


@_node
class StrongPrev(Formula):
    sub: Formula


@_node
class Eventually(Formula):
    sub: Formula


@_node
class Always(Formula):
    sub: Formula


@_node
class Once(Formula):
    sub: Formula


@_node
class Sofar(Formula):
    sub: Formula


@_node
class AlwaysBoxdot(Formula):
    sub: Formula


@_node
class WeakUntil(Formula):
    left: Formula
    right: Formula


@_node
class JDiamond(Modal):
    agent: str
    term: Term
    sub: Formula

    def __post_init__(self):
        check_sort(self.term, Sort.EPISTEMIC)


@_node
class OPermit(Modal):
    agent: str
    term: Term
    sub: Formula

    def __post_init__(self):
        check_sort(self.term, Sort.DEONTIC)


@_node
class Time(Formula):
    """``time=m``: the strong previous operator iterated m times over ``◯w⊥``."""

    m: int

    def __post_init__(self):
        if self.m < 0:
            raise BadInterval(f"time={self.m} is negative")


CORE_TYPES = (Atom, Bottom, Implies, Next, WeakPrev, Until, Since, JBox, OBox)
UNARY_TYPES = (Next, WeakPrev, Not, StrongPrev, Eventually, Always, Once, Sofar, AlwaysBoxdot)
BINARY_TYPES = (Implies, Until, Since, And, Or, Iff, WeakUntil)
MODAL_TYPES = (JBox, OBox, JDiamond, OPermit)

BOT = Bottom()
TOP = Top()


def neg(f: Formula) -> Formula:
    return Not(f)


def conj(*fs: Formula) -> Formula:
    """Left-nested conjunction; ``conj()`` is ⊤."""
    if not fs:
        return TOP
    out = fs[0]
    for f in fs[1:]:
        out = And(out, f)
    return out


def disj(*fs: Formula) -> Formula:
    if not fs:
        return BOT
    out = fs[0]
    for f in fs[1:]:
        out = Or(out, f)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Atom, Bottom, Top, Time)):
        return ()
    if isinstance(f, UNARY_TYPES) or isinstance(f, Modal):
        return (f.sub,)
    if isinstance(f, BINARY_TYPES):
        return (f.left, f.right)
    return ()


def rebuild(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    """Return a node of the same kind as ``f`` with its immediate subformulas replaced."""
    if isinstance(f, Modal):
        return type(f)(f.agent, f.term, kids[0])
    if isinstance(f, UNARY_TYPES):
        return type(f)(kids[0])
    if isinstance(f, BINARY_TYPES):
        return type(f)(kids[0], kids[1])
    return f


def is_core(f: Formula) -> bool:
    return isinstance(f, CORE_TYPES) and all(is_core(k) for k in children(f))


# ---------------------------------------------------------------- desugaring


def _not(f: Formula) -> Formula:
    return Implies(f, BOT)


def _or(a: Formula, b: Formula) -> Formula:
    return Implies(_not(a), b)


def _and(a: Formula, b: Formula) -> Formula:
    return _not(_or(_not(a), _not(b)))


_CORE_TOP = _not(BOT)


@lru_cache(maxsize=None)
def desugar(f: Formula) -> Formula:
    """Unfold every abbreviation, giving a formula built from core nodes only."""
    if isinstance(f, (Atom, Bottom)):
        return f
    if isinstance(f, Top):
        return _CORE_TOP
    if isinstance(f, Time):
        out: Formula = WeakPrev(BOT)
        for _ in range(f.m):
            out = _not(WeakPrev(_not(out)))
        return out
    kids = tuple(desugar(k) for k in children(f))
    if isinstance(f, CORE_TYPES):
        return rebuild(f, kids)
    if isinstance(f, Not):
        return _not(kids[0])
    if isinstance(f, Or):
        return _or(*kids)
    if isinstance(f, And):
        return _and(*kids)
    if isinstance(f, Iff):
        a, b = kids
        return _and(Implies(a, b), Implies(b, a))
    if isinstance(f, StrongPrev):
        return _not(WeakPrev(_not(kids[0])))
    if isinstance(f, Eventually):
        return Until(_CORE_TOP, kids[0])
    if isinstance(f, Always):
        return _not(Until(_CORE_TOP, _not(kids[0])))
    if isinstance(f, Once):
        return Since(_CORE_TOP, kids[0])
    if isinstance(f, Sofar):
        return _not(Since(_CORE_TOP, _not(kids[0])))
    if isinstance(f, AlwaysBoxdot):
        box_past = _not(Since(_CORE_TOP, _not(kids[0])))
        box_future = _not(Until(_CORE_TOP, _not(kids[0])))
        return _and(box_past, box_future)
    if isinstance(f, WeakUntil):
        a, b = kids
        return _or(Until(a, b), _not(Until(_CORE_TOP, _not(a))))
    if isinstance(f, JDiamond):
        return _not(JBox(f.agent, f.term, _not(kids[0])))
    if isinstance(f, OPermit):
        return _not(OBox(f.agent, f.term, _not(kids[0])))
    # pattern variables and other extension nodes pass through unchanged
    return f


# ---------------------------------------------------------------- closures


def subformulas(f: Formula) -> set[Formula]:
    """``Subf(f)`` by the inductive clauses; ``f`` should be in core form."""
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        stack.extend(children(g))
    return out


@lru_cache(maxsize=None)
def temporal_depth(f: Formula) -> int:
    """Nesting depth of temporal operators in the core form of ``f``."""
    kids = children(f)
    inner = max((temporal_depth(k) for k in kids), default=0)
    return inner + 1 if isinstance(f, (Next, WeakPrev, Until, Since)) else inner


INITIAL_MARKER = Since(_CORE_TOP, WeakPrev(BOT))


@dataclass(frozen=True)
class FormulaClosure:
    base: Formula
    positive_part: frozenset[Formula]
    negations: frozenset[Formula]
    members: frozenset[Formula] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "members", self.positive_part | self.negations)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, f: object) -> bool:
        return f in self.members


def subf_plus(chi: Formula) -> FormulaClosure:
    """The finite closure used by the completeness argument: subformulas of χ and of ⊤S◯w⊥, plus negations."""
    chi = desugar(chi)
    positive = frozenset(subformulas(chi) | subformulas(INITIAL_MARKER))
    return FormulaClosure(chi, positive, frozenset(_not(g) for g in positive))


# ---------------------------------------------------------------- temporal sugar


def time_literal(m: int) -> Formula:
    return Time(m)


def true_at(m: int, f: Formula) -> Formula:
    """``true_m(f)`` = ⊡(time=m → f)."""
    return AlwaysBoxdot(Implies(Time(m), f))


def match_true_at(f: Formula) -> tuple[int, Formula] | None:
    """Inverse of :func:`true_at` on its exact output shape."""
    if isinstance(f, AlwaysBoxdot) and isinstance(f.sub, Implies) and isinstance(f.sub.left, Time):
        return f.sub.left.m, f.sub.right
    return None


class IntervalKind(enum.Enum):
    BOX_NOW_OPEN = "[now,m)"
    BOX_NOW_CLOSED = "[now,m]"
    BOX_SINCE_OPEN = "(m,now]"
    BOX_SINCE_CLOSED = "[m,now]"
    BOX_CLOSED_CLOSED = "[m,n]"
    BOX_CLOSED_OPEN = "[m,n)"
    BOX_OPEN_CLOSED = "(m,n]"
    BOX_OPEN_OPEN = "(m,n)"
    DIAMOND_CLOSED_CLOSED = "<m,n>"


_ONE_ENDPOINT = {
    IntervalKind.BOX_NOW_OPEN,
    IntervalKind.BOX_NOW_CLOSED,
    IntervalKind.BOX_SINCE_OPEN,
    IntervalKind.BOX_SINCE_CLOSED,
}


def interval_operator(kind: IntervalKind, m: int, n: int | None, f: Formula) -> Formula:
    """Encode "f holds throughout (or somewhere in) an interval" with ``time=`` literals."""
    if kind in _ONE_ENDPOINT:
        if kind is IntervalKind.BOX_NOW_OPEN:
            return Until(f, Time(m))
        if kind is IntervalKind.BOX_NOW_CLOSED:
            return Until(f, Time(m + 1))
        if kind is IntervalKind.BOX_SINCE_OPEN:
            return Since(f, Time(m))
        if m == 0:
            raise BadInterval("[0,now] would need time=-1")
        return Since(f, Time(m - 1))
    if n is None or m >= n:
        raise BadInterval(f"interval needs m < n, got m={m}, n={n}")
    if kind is IntervalKind.BOX_CLOSED_CLOSED:
        return true_at(m, Until(f, Time(n + 1)))
    if kind is IntervalKind.BOX_CLOSED_OPEN:
        return true_at(m, Until(f, Time(n)))
    if kind is IntervalKind.BOX_OPEN_CLOSED:
        return true_at(n, Since(f, Time(m)))
    if kind is IntervalKind.BOX_OPEN_OPEN:
        return true_at(n - 1, Since(f, Time(m)))
    window = And(f, disj(*(Time(k) for k in range(m, n + 1))))
    return Or(Eventually(window), Once(window))


# ---------------------------------------------------------------- projection


def forgetful_projection(f: Formula) -> Formula:
    """Erase the reasons of every obligation and permission, leaving ``O_i ψ`` / ``P_i ψ``."""
    kids = tuple(forgetful_projection(k) for k in children(f))
    if isinstance(f, (OBox, OPermit)):
        return type(f)(f.agent, Wildcard(), kids[0])
    return rebuild(f, kids) if kids else f


def atoms_of(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def terms_of(f: Formula) -> set[Term]:
    """Every term (with its subterms) indexing a modality in ``f``."""
    out: set[Term] = set()
    for g in subformulas(f):
        if isinstance(g, Modal):
            out.update(subterms(g.term))
    return out


def agents_of(f: Formula) -> set[str]:
    return {g.agent for g in subformulas(f) if isinstance(g, Modal)}
