"""Bounded satisfiability over lasso words with justification assertions abstracted to atoms.

Every justification assertion ``[t]_i phi`` or ``O[t]_i phi`` becomes a fresh
atom, and axiom instances over the assertions that occur become global side
constraints.  The result is a pure temporal problem, which is decided for
each lasso shape within the bounds by a Tseitin encoding and DPLL.  Models
of the input give models of the abstraction, so UNSAT is sound; a SAT
witness is a model of the abstraction only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .errors import BoundsTooLarge, NotUnsat
from .models import FittingModel, model_from_dict
from .report import Report
from .sat import Solver
from .semantics import evaluate_word
from .syntax import (
    Atom,
    Bang,
    Bottom,
    Dagger,
    Formula,
    Implies,
    JBox,
    Modal,
    Next,
    OBox,
    Prod,
    Since,
    Sum,
    Time,
    Until,
    WeakPrev,
    Wildcard,
    atoms_of,
    children,
    conj,
    desugar,
    neg,
    rebuild,
    temporal_depth,
)

# encoded (subformula, position) pairs allowed for the largest shape
MAX_CELLS = 400_000


@dataclass(frozen=True)
class SearchBounds:
    max_stem: int
    max_loop: int

    def __post_init__(self):
        if self.max_stem < 0 or self.max_loop < 1:
            raise ValueError("bounds need max_stem >= 0 and max_loop >= 1")

    def shapes(self) -> list[tuple[int, int]]:
        """Every (stem, loop) pair in search order: stem outer, loop inner."""
        return [(p, q) for p in range(self.max_stem + 1) for q in range(1, self.max_loop + 1)]


# ---------------------------------------------------------------- abstraction


@dataclass
class Abstraction:
    atom_map: dict[Formula, str]
    side_constraints: tuple[Formula, ...]
    formulas: tuple[Formula, ...]

    def inverse(self) -> dict[str, Formula]:
        return {a: f for f, a in self.atom_map.items()}

    def concretize(self, f: Formula) -> Formula:
        """Replace every abstraction atom by the assertion it stands for."""
        back = self.inverse()

        def go(g: Formula) -> Formula:
            if isinstance(g, Atom) and g.name in back:
                return back[g.name]
            kids = children(g)
            return rebuild(g, tuple(go(k) for k in kids)) if kids else g

        return go(f)


def _modal_subformulas(f: Formula, out: list[Formula]) -> None:
    if isinstance(f, Modal):
        if f not in out:
            out.append(f)
    for k in children(f):
        _modal_subformulas(k, out)


def _instances(ms: list[Formula], rounds: int) -> list[Formula]:
    """Axiom instances among the assertions ``ms``; each extra round adds introspection and factivity consequents."""
    ms = list(ms)
    for _ in range(rounds - 1):
        for m in list(ms):
            if isinstance(m.term, Wildcard):
                continue
            if isinstance(m, JBox):
                _modal_subformulas(JBox(m.agent, Bang(m.term), m), ms)
            else:
                _modal_subformulas(OBox(m.agent, Dagger(m.term), Implies(m, m.sub)), ms)
    present = set(ms)
    out: list[Formula] = []

    def when_present(premises: tuple[Formula, ...], target: Formula) -> None:
        if target in present:
            f = target
            for a in reversed(premises):
                f = Implies(a, f)
            out.append(f)

    for m in ms:
        kind, wild = type(m), isinstance(m.term, Wildcard)
        if kind is JBox:
            out.append(Implies(m, m.sub))
            if not wild:
                when_present((m,), JBox(m.agent, Bang(m.term), m))
        else:
            clash = OBox(m.agent, m.term, desugar(neg(m.sub)))
            if clash in present:
                out.append(desugar(neg(conj(m, clash))))
            sub = m.sub
            if (
                isinstance(m.term, Dagger)
                and isinstance(sub, Implies)
                and isinstance(sub.left, OBox)
                and sub.left.agent == m.agent
                and sub.left.term == m.term.sub
                and sub.left.sub == sub.right
            ):
                out.append(m)
        for other in ms:
            if type(other) is not kind or other.agent != m.agent:
                continue
            other_wild = isinstance(other.term, Wildcard)
            if kind is JBox and not wild and not other_wild:
                when_present((m,), JBox(m.agent, Sum(m.term, other.term), m.sub))
                when_present((m,), JBox(m.agent, Sum(other.term, m.term), m.sub))
            if isinstance(m.sub, Implies) and m.sub.left == other.sub and wild == other_wild:
                term = m.term if wild else Prod(m.term, other.term)
                when_present((m, other), kind(m.agent, term, m.sub.right))
    return out


def abstract(fs: Iterable[Formula], rounds: int = 1) -> Abstraction:
    """Replace assertions by fresh atoms and collect the side constraints."""
    fs = tuple(desugar(f) for f in fs)
    ms: list[Formula] = []
    for f in fs:
        _modal_subformulas(f, ms)
    constraints = _instances(ms, rounds)
    for c in constraints:
        _modal_subformulas(c, ms)
    taken = set().union(*(atoms_of(f) for f in fs)) if fs else set()
    atom_map: dict[Formula, str] = {}
    k = 0
    for m in ms:
        k += 1
        while f"_m{k}" in taken:
            k += 1
        atom_map[m] = f"_m{k}"

    def go(g: Formula) -> Formula:
        if isinstance(g, Modal):
            return Atom(atom_map[g])
        kids = children(g)
        return rebuild(g, tuple(go(x) for x in kids)) if kids else g

    return Abstraction(atom_map, tuple(go(c) for c in constraints), tuple(go(f) for f in fs))


# ---------------------------------------------------------------- encoding


class _Encoding:
    """Tseitin variables for core formulas at every position of one lasso shape."""

    def __init__(self, p: int, q: int, depth: int):
        self.p, self.q = p, q
        self.h = p + q * (depth + 2)
        self.solver = Solver()
        self.true = self.solver.new_var()
        self.solver.add([self.true])
        self.atoms: dict[tuple[str, int], int] = {}
        self.cells: dict[tuple[Formula, int], int] = {}

    def index(self, n: int) -> int:
        return n if n < self.p else self.p + (n - self.p) % self.q

    def succ(self, n: int) -> int:
        return n + 1 if n + 1 < self.h else self.h - self.q

    def atom(self, name: str, k: int) -> int:
        v = self.atoms.get((name, k))
        if v is None:
            v = self.atoms[(name, k)] = self.solver.new_var()
        return v

    def _or(self, a: int, b: int) -> int:
        t = self.true
        if a == t or b == t:
            return t
        if a == -t:
            return b
        if b == -t or a == b:
            return a
        if a == -b:
            return t
        v = self.solver.new_var()
        self.solver.add([-v, a, b])
        self.solver.add([v, -a])
        self.solver.add([v, -b])
        return v

    def _and(self, a: int, b: int) -> int:
        return -self._or(-a, -b)

    def lit(self, f: Formula, n: int) -> int:
        key = (f, n)
        got = self.cells.get(key)
        if got is not None:
            return got
        if isinstance(f, Atom):
            out = self.atom(f.name, self.index(n))
        elif isinstance(f, Bottom):
            out = -self.true
        elif isinstance(f, Implies):
            out = self._or(-self.lit(f.left, n), self.lit(f.right, n))
        elif isinstance(f, Next):
            out = self.lit(f.sub, self.succ(n))
        elif isinstance(f, WeakPrev):
            out = self.true if n == 0 else self.lit(f.sub, n - 1)
        elif isinstance(f, Since):
            out = self._since(f)[n]
        elif isinstance(f, Until):
            out = self._until(f)[n]
        else:
            raise TypeError(f"not a justification-free core formula: {f}")
        self.cells[key] = out
        return out

    def _since(self, f: Since) -> list[int]:
        out = []
        for n in range(self.h):
            b = self.lit(f.right, n)
            out.append(b if n == 0 else self._or(b, self._and(self.lit(f.left, n), out[-1])))
        for n, v in enumerate(out):
            self.cells[(f, n)] = v
        return out

    def _until(self, f: Until) -> list[int]:
        h, q = self.h, self.q
        base = h - q
        # the last q positions form a cycle; unroll it twice and cut
        chain = [-self.true]
        for j in reversed(range(2 * q)):
            n = base + j % q
            chain.append(self._or(self.lit(f.right, n), self._and(self.lit(f.left, n), chain[-1])))
        chain.reverse()
        out = [0] * h
        for i in range(q):
            out[base + i] = chain[i]
        for n in reversed(range(base)):
            out[n] = self._or(self.lit(f.right, n), self._and(self.lit(f.left, n), out[n + 1]))
        for n, v in enumerate(out):
            self.cells[(f, n)] = v
        return out


# ---------------------------------------------------------------- verdicts


@dataclass
class Verdict:
    sat: bool
    bounds: SearchBounds
    stem: tuple[frozenset[str], ...] = ()
    loop: tuple[frozenset[str], ...] = ()
    position: int = 0
    shapes_tried: int = 0
    abstraction: Abstraction | None = field(default=None, repr=False)

    def labels(self) -> dict[int, list[str]]:
        """True atoms per word index, assertions shown in concrete syntax."""
        back = self.abstraction.inverse() if self.abstraction else {}
        out = {}
        for k, label in enumerate(self.stem + self.loop):
            out[k] = sorted(str(back[a]) if a in back else a for a in label)
        return out

    def guarantee(self) -> str:
        if self.sat:
            return "the abstraction has a lasso model of this shape; the justification assertions are unchecked"
        return (
            f"no lasso word with stem <= {self.bounds.max_stem} and loop <= {self.bounds.max_loop} "
            "satisfies the abstraction, so no model has a run of such a shape satisfying the input"
        )

    def __str__(self) -> str:
        if not self.sat:
            return f"UNSAT max_stem={self.bounds.max_stem} max_loop={self.bounds.max_loop}"
        p = len(self.stem)
        stem = ",".join(str(k) for k in range(p))
        loop = ",".join(str(p + k) for k in range(len(self.loop)))
        labels = ", ".join(f"{k}:{{{', '.join(v)}}}" for k, v in self.labels().items())
        return f"SAT stem=[{stem}] loop=[{loop}] labels={{{labels}}}"


def _prepare(fs: Iterable[Formula], at_position: int | None) -> tuple[Abstraction, int, int]:
    fs = list(fs)
    if at_position is not None:
        fs.append(Time(at_position))
    ab = abstract(fs)
    depth = max((temporal_depth(f) for f in ab.formulas + ab.side_constraints), default=0)
    return ab, depth, at_position or 0


def _encode(ab: Abstraction, depth: int, pos: int, p: int, q: int) -> tuple[_Encoding, list[int]]:
    enc = _Encoding(p, q, depth)
    goals = [enc.lit(f, pos) for f in ab.formulas]
    for c in ab.side_constraints:
        for n in range(enc.h):
            enc.solver.add([enc.lit(c, n)])
    return enc, goals


def _budget(ab: Abstraction, depth: int, b: SearchBounds) -> None:
    size = sum(len(_cells(f)) for f in ab.formulas + ab.side_constraints)
    h = b.max_stem + b.max_loop * (depth + 2)
    if size * h > MAX_CELLS:
        raise BoundsTooLarge(f"{size} subformulas over {h} positions exceed the budget of {MAX_CELLS} cells")


def _cells(f: Formula) -> set[Formula]:
    out = {f}
    for k in children(f):
        out |= _cells(k)
    return out


def bounded_sat(fs: Iterable[Formula], at_position: int | None = None, b: SearchBounds | None = None) -> Verdict:
    """Search lasso shapes in order for a word satisfying the abstraction of ``fs`` at ``at_position`` (default 0)."""
    b = b or SearchBounds(8, 2)
    ab, depth, pos = _prepare(fs, at_position)
    _budget(ab, depth, b)
    for tried, (p, q) in enumerate(b.shapes(), 1):
        enc, goals = _encode(ab, depth, pos, p, q)
        model = enc.solver.solve(goals)
        if model is None:
            continue
        names = sorted({name for name, _ in enc.atoms} | set().union(*(atoms_of(f) for f in ab.formulas)))
        word = [
            frozenset(a for a in names if (a, k) in enc.atoms and model[enc.atoms[(a, k)]])
            for k in range(p + q)
        ]
        verdict = Verdict(True, b, tuple(word[:p]), tuple(word[p:]), pos, tried, ab)
        _check_witness(verdict)
        return verdict
    return Verdict(False, b, position=pos, shapes_tried=len(b.shapes()), abstraction=ab)


def _check_witness(v: Verdict) -> None:
    ab = v.abstraction
    h = len(v.stem) + len(v.loop) * (max((temporal_depth(c) for c in ab.side_constraints), default=0) + 2)
    for f in ab.formulas:
        if not evaluate_word(v.stem, v.loop, f)(v.position):
            raise AssertionError(f"search witness fails {f}")
    for c in ab.side_constraints:
        holds = evaluate_word(v.stem, v.loop, c)
        if not all(holds(n) for n in range(h)):
            raise AssertionError(f"search witness fails side constraint {c}")


def witness_model(v: Verdict) -> FittingModel:
    """The one-run model induced by a SAT witness, with no agents."""
    if not v.sat:
        raise ValueError("UNSAT verdicts have no witness")
    p = len(v.stem)
    states = [f"s{k}" for k in range(p + len(v.loop))]
    return model_from_dict(
        {
            "kind": "fitting",
            "name": "search-witness",
            "agents": [],
            "states": states,
            "runs": [{"stem": states[:p], "loop": states[p:]}],
            "valuation": {s: sorted(label) for s, label in zip(states, v.stem + v.loop)},
        }
    )


def explain_unsat(fs: Iterable[Formula], b: SearchBounds, at_position: int | None = None) -> Report:
    """Name the first (position, atom) whose two values both fail under unit propagation.

    The shape examined has a stem reaching just past the target position, so
    that the clash is reported where it arises.
    """
    fs = list(fs)
    if bounded_sat(fs, at_position, b).sat:
        raise NotUnsat("the input is satisfiable within the bounds")
    ab, depth, pos = _prepare(fs, at_position)
    # the smallest shape where the position has a state of its own
    p, q = min(b.max_stem, pos + 1), 1
    enc, goals = _encode(ab, depth, pos, p, q)
    back = ab.inverse()
    names = sorted(back) + sorted({a for a, _ in enc.atoms} - set(back))
    report = Report(title="unsat explanation")
    report.add("shape", f"stem={p} loop={q}")
    for n, name in product(range(enc.h), names):
        v = enc.atoms.get((name, enc.index(n)))
        if v is None:
            continue
        if enc.solver.propagates_to_conflict(goals + [v]) and enc.solver.propagates_to_conflict(goals + [-v]):
            shown = str(back.get(name, Atom(name)))
            report.add("clash", f"atom {shown} at position {n}")
            return report
    report.add("clash", "no single atom clashes by propagation; refuted by case analysis")
    return report


__all__ = [
    "MAX_CELLS",
    "Abstraction",
    "SearchBounds",
    "Verdict",
    "abstract",
    "bounded_sat",
    "explain_unsat",
    "witness_model",
]
