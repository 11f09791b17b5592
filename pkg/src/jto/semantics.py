"""Truth of formulas at points of lasso runs, for both kinds of model.

Each core subformula is evaluated once per run on a window of positions
``0 .. H-1`` with ``H = p + q*(d + 2)`` (``d`` the temporal depth, rounded up
so that one window serves many queries).  Inside that window every
subformula has already become periodic with period ``q``, so later positions
are folded back into the last loop copy.

Justification assertions depend only on the current state.  They need the
truth value of their body at each state, which is read off every occurrence
of the state on every run; occurrences that disagree raise
:class:`PositionDependence` instead of silently picking one.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import HorizonExceeded, PositionDependence
from .models import FittingModel, LassoRun, NeighborhoodModel
from .syntax import (
    Atom,
    Bottom,
    Formula,
    Implies,
    JBox,
    Next,
    OBox,
    Since,
    Time,
    Until,
    WeakPrev,
    children,
    desugar,
    temporal_depth,
)

MAX_WINDOW = 20_000
_DEPTH_STEP = 8


def window(run: LassoRun, depth: int) -> int:
    return run.p + run.q * (depth + 2)


def fold(run: LassoRun, h: int, n: int) -> int:
    """Position inside ``0 .. h-1`` with the same truth values as ``n``."""
    if n < h:
        return n
    base = h - run.q
    return base + (n - base) % run.q


class Evaluator:
    """Truth arrays of core formulas over a fixed window of every run.

    ``label(state)`` gives the atoms true at a state and ``box(f)`` maps a
    justification assertion to its truth value at each state on a run.
    """

    def __init__(self, runs: Sequence[LassoRun], depth: int, label: Callable[[str], frozenset[str]],
                 box: Callable[[Formula], dict[str, bool]] | None = None):
        self.runs = tuple(runs)
        self.depth = depth
        self.windows = tuple(window(r, depth) for r in self.runs)
        if max(self.windows) > MAX_WINDOW:
            raise HorizonExceeded(f"evaluation window of {max(self.windows)} positions exceeds {MAX_WINDOW}")
        self.label = label
        self.box = box
        self._arrays: dict[Formula, tuple[list[bool], ...]] = {}
        self._states: dict[Formula, dict[str, set[bool]]] = {}

    def arrays(self, f: Formula) -> tuple[list[bool], ...]:
        out = self._arrays.get(f)
        if out is None:
            out = tuple(self._compute(f, k) for k in range(len(self.runs)))
            self._arrays[f] = out
        return out

    def at(self, k: int, n: int, f: Formula) -> bool:
        run, h = self.runs[k], self.windows[k]
        return self.arrays(f)[k][fold(run, h, n)]

    def occurrences(self, f: Formula) -> dict[str, set[bool]]:
        """Every truth value ``f`` takes at each normal state."""
        out = self._states.get(f)
        if out is None:
            out = {}
            for run, h, values in zip(self.runs, self.windows, self.arrays(f)):
                for n in range(h):
                    out.setdefault(run.state(n), set()).add(values[n])
            self._states[f] = out
        return out

    def state_truth(self, f: Formula) -> dict[str, bool]:
        """State-level truth of ``f``; raises :class:`PositionDependence` on disagreement."""
        out = {}
        for state, seen in self.occurrences(f).items():
            if len(seen) > 1:
                raise PositionDependence(state, f)
            out[state] = next(iter(seen))
        return out

    def _compute(self, f: Formula, k: int) -> list[bool]:
        run, h = self.runs[k], self.windows[k]
        if isinstance(f, Atom):
            return [f.name in self.label(run.state(n)) for n in range(h)]
        if isinstance(f, Bottom):
            return [False] * h
        if isinstance(f, Implies):
            a, b = self.arrays(f.left)[k], self.arrays(f.right)[k]
            return [(not x) or y for x, y in zip(a, b)]
        if isinstance(f, Next):
            a = self.arrays(f.sub)[k]
            return [a[fold(run, h, n + 1)] for n in range(h)]
        if isinstance(f, WeakPrev):
            a = self.arrays(f.sub)[k]
            return [True] + a[: h - 1]
        if isinstance(f, Until):
            return self._until(self.arrays(f.left)[k], self.arrays(f.right)[k], run, h)
        if isinstance(f, Since):
            a, b = self.arrays(f.left)[k], self.arrays(f.right)[k]
            out = [b[0]]
            for n in range(1, h):
                out.append(b[n] or (a[n] and out[-1]))
            return out
        if isinstance(f, (JBox, OBox)):
            if self.box is None:
                raise ValueError(f"no justification semantics available for {f}")
            table = self.box(f)
            return [table[run.state(n)] for n in range(h)]
        raise TypeError(f"not a core formula: {f!r}")

    @staticmethod
    def _until(a: list[bool], b: list[bool], run: LassoRun, h: int) -> list[bool]:
        q = run.q
        base = h - q
        out = [False] * h
        for x in range(base, h):
            value = False
            for step in range(q):
                pos = base + (x - base + step) % q
                if b[pos]:
                    value = True
                    break
                if not a[pos]:
                    break
            out[x] = value
        for n in range(base - 1, -1, -1):
            out[n] = b[n] or (a[n] and out[n + 1])
        return out


def _time_bound(f: Formula) -> int:
    """Largest ``m`` of a ``time=m`` literal in ``f``, found without unfolding it."""
    best, stack = -1, [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Time):
            best = max(best, g.m)
        stack.extend(children(g))
    return best


def _check_horizon(runs: Sequence[LassoRun], f: Formula) -> None:
    # time=m unfolds to temporal depth m + 1, so this is a lower bound on the real window
    m = _time_bound(f)
    if m >= 0:
        w = max(window(r, m + 1) for r in runs)
        if w > MAX_WINDOW:
            raise HorizonExceeded(f"evaluation window of {w} positions exceeds {MAX_WINDOW}")


def _depth_for(f: Formula) -> int:
    d = temporal_depth(f)
    return max(_DEPTH_STEP, -(-d // _DEPTH_STEP) * _DEPTH_STEP)


# ---------------------------------------------------------------- Fitting models


class FittingSemantics:
    """Truth in a Fitting-style model; ``strict`` demands position-independent box bodies."""

    def __init__(self, model: FittingModel, strict: bool = True):
        self.model = model
        self.strict = strict
        self._evaluators: dict[int, Evaluator] = {}

    def evaluator(self, depth: int) -> Evaluator:
        ev = self._evaluators.get(depth)
        if ev is None:
            ev = Evaluator(self.model.runs, depth, self.model.atoms_at, lambda f: self._box(f, depth))
            self._evaluators[depth] = ev
        return ev

    def _box(self, f: Formula, depth: int) -> dict[str, bool]:
        m = self.model
        ev = self.evaluator(depth)
        deontic = isinstance(f, OBox)
        table = m.nevidence if deontic else m.evidence
        if self.strict:
            truth = ev.state_truth(f.sub)
            good = {s for s, v in truth.items() if v}
        else:
            good = {s for s, seen in ev.occurrences(f.sub).items() if seen == {True}}
        out = {}
        for state in m.image:
            out[state] = table.contains(f.agent, state, f.term, f.sub) and m.accessible(
                f.agent, state, deontic
            ) <= good
        return out

    def holds(self, run: LassoRun | int, n: int, f: Formula) -> bool:
        _check_horizon(self.model.runs, f)
        f = desugar(f)
        k = self.model.run_index(run)
        return self.evaluator(_depth_for(f)).at(k, n, f)

    def truth_set(self, f: Formula) -> frozenset[str]:
        f = desugar(f)
        truth = self.evaluator(_depth_for(f)).state_truth(f)
        return frozenset(s for s, v in truth.items() if v)


# ---------------------------------------------------------------- neighborhood models


class NeighborhoodSemantics:
    """Truth in a neighborhood model: a box holds when its body's truth set is in the family."""

    def __init__(self, model: NeighborhoodModel):
        self.model = model
        self._evaluators: dict[int, Evaluator] = {}
        self._sets: dict[Formula, frozenset[str]] = {}
        self._by_id: dict[int, tuple[Formula, frozenset[str]]] = {}
        self._nonnormal = tuple(s for s in model.states if s not in model.image)

    def evaluator(self, depth: int) -> Evaluator:
        ev = self._evaluators.get(depth)
        if ev is None:
            ev = Evaluator(self.model.runs, depth, self.model.atoms_at, lambda f: self._box(f))
            self._evaluators[depth] = ev
        return ev

    def truth_set(self, f: Formula) -> frozenset[str]:
        hit = self._by_id.get(id(f))
        if hit is not None and hit[0] is f:
            return hit[1]
        raw, f = f, desugar(f)
        out = self._sets.get(f)
        if out is None:
            truth = self.evaluator(_depth_for(f)).state_truth(f)
            normal = {s for s, v in truth.items() if v}
            extra = {s for s in self._nonnormal if self.model.nonnormal_holds(s, f)}
            out = frozenset(normal | extra)
            self._sets[f] = out
        # keeping raw alive pins its id
        self._by_id[id(raw)] = (raw, out)
        return out

    def family(self, f: Formula, state: str) -> frozenset[frozenset[str]]:
        table = self.model.oneighborhoods if isinstance(f, OBox) else self.model.neighborhoods
        return table.family(f.agent, state, f.term)

    def _box(self, f: Formula) -> dict[str, bool]:
        body = self.truth_set(f.sub)
        return {state: body in self.family(f, state) for state in self.model.image}

    def holds(self, run: LassoRun | int, n: int, f: Formula) -> bool:
        _check_horizon(self.model.runs, f)
        f = desugar(f)
        k = self.model.run_index(run)
        return self.evaluator(_depth_for(f)).at(k, n, f)

    def holds_at_state(self, state: str, f: Formula) -> bool:
        return state in self.truth_set(f)


def semantics_for(model: FittingModel | NeighborhoodModel, strict: bool = True):
    """The (cached) semantics object of ``model``."""
    key = ("semantics", strict)
    sem = model._cache.get(key)
    if sem is None:
        sem = FittingSemantics(model, strict) if isinstance(model, FittingModel) else NeighborhoodSemantics(model)
        model._cache[key] = sem
    return sem


def mc_fitting(m: FittingModel, run: LassoRun | int, n: int, f: Formula, strict: bool = True) -> bool:
    """Is ``f`` true at position ``n`` of ``run`` in the Fitting-style model ``m``?"""
    return semantics_for(m, strict).holds(run, n, f)


def mc_neighborhood(m: NeighborhoodModel, run: LassoRun | int, n: int, f: Formula) -> bool:
    """Is ``f`` true at position ``n`` of ``run`` in the neighborhood model ``m``?"""
    return semantics_for(m).holds(run, n, f)


def model_check(m: FittingModel | NeighborhoodModel, run: LassoRun | int, n: int, f: Formula) -> bool:
    if isinstance(m, FittingModel):
        return mc_fitting(m, run, n, f)
    return mc_neighborhood(m, run, n, f)


def truth_set(m: FittingModel | NeighborhoodModel, f: Formula) -> frozenset[str]:
    """States where ``f`` holds; non-normal states of a neighborhood model answer by valuation membership."""
    return semantics_for(m).truth_set(f)


def failures(m: FittingModel | NeighborhoodModel, f: Formula) -> list[tuple[int, int]]:
    """Every (run index, position) inside the evaluation window where ``f`` is false."""
    f = desugar(f)
    ev = semantics_for(m).evaluator(_depth_for(f))
    return [(k, n) for k, values in enumerate(ev.arrays(f)) for n, v in enumerate(values) if not v]


def points(m: FittingModel | NeighborhoodModel, depth: int = 0) -> list[tuple[int, int]]:
    """Every (run index, position) inside the evaluation window for formulas of temporal depth ``depth``."""
    return [(k, n) for k, r in enumerate(m.runs) for n in range(window(r, depth))]


def evaluate_word(stem: Sequence[frozenset[str]], loop: Sequence[frozenset[str]], f: Formula) -> Callable[[int], bool]:
    """Truth of a justification-free formula along a lasso word of atom sets."""
    labels = list(stem) + list(loop)
    run = LassoRun(tuple(str(k) for k in range(len(stem))), tuple(str(len(stem) + k) for k in range(len(loop))))
    f = desugar(f)
    ev = Evaluator((run,), _depth_for(f), lambda s: labels[int(s)])
    return lambda n: ev.at(0, n, f)
