"""A small DPLL solver with two watched literals.

Literals are nonzero integers in the DIMACS convention.  Variable order is
creation order and the first phase tried is false, which keeps results
deterministic.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Solver:
    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.empty = False

    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def add(self, clause: Iterable[int]) -> None:
        lits = []
        for lit in clause:
            if -lit in lits:
                return
            if lit not in lits:
                lits.append(lit)
        if not lits:
            self.empty = True
        elif len(lits) == 1:
            self.units.append(lits[0])
        else:
            self.clauses.append(lits)

    # ------------------------------------------------------------ search state

    def _setup(self) -> None:
        self.value = [0] * (self.nvars + 1)
        self.trail: list[int] = []
        self.watches: dict[int, list[int]] = {}
        for k, c in enumerate(self.clauses):
            self.watches.setdefault(c[0], []).append(k)
            self.watches.setdefault(c[1], []).append(k)
        self.head = 0

    def _val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _assign(self, lit: int) -> bool:
        v = self._val(lit)
        if v:
            return v > 0
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)
        return True

    def _propagate(self) -> int | None:
        """Unit propagation; returns the falsified literal on conflict."""
        while self.head < len(self.trail):
            false_lit = -self.trail[self.head]
            self.head += 1
            watching = self.watches.get(false_lit, [])
            keep = []
            for i, k in enumerate(watching):
                c = self.clauses[k]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._val(c[0]) > 0:
                    keep.append(k)
                    continue
                for j in range(2, len(c)):
                    if self._val(c[j]) >= 0:
                        c[1], c[j] = c[j], c[1]
                        self.watches.setdefault(c[1], []).append(k)
                        break
                else:
                    keep.append(k)
                    if not self._assign(c[0]):
                        keep.extend(watching[i + 1:])
                        self.watches[false_lit] = keep
                        return c[0]
            self.watches[false_lit] = keep
        return None

    def _undo(self, size: int) -> None:
        while len(self.trail) > size:
            self.value[abs(self.trail.pop())] = 0
        self.head = min(self.head, size)

    # ------------------------------------------------------------ entry points

    def _start(self, assumptions: Sequence[int]) -> int | None:
        """Assert units and assumptions; returns a conflicting literal or None."""
        self._setup()
        if self.empty:
            return 0
        for lit in list(self.units) + list(assumptions):
            if not self._assign(lit):
                return lit
        return self._propagate()

    def propagates_to_conflict(self, assumptions: Sequence[int]) -> bool:
        return self._start(assumptions) is not None

    def solve(self, assumptions: Sequence[int] = ()) -> dict[int, bool] | None:
        """A satisfying assignment (every variable) or None."""
        if self._start(assumptions) is not None:
            return None
        # each frame: (trail size before decision, decided literal, flipped already)
        frames: list[tuple[int, int, bool]] = []
        nxt = 1
        while True:
            while nxt <= self.nvars and self.value[nxt]:
                nxt += 1
            if nxt > self.nvars:
                return {v: self.value[v] > 0 for v in range(1, self.nvars + 1)}
            frames.append((len(self.trail), -nxt, False))
            self._assign(-nxt)
            while self._propagate() is not None:
                while frames and frames[-1][2]:
                    frames.pop()
                if not frames:
                    return None
                size, lit, _ = frames.pop()
                self._undo(size)
                frames.append((size, -lit, True))
                self._assign(-lit)
            nxt = 1 if not frames else min(nxt, abs(frames[-1][1]))
