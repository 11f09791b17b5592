"""The 23 axiom schemas, syntactic instance matching and the tautology oracle."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import TooManyAtoms
from .syntax import (
    BOT,
    Always,
    And,
    Bang,
    Bottom,
    Dagger,
    Eventually,
    Formula,
    Iff,
    Implies,
    JBox,
    Modal,
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
    Until,
    WeakPrev,
    children,
    desugar,
)

MAX_TAUT_ATOMS = 20


@dataclass(frozen=True, eq=False)
class FMeta(Formula):
    """Schematic formula variable."""

    name: str


@dataclass(frozen=True, eq=False)
class TMeta(Term):
    """Schematic term variable."""

    name: str


PHI, PSI = FMeta("phi"), FMeta("psi")
T, S = TMeta("t"), TMeta("s")
AG = "?i"


def _schemas() -> dict[str, tuple[Formula, ...]]:
    def box(t, f):
        return JBox(AG, t, f)

    def obl(t, f):
        return OBox(AG, t, f)

    return {
        "NextK": (Implies(Next(Implies(PHI, PSI)), Implies(Next(PHI), Next(PSI))),),
        "AlwaysK": (Implies(Always(Implies(PHI, PSI)), Implies(Always(PHI), Always(PSI))),),
        "Fun": (Iff(Next(Not(PHI)), Not(Next(PHI))),),
        "Ind": (Implies(Always(Implies(PHI, Next(PHI))), Implies(PHI, Always(PHI))),),
        "Until1": (Implies(Until(PHI, PSI), Eventually(PSI)),),
        "Until2": (Iff(Until(PHI, PSI), Or(PSI, And(PHI, Next(Until(PHI, PSI))))),),
        "SofarK": (Implies(Sofar(Implies(PHI, PSI)), Implies(Sofar(PHI), Sofar(PSI))),),
        "WPrevK": (Implies(WeakPrev(Implies(PHI, PSI)), Implies(WeakPrev(PHI), WeakPrev(PSI))),),
        "SW": (Implies(StrongPrev(PHI), WeakPrev(PHI)),),
        "Initial": (Once(WeakPrev(BOT)),),
        "SofarInd": (Implies(Sofar(Implies(PHI, WeakPrev(PHI))), Implies(PHI, Sofar(PHI))),),
        "Since1": (Implies(Since(PHI, PSI), Once(PSI)),),
        "Since2": (Iff(Since(PHI, PSI), Or(PSI, And(PHI, StrongPrev(Since(PHI, PSI))))),),
        "FP": (Implies(PHI, Next(StrongPrev(PHI))),),
        "PF": (Implies(PHI, WeakPrev(Next(PHI))),),
        "Application": (Implies(box(T, Implies(PHI, PSI)), Implies(box(S, PHI), box(Prod(T, S), PSI))),),
        "Sum": (
            Implies(box(T, PHI), box(Sum(T, S), PHI)),
            Implies(box(S, PHI), box(Sum(T, S), PHI)),
        ),
        "Factivity": (Implies(box(T, PHI), PHI),),
        "PositiveIntrospection": (Implies(box(T, PHI), box(Bang(T), box(T, PHI))),),
        "ApplicationO": (Implies(obl(T, Implies(PHI, PSI)), Implies(obl(S, PHI), obl(Prod(T, S), PSI))),),
        "NoConflicts": (Implies(obl(T, PHI), OPermit(AG, T, PHI)),),
        "ObligatedFactivity": (obl(Dagger(T), Implies(obl(T, PHI), PHI)),),
    }


RAW_SCHEMAS: dict[str, tuple[Formula, ...]] = _schemas()
SCHEMAS: dict[str, tuple[Formula, ...]] = {name: tuple(desugar(p) for p in ps) for name, ps in RAW_SCHEMAS.items()}
AXIOM_NAMES: tuple[str, ...] = ("Taut",) + tuple(SCHEMAS)


# ---------------------------------------------------------------- matching


def _match_term(pattern: Term, target: Term, env: dict) -> bool:
    if isinstance(pattern, TMeta):
        bound = env.get(pattern)
        if bound is None:
            env[pattern] = target
            return True
        return bound == target
    if type(pattern) is not type(target):
        return False
    if isinstance(pattern, (Bang, Dagger)):
        return _match_term(pattern.sub, target.sub, env)
    if isinstance(pattern, (Sum, Prod)):
        return _match_term(pattern.left, target.left, env) and _match_term(pattern.right, target.right, env)
    return pattern == target


def match(pattern: Formula, target: Formula, env: dict | None = None) -> dict | None:
    """First-order syntactic matching of a schema against a core formula; returns the binding or None."""
    env = {} if env is None else env
    return env if _match(pattern, target, env) else None


def _match(pattern: Formula, target: Formula, env: dict) -> bool:
    if isinstance(pattern, FMeta):
        bound = env.get(pattern)
        if bound is None:
            env[pattern] = target
            return True
        return bound == target
    if type(pattern) is not type(target):
        return False
    if isinstance(pattern, (JBox, OBox)):
        if pattern.agent == AG:
            if env.setdefault(AG, target.agent) != target.agent:
                return False
        elif pattern.agent != target.agent:
            return False
        if not _match_term(pattern.term, target.term, env):
            return False
    pk, tk = children(pattern), children(target)
    if not pk:
        return pattern == target
    return all(_match(p, t, env) for p, t in zip(pk, tk))


@lru_cache(maxsize=4096)
def match_axiom(f: Formula) -> frozenset[str]:
    """Names of every schema of which ``f`` is an instance (Taut decided by :func:`taut_check`)."""
    f = desugar(f)
    names = {name for name, patterns in SCHEMAS.items() if any(match(p, f) is not None for p in patterns)}
    try:
        if taut_check(f):
            names.add("Taut")
    except TooManyAtoms:
        pass
    return frozenset(names)


def instantiate(name: str, variant: int = 0, core: bool = False, **binding) -> Formula:
    """Build an instance of schema ``name``; keyword names are phi, psi, t, s, agent.

    With ``core=False`` the abbreviations of the schema are kept, which keeps
    proof scripts readable; the kernel compares desugared forms anyway.
    """
    env: dict = {}
    for key, value in binding.items():
        if key == "agent":
            env[AG] = value
        elif key in ("t", "s"):
            env[TMeta(key)] = value
        else:
            env[FMeta(key)] = desugar(value) if core else value
    table = SCHEMAS if core else RAW_SCHEMAS
    return _substitute(table[name][variant], env)


def _substitute_term(t: Term, env: dict) -> Term:
    if isinstance(t, TMeta):
        return env[t]
    if isinstance(t, (Bang, Dagger)):
        return type(t)(_substitute_term(t.sub, env))
    if isinstance(t, (Sum, Prod)):
        return type(t)(_substitute_term(t.left, env), _substitute_term(t.right, env))
    return t


def _substitute(f: Formula, env: dict) -> Formula:
    if isinstance(f, FMeta):
        return env[f]
    if isinstance(f, Modal):
        agent = env[AG] if f.agent == AG else f.agent
        return type(f)(agent, _substitute_term(f.term, env), _substitute(f.sub, env))
    kids = children(f)
    if not kids:
        return f
    return type(f)(*(_substitute(k, env) for k in kids))


# ---------------------------------------------------------------- tautologies


def propositional_skeleton(f: Formula, atoms: dict[Formula, int]) -> tuple:
    """Replace maximal subformulas not rooted in ⊥ or → by indexed atoms (shared when identical)."""
    if isinstance(f, Bottom):
        return ("bot",)
    if isinstance(f, Implies):
        return ("imp", propositional_skeleton(f.left, atoms), propositional_skeleton(f.right, atoms))
    if f not in atoms:
        atoms[f] = len(atoms)
        if len(atoms) > MAX_TAUT_ATOMS:
            raise TooManyAtoms(f"more than {MAX_TAUT_ATOMS} abstracted atoms; split the step")
    return ("atom", atoms[f])


def _columns(k: int) -> tuple[int, list[int]]:
    rows = 1 << k
    full = (1 << rows) - 1
    cols = []
    for j in range(k):
        width = 1 << j
        mask = ((1 << width) - 1) << width
        span = width * 2
        while span < rows:
            mask |= mask << span
            span *= 2
        cols.append(mask & full)
    return full, cols


def _evaluate(node: tuple, cols: list[int], full: int) -> int:
    if node[0] == "bot":
        return 0
    if node[0] == "atom":
        return cols[node[1]]
    return (~_evaluate(node[1], cols, full) | _evaluate(node[2], cols, full)) & full


@lru_cache(maxsize=8192)
def taut_check(f: Formula) -> bool:
    """Decide whether the propositional abstraction of ``f`` is a tautology (all valuations, bit-parallel)."""
    atoms: dict[Formula, int] = {}
    skeleton = propositional_skeleton(desugar(f), atoms)
    full, cols = _columns(len(atoms))
    return _evaluate(skeleton, cols, full) == full


def chain(premises: list[Formula] | tuple[Formula, ...], goal: Formula) -> Formula:
    """``p1 → (p2 → … → goal)``."""
    out = goal
    for p in reversed(premises):
        out = Implies(p, out)
    return out
