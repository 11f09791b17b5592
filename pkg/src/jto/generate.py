"""Seeded random terms, formulas, axiom instances and small Fitting models.

Everything here takes a :class:`random.Random`, so a seed reproduces the
same objects.  The generators feed the property tests and the acceptance
suite.
"""

from __future__ import annotations

import random
from typing import Sequence

from .axioms import RAW_SCHEMAS, instantiate
from .models import FittingModel, model_from_dict
from .printer import pretty, pretty_term
from .syntax import (
    BOT,
    And,
    Always,
    AlwaysBoxdot,
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
    Top,
    Until,
    Var,
    WeakPrev,
    WeakUntil,
)
from .validation import Universe

# instance shapes for the tautology schema
_TAUTOLOGIES = (
    lambda a, b, c: Implies(a, Implies(b, a)),
    lambda a, b, c: Implies(Implies(a, Implies(b, c)), Implies(Implies(a, b), Implies(a, c))),
    lambda a, b, c: Implies(Implies(Not(a), Not(b)), Implies(b, a)),
    lambda a, b, c: Or(a, Not(a)),
    lambda a, b, c: Iff(And(a, b), And(b, a)),
)


def random_term(rng: random.Random, depth: int = 2, deontic: bool = False, names: Sequence[str] = ("x", "y", "c")) -> Term:
    """A well-sorted term; ``!`` and ``+`` only outside obligations, ``#`` only inside."""
    if depth <= 0 or rng.random() < 0.4:
        name = rng.choice(names)
        return Const(name) if name.startswith("c") else Var(name)
    pick = rng.randrange(3)
    if pick == 0:
        sub = random_term(rng, depth - 1, deontic, names)
        return Dagger(sub) if deontic else Bang(sub)
    cls = Sum if pick == 1 and not deontic else Prod
    return cls(random_term(rng, depth - 1, deontic, names), random_term(rng, depth - 1, deontic, names))


_UNARY = (Not, Next, WeakPrev, StrongPrev, Eventually, Always, Once, Sofar, AlwaysBoxdot)
_BINARY = (And, Or, Implies, Iff, Until, Since, WeakUntil)


def random_formula(
    rng: random.Random,
    depth: int = 4,
    atoms: Sequence[str] = ("p", "q", "r"),
    agents: Sequence[str] = ("1", "2"),
    modal: bool = True,
    temporal: bool = True,
) -> Formula:
    """A random formula using the full surface syntax."""
    if depth <= 0 or rng.random() < 0.2:
        pick = rng.randrange(10)
        if pick == 0:
            return BOT
        if pick == 1:
            return Top()
        if pick == 2 and temporal:
            return Time(rng.randrange(4))
        return Atom(rng.choice(atoms))

    def sub() -> Formula:
        return random_formula(rng, depth - 1, atoms, agents, modal, temporal)

    kinds = ["unary", "binary"] + (["modal"] if modal and agents else [])
    kind = rng.choice(kinds)
    if kind == "unary":
        ops = _UNARY if temporal else (Not,)
        return rng.choice(ops)(sub())
    if kind == "binary":
        ops = _BINARY if temporal else _BINARY[:4]
        return rng.choice(ops)(sub(), sub())
    cls = rng.choice((JBox, OBox, JDiamond, OPermit))
    deontic = cls in (OBox, OPermit)
    return cls(rng.choice(agents), random_term(rng, 2, deontic), sub())


# ---------------------------------------------------------------- axiom instances


def random_instance(rng: random.Random, name: str, universe: Universe, agents: Sequence[str]) -> Formula:
    """An instance of schema ``name`` with formulas and terms drawn from ``universe``.

    Justification schemas take their terms and boxed formulas from the
    universe, which is where a validated model's conditions were checked.
    """
    fs = universe.sorted_formulas()
    imps = universe.implications()
    eterms, dterms = universe.epistemic_terms(), universe.deontic_terms()
    agent = rng.choice(list(agents))
    phi, psi, chi = rng.choice(fs), rng.choice(fs), rng.choice(fs)
    if name == "Taut":
        return rng.choice(_TAUTOLOGIES)(phi, psi, chi)
    if name in ("Application", "ApplicationO") and imps:
        f = rng.choice(imps)
        phi, psi = f.left, f.right
    terms = dterms if name in ("ApplicationO", "NoConflicts", "ObligatedFactivity") else eterms
    binding = {"phi": phi, "psi": psi, "agent": agent}
    if terms:
        binding["t"], binding["s"] = rng.choice(terms), rng.choice(terms)
    elif name in ("Application", "Sum", "Factivity", "PositiveIntrospection", "ApplicationO", "NoConflicts", "ObligatedFactivity"):
        raise ValueError(f"the universe has no terms for {name}")
    variant = rng.randrange(len(RAW_SCHEMAS[name]))
    return instantiate(name, variant, **binding)


# ---------------------------------------------------------------- models


def _preorder(rng: random.Random, states: list[str]) -> list[list[str]]:
    rel = {(s, s) for s in states} | {(a, b) for a in states for b in states if rng.random() < 0.3}
    changed = True
    while changed:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        rel |= extra
        changed = bool(extra)
    return [list(p) for p in sorted(rel)]


def _shift_reflexive(rng: random.Random, states: list[str]) -> list[list[str]]:
    rel = {(a, b) for a in states for b in states if rng.random() < 0.35}
    rel |= {(b, b) for _, b in rel}
    return [list(p) for p in sorted(rel)]


def random_fitting_model(
    rng: random.Random,
    universe: Universe,
    max_states: int = 4,
    max_runs: int = 2,
    agents: Sequence[str] = ("1",),
    atoms: Sequence[str] = ("p", "q"),
) -> FittingModel:
    """A Fitting model with random frames, evidence over ``universe`` and valuation.

    Relations are reflexive and transitive (knowledge) and shift reflexive
    (obligation); evidence is an arbitrary finite table.
    """
    states = [f"s{k}" for k in range(rng.randint(1, max_states))]
    runs = []
    for _ in range(rng.randint(1, max_runs)):
        p, q = rng.randint(0, 3), rng.randint(1, 2)
        runs.append({"stem": [rng.choice(states) for _ in range(p)], "loop": [rng.choice(states) for _ in range(q)]})
    bodies = sorted({pretty(f.sub) for f in universe.formulas if isinstance(f, (JBox, OBox))})
    terms = universe.epistemic_terms() or [Var("x")]
    dterms = universe.deontic_terms() or [Var("x")]
    evidence, nevidence = [], []
    for agent in agents:
        for s in states:
            for body in bodies:
                for t in terms:
                    if rng.random() < 0.5:
                        evidence.append({"agent": agent, "state": [s], "term": pretty_term(t), "formula": body})
                for t in dterms:
                    if rng.random() < 0.5:
                        nevidence.append({"agent": agent, "state": [s], "term": pretty_term(t), "formula": body})
    return model_from_dict(
        {
            "kind": "fitting",
            "name": f"random-{rng.randrange(10**6)}",
            "agents": list(agents),
            "states": states,
            "runs": runs,
            "relations": {a: _preorder(rng, states) for a in agents},
            "orelations": {a: _shift_reflexive(rng, states) for a in agents},
            "evidence": evidence,
            "nevidence": nevidence,
            "valuation": {s: sorted(a for a in atoms if rng.random() < 0.5) for s in states},
        }
    )


def universe_formulas(rng: random.Random, count: int = 4, atoms: Sequence[str] = ("p", "q"), agent: str = "1") -> list[Formula]:
    """Formulas whose justification bodies are free of temporal operators.

    Bodies then have the same truth value at every occurrence of a state, so
    random runs never make a box ill-defined.
    """
    out = []
    for _ in range(count):
        body = random_formula(rng, 2, atoms, (), modal=False, temporal=False)
        cls = rng.choice((JBox, OBox))
        box = cls(agent, random_term(rng, 1, cls is OBox, ("x", "y")), body)
        wrap = rng.choice((lambda f: f, Next, Eventually, lambda f: Since(Atom(atoms[0]), f), Not))
        out.append(wrap(box))
    return out
