"""Finitely presented models: lasso runs, first-match evidence and neighborhood tables, ``.jtom`` files.

A ``.jtom`` file is the header line ``jtom 1`` followed by a YAML mapping::

    kind: neighborhood            # or fitting
    agents: [p, e, j]
    states: [w0, w1, v]
    runs:
      - {stem: [w0], loop: [w1]}
    neighborhoods:                # fitting models use relations/orelations/evidence/nevidence
      - {agent: "*", state: "*", term: "*", family: [S]}
    oneighborhoods:
      - {agent: e, state: [w1], term: a, family: [[w1], S]}
    valuation: {w1: [pay]}
    nonnormal: {v: {formulas: [pay], schemas: [OF]}}

Term patterns are an exact term, ``var:*``, ``const:*``, ``*`` or
``except:t1,t2``.  In a family, ``S`` is the whole state set and ``W`` the
set of states visited by some run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import yaml

from .errors import ModelFormatError, ParseError, SortError
from .kernel import EMPTY_CS, ConstantSpecification
from .parser import parse_formula, parse_term
from .syntax import Const, Formula, Implies, OBox, Term, Var, desugar

HEADER = "jtom 1"


@dataclass(frozen=True)
class LassoRun:
    """``stem`` followed by ``loop`` repeated forever."""

    stem: tuple[str, ...]
    loop: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "stem", tuple(self.stem))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ModelFormatError("a run needs a nonempty loop")

    @property
    def p(self) -> int:
        return len(self.stem)

    @property
    def q(self) -> int:
        return len(self.loop)

    def state(self, n: int) -> str:
        if n < 0:
            raise ValueError(f"negative position {n}")
        if n < self.p:
            return self.stem[n]
        return self.loop[(n - self.p) % self.q]

    def states(self) -> set[str]:
        return set(self.stem) | set(self.loop)

    def __str__(self) -> str:
        return f"stem=[{','.join(self.stem)}] loop=[{','.join(self.loop)}]"


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class TermPattern:
    kind: str  # exact | var | const | any | except
    terms: tuple[Term, ...] = ()

    def matches(self, t: Term) -> bool:
        if self.kind == "any":
            return True
        if self.kind == "var":
            return isinstance(t, Var)
        if self.kind == "const":
            return isinstance(t, Const)
        if self.kind == "exact":
            return t == self.terms[0]
        return t not in self.terms

    def __str__(self) -> str:
        if self.kind == "exact":
            return str(self.terms[0])
        if self.kind == "except":
            return "except:" + ",".join(map(str, self.terms))
        return {"any": "*", "var": "var:*", "const": "const:*"}[self.kind]


def parse_term_pattern(text: str, constants: Iterable[str] = ()) -> TermPattern:
    text = str(text).strip()
    if text == "*":
        return TermPattern("any")
    if text == "var:*":
        return TermPattern("var")
    if text == "const:*":
        return TermPattern("const")
    if text.startswith("except:"):
        names = [s for s in text[len("except:"):].split(",") if s.strip()]
        return TermPattern("except", tuple(parse_term(s, frozenset(constants)) for s in names))
    return TermPattern("exact", (parse_term(text, frozenset(constants)),))


def is_obligated_factivity(f: Formula, agent: str | None = None) -> bool:
    """Is the core formula ``f`` of the shape ``O[t]_i phi -> phi``?"""
    return (
        isinstance(f, Implies)
        and isinstance(f.left, OBox)
        and f.left.sub == f.right
        and (agent is None or f.left.agent == agent)
    )


SCHEMAS = {"OF": is_obligated_factivity}


@dataclass(frozen=True)
class FormulaPattern:
    kind: str  # exact | any | schema
    formula: Formula | None = None
    schema: str = ""
    agent: str | None = None
    source: Formula | None = None

    def matches(self, f: Formula) -> bool:
        if self.kind == "any":
            return True
        if self.kind == "exact":
            return f == self.formula
        return SCHEMAS[self.schema](f, self.agent)

    def __str__(self) -> str:
        if self.kind == "any":
            return "any"
        if self.kind == "schema":
            return f"schema:{self.schema}" + (f"({self.agent})" if self.agent else "")
        return str(self.source or self.formula)


def parse_schema(text: str) -> tuple[str, str | None]:
    name, _, rest = text.partition("(")
    if name not in SCHEMAS:
        raise ModelFormatError(f"unknown schema {name!r}; known: {', '.join(SCHEMAS)}")
    return name, (rest.rstrip(")") or None)


def parse_formula_pattern(text: str, constants: Iterable[str] = ()) -> FormulaPattern:
    text = str(text).strip()
    if text == "any":
        return FormulaPattern("any")
    if text.startswith("schema:"):
        name, agent = parse_schema(text[len("schema:"):])
        return FormulaPattern("schema", schema=name, agent=agent)
    f = parse_formula(text, frozenset(constants))
    return FormulaPattern("exact", desugar(f), source=f)


def _agent_ok(pattern: str, agent: str) -> bool:
    return pattern == "*" or pattern == agent


def _state_ok(pattern: frozenset[str] | None, state: str) -> bool:
    return pattern is None or state in pattern


# ---------------------------------------------------------------- tables


@dataclass(frozen=True)
class EvidenceRule:
    agent: str
    states: frozenset[str] | None
    term: TermPattern
    formula: FormulaPattern
    member: bool = True

    def matches(self, agent: str, state: str, t: Term, f: Formula) -> bool:
        return (
            _agent_ok(self.agent, agent)
            and _state_ok(self.states, state)
            and self.term.matches(t)
            and self.formula.matches(f)
        )


@dataclass(frozen=True)
class EvidenceTable:
    """Finite presentation of an evidence function; the first matching rule decides."""

    rules: tuple[EvidenceRule, ...] = ()

    def contains(self, agent: str, state: str, t: Term, f: Formula) -> bool:
        f = desugar(f)
        for rule in self.rules:
            if rule.matches(agent, state, t, f):
                return rule.member
        return False


@dataclass(frozen=True)
class NeighborhoodRule:
    agent: str
    states: frozenset[str] | None
    term: TermPattern
    family: frozenset[frozenset[str]]


@dataclass(frozen=True)
class NeighborhoodTable:
    """Finite presentation of a neighborhood function; default is the empty family."""

    rules: tuple[NeighborhoodRule, ...] = ()

    def family(self, agent: str, state: str, t: Term) -> frozenset[frozenset[str]]:
        for rule in self.rules:
            if _agent_ok(rule.agent, agent) and _state_ok(rule.states, state) and rule.term.matches(t):
                return rule.family
        return frozenset()


# ---------------------------------------------------------------- models


def _image(runs: Iterable[LassoRun]) -> frozenset[str]:
    out: set[str] = set()
    for r in runs:
        out |= r.states()
    return frozenset(out)


@dataclass
class _ModelBase:
    states: tuple[str, ...]
    runs: tuple[LassoRun, ...]
    agents: tuple[str, ...]
    valuation: dict[str, frozenset[str]]
    cs: ConstantSpecification = EMPTY_CS
    name: str = ""
    constants: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def image(self) -> frozenset[str]:
        """States visited by some run (the normal states)."""
        return _image(self.runs)

    def atoms_at(self, state: str) -> frozenset[str]:
        return self.valuation.get(state, frozenset())

    def run_index(self, run: "LassoRun | int") -> int:
        if isinstance(run, int):
            if not 0 <= run < len(self.runs):
                raise ValueError(f"run index {run} out of range (model has {len(self.runs)} runs)")
            return run
        return self.runs.index(run)

    def _check_states(self) -> None:
        known = set(self.states)
        if len(known) != len(self.states):
            raise ModelFormatError("duplicate state names")
        if not self.runs:
            raise ModelFormatError("a model needs at least one run")
        for r in self.runs:
            missing = r.states() - known
            if missing:
                raise ModelFormatError(f"run mentions unknown states {sorted(missing)}")


@dataclass
class FittingModel(_ModelBase):
    """States, lasso runs, accessibility relations, evidence tables and a valuation."""

    relations: dict[str, frozenset[tuple[str, str]]] = field(default_factory=dict)
    orelations: dict[str, frozenset[tuple[str, str]]] = field(default_factory=dict)
    evidence: EvidenceTable = EvidenceTable()
    nevidence: EvidenceTable = EvidenceTable()

    def __post_init__(self):
        self._check_states()

    def accessible(self, agent: str, state: str, deontic: bool = False) -> frozenset[str]:
        rel = (self.orelations if deontic else self.relations).get(agent, frozenset())
        key = ("acc", agent, state, deontic)
        out = self._cache.get(key)
        if out is None:
            image = self.image
            out = frozenset(b for a, b in rel if a == state and b in image)
            self._cache[key] = out
        return out


@dataclass
class NeighborhoodModel(_ModelBase):
    """States, lasso runs, neighborhood tables and a two-part valuation."""

    neighborhoods: NeighborhoodTable = NeighborhoodTable()
    oneighborhoods: NeighborhoodTable = NeighborhoodTable()
    nonnormal: dict[str, tuple[tuple[Formula, ...], tuple[tuple[str, str | None], ...]]] = field(default_factory=dict)

    def __post_init__(self):
        self._check_states()
        image = self.image
        overlap = set(self.nonnormal) & image
        if overlap:
            raise ModelFormatError(f"states {sorted(overlap)} are on a run but have a non-normal valuation")
        stray = set(self.valuation) - image
        if stray:
            raise ModelFormatError(f"states {sorted(stray)} are off every run but have an atom valuation")

    def nonnormal_holds(self, state: str, f: Formula) -> bool:
        """Membership of the core formula ``f`` in the valuation of a non-normal state."""
        formulas, schemas = self.nonnormal.get(state, ((), ()))
        key = ("nonnormal", state)
        core = self._cache.get(key)
        if core is None:
            core = self._cache[key] = frozenset(desugar(g) for g in formulas)
        return f in core or any(SCHEMAS[name](f, agent) for name, agent in schemas)


# ---------------------------------------------------------------- reading


def _states_pattern(value) -> frozenset[str] | None:
    if value in (None, "*"):
        return None
    if isinstance(value, str):
        return frozenset([value])
    return frozenset(map(str, value))


def _relation(value, states: tuple[str, ...]) -> frozenset[tuple[str, str]]:
    if value == "universal":
        return frozenset((a, b) for a in states for b in states)
    if value == "identity":
        return frozenset((a, a) for a in states)
    try:
        return frozenset((str(a), str(b)) for a, b in value)
    except (TypeError, ValueError):
        raise ModelFormatError(f"bad relation {value!r}") from None


def _relations(section, agents, states) -> dict[str, frozenset[tuple[str, str]]]:
    section = section or {}
    out = {}
    for agent in agents:
        value = section.get(agent, section.get("*"))
        out[agent] = _relation(value, states) if value is not None else frozenset()
    return out


def _family(value, states: tuple[str, ...], image: frozenset[str]) -> frozenset[frozenset[str]]:
    out = set()
    for item in value or []:
        if item == "S":
            out.add(frozenset(states))
        elif item == "W":
            out.add(image)
        elif isinstance(item, str):
            raise ModelFormatError(f"family member {item!r} must be S, W or a list of states")
        else:
            members = frozenset(map(str, item))
            unknown = members - set(states)
            if unknown:
                raise ModelFormatError(f"family mentions unknown states {sorted(unknown)}")
            out.add(members)
    return frozenset(out)


def _evidence(rules, constants) -> EvidenceTable:
    out = []
    for r in rules or []:
        out.append(
            EvidenceRule(
                str(r.get("agent", "*")),
                _states_pattern(r.get("state", "*")),
                parse_term_pattern(r.get("term", "*"), constants),
                parse_formula_pattern(r.get("formula", "any"), constants),
                bool(r.get("member", True)),
            )
        )
    return EvidenceTable(tuple(out))


def _neighborhoods(rules, constants, states, image) -> NeighborhoodTable:
    out = []
    for r in rules or []:
        out.append(
            NeighborhoodRule(
                str(r.get("agent", "*")),
                _states_pattern(r.get("state", "*")),
                parse_term_pattern(r.get("term", "*"), constants),
                _family(r.get("family"), states, image),
            )
        )
    return NeighborhoodTable(tuple(out))


def loads_model(text: str) -> FittingModel | NeighborhoodModel:
    """Parse ``.jtom`` text."""
    first, _, body = text.lstrip().partition("\n")
    if first.strip() != HEADER:
        raise ModelFormatError(f"expected header line {HEADER!r}")
    try:
        data = yaml.safe_load(body) or {}
    except yaml.YAMLError as err:
        raise ModelFormatError(f"bad YAML body: {err}") from None
    return model_from_dict(data)


def model_from_dict(data) -> FittingModel | NeighborhoodModel:
    """Build a model from the mapping that a ``.jtom`` body denotes."""
    if not isinstance(data, dict):
        raise ModelFormatError("model body must be a mapping")
    try:
        return _build(data)
    except (ParseError, SortError) as err:
        raise ModelFormatError(f"bad formula or term in model: {err}") from None
    except (KeyError, TypeError, AttributeError) as err:
        raise ModelFormatError(f"malformed model section: {err!r}") from None


def _build(data: dict) -> FittingModel | NeighborhoodModel:
    kind = data.get("kind")
    constants = tuple(map(str, data.get("constants") or ()))
    states = tuple(map(str, data["states"]))
    agents = tuple(map(str, data.get("agents") or ()))
    runs = tuple(LassoRun(tuple(map(str, r.get("stem") or ())), tuple(map(str, r["loop"]))) for r in data["runs"])
    image = _image(runs)
    valuation = {str(k): frozenset(map(str, v or ())) for k, v in (data.get("valuation") or {}).items()}
    cs_entries = frozenset(parse_formula(s, frozenset(constants)) for s in data.get("cs") or ())
    common = dict(
        states=states,
        runs=runs,
        agents=agents,
        valuation=valuation,
        cs=ConstantSpecification(cs_entries),
        name=str(data.get("name", "")),
        constants=constants,
    )
    if kind == "fitting":
        return FittingModel(
            **common,
            relations=_relations(data.get("relations"), agents, states),
            orelations=_relations(data.get("orelations"), agents, states),
            evidence=_evidence(data.get("evidence"), constants),
            nevidence=_evidence(data.get("nevidence"), constants),
        )
    if kind == "neighborhood":
        nonnormal = {}
        for state, spec in (data.get("nonnormal") or {}).items():
            spec = spec or {}
            formulas = tuple(parse_formula(str(s), frozenset(constants)) for s in spec.get("formulas") or ())
            schemas = tuple(parse_schema(str(s)) for s in spec.get("schemas") or ())
            nonnormal[str(state)] = (formulas, schemas)
        return NeighborhoodModel(
            **common,
            neighborhoods=_neighborhoods(data.get("neighborhoods"), constants, states, image),
            oneighborhoods=_neighborhoods(data.get("oneighborhoods"), constants, states, image),
            nonnormal=nonnormal,
        )
    raise ModelFormatError(f"kind must be 'fitting' or 'neighborhood', got {kind!r}")


def load_model(path) -> FittingModel | NeighborhoodModel:
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


# ---------------------------------------------------------------- writing


def _family_out(family: frozenset[frozenset[str]], states: tuple[str, ...], image: frozenset[str]) -> list:
    full = frozenset(states)
    order = {s: k for k, s in enumerate(states)}
    out = []
    for member in sorted(family, key=lambda m: (len(m), sorted(order[s] for s in m))):
        if member == full:
            out.append("S")
        elif member == image and len(image) > 1:
            out.append("W")
        else:
            out.append(sorted(member, key=order.__getitem__))
    return out


def _rule_common(rule) -> dict:
    out = {"agent": rule.agent}
    out["state"] = "*" if rule.states is None else sorted(rule.states)
    out["term"] = str(rule.term)
    return out


def model_to_dict(m: FittingModel | NeighborhoodModel) -> dict:
    data: dict = {"kind": "fitting" if isinstance(m, FittingModel) else "neighborhood"}
    if m.name:
        data["name"] = m.name
    data["agents"] = list(m.agents)
    if m.constants:
        data["constants"] = list(m.constants)
    data["states"] = list(m.states)
    data["runs"] = [{"stem": list(r.stem), "loop": list(r.loop)} for r in m.runs]
    if isinstance(m, FittingModel):
        for key, rel in (("relations", m.relations), ("orelations", m.orelations)):
            data[key] = {a: _relation_out(rel[a], m.states) for a in m.agents}
        for key, table in (("evidence", m.evidence), ("nevidence", m.nevidence)):
            data[key] = [
                {**_rule_common(r), "formula": str(r.formula), **({} if r.member else {"member": False})}
                for r in table.rules
            ]
    else:
        image = m.image
        for key, table in (("neighborhoods", m.neighborhoods), ("oneighborhoods", m.oneighborhoods)):
            data[key] = [{**_rule_common(r), "family": _family_out(r.family, m.states, image)} for r in table.rules]
    data["valuation"] = {s: sorted(m.valuation[s]) for s in m.states if m.valuation.get(s)}
    if isinstance(m, NeighborhoodModel) and m.nonnormal:
        data["nonnormal"] = {
            s: {
                "formulas": [str(f) for f in formulas],
                "schemas": [name + (f"({agent})" if agent else "") for name, agent in schemas],
            }
            for s, (formulas, schemas) in m.nonnormal.items()
        }
    if m.cs.entries:
        data["cs"] = sorted(str(e) for e in m.cs.entries)
    return data


def _relation_out(rel: frozenset[tuple[str, str]], states: tuple[str, ...]):
    if rel == frozenset((a, b) for a in states for b in states):
        return "universal"
    if rel == frozenset((a, a) for a in states):
        return "identity"
    order = {s: k for k, s in enumerate(states)}
    return [list(pair) for pair in sorted(rel, key=lambda p: (order[p[0]], order[p[1]]))]


def _flow(value) -> str:
    text = yaml.safe_dump(value, default_flow_style=True, width=10_000, allow_unicode=True, sort_keys=False)
    return text.removesuffix("...\n").strip()


def dumps_model(m: FittingModel | NeighborhoodModel) -> str:
    """``.jtom`` text: one line per run, rule and valuation entry."""
    out = [HEADER]
    for key, value in model_to_dict(m).items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            out.append(f"{key}:")
            out.extend(f"  - {_flow(item)}" for item in value)
        elif isinstance(value, dict) and value:
            out.append(f"{key}:")
            out.extend(f"  {_flow(k)}: {_flow(v)}" for k, v in value.items())
        else:
            out.append(f"{key}: {_flow(value)}")
    return "\n".join(out) + "\n"


def save_model(m: FittingModel | NeighborhoodModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(m))
