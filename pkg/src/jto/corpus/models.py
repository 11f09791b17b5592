"""Builders for the case-study models and the three non-validity countermodels.

The timeline models have one state per instant.  Instants from 16 on look
alike, so the run is the stem ``w0 .. w15`` followed by the loop ``[w16]``.
The shipped ``.jtom`` assets are exactly :func:`dumps_model` of these builders.
"""

from __future__ import annotations

from ..models import FittingModel, NeighborhoodModel, model_from_dict

AGENTS = ["p", "e", "j"]
TIMELINE = [f"w{n}" for n in range(17)]
TIMELINE_RUN = [{"stem": TIMELINE[:16], "loop": TIMELINE[16:]}]


def _rule(family, term="*", state="*", agent="*") -> dict:
    return {"agent": agent, "state": state, "term": term, "family": family}


def i1() -> dict:
    """Justified assumptions of the first formalization hold at instant 10."""
    valuation = {s: ["pay"] for s in TIMELINE}
    valuation["w10"] = ["pay", "winfirst_e"]
    return {
        "kind": "neighborhood",
        "name": "i1",
        "agents": AGENTS,
        "states": TIMELINE,
        "runs": TIMELINE_RUN,
        "neighborhoods": [_rule(["S"])],
        "oneighborhoods": [_rule(["S"], term="a", state=["w10"]), _rule([], term="var:*"), _rule(["S"])],
        "valuation": valuation,
    }


def _fitting_timeline(name: str, agreement_states, valuation) -> dict:
    return {
        "kind": "fitting",
        "name": name,
        "agents": AGENTS,
        "states": TIMELINE,
        "runs": TIMELINE_RUN,
        "relations": {"*": "universal"},
        "orelations": {"*": "universal"},
        "evidence": [{"agent": "*", "state": "*", "term": "*", "formula": "any"}],
        "nevidence": [
            {"agent": "*", "state": agreement_states, "term": "a", "formula": "pay"},
            {"agent": "*", "state": "*", "term": "*", "formula": "schema:OF"},
        ],
        "valuation": valuation,
    }


def i1_fitting() -> dict:
    """A relational model of the first formalization at instant 10."""
    valuation = {s: ["pay"] for s in TIMELINE}
    valuation["w10"] = ["pay", "winfirst_e"]
    return _fitting_timeline("i1-fitting", ["w10"], valuation)


def i2() -> dict:
    """One state, nothing true: the refined contract holds yet Euathlus never wins."""
    return {
        "kind": "neighborhood",
        "name": "i2",
        "agents": AGENTS,
        "states": ["w"],
        "runs": [{"stem": [], "loop": ["w"]}],
        "neighborhoods": [_rule(["S"])],
        "oneighborhoods": [_rule(["S"])],
        "valuation": {},
    }


def i3() -> dict:
    """The refined assumptions at instant 10."""
    return {
        "kind": "neighborhood",
        "name": "i3",
        "agents": AGENTS,
        "states": TIMELINE,
        "runs": TIMELINE_RUN,
        "neighborhoods": [_rule(["S"])],
        "oneighborhoods": [_rule(["S"], term="a"), _rule([], term="var:*"), _rule(["S"])],
        "valuation": {s: ["pay", "winfirst_e"] for s in TIMELINE},
    }


def i3_fitting() -> dict:
    """A relational model of the refined assumptions at instant 10."""
    return _fitting_timeline("i3-fitting", "*", {s: ["pay", "winfirst_e"] for s in TIMELINE})


def i4() -> dict:
    """The refined assumptions with no payment at instant 10."""
    return {
        "kind": "neighborhood",
        "name": "i4",
        "agents": AGENTS,
        "states": TIMELINE + ["v"],
        "runs": TIMELINE_RUN,
        "neighborhoods": [_rule(["S"])],
        "oneighborhoods": [
            _rule([["v"]], term="verdict_p"),
            _rule([], term="var:*"),
            _rule([], term="const:*"),
            _rule([["v"], "S"]),
        ],
        "valuation": {s: ["win_p"] for s in TIMELINE},
        "nonnormal": {"v": {"formulas": ["pay"], "schemas": ["OF"]}},
    }


def jre() -> dict:
    """Knowledge is hyperintensional: ``[x]_1 p`` holds while ``[x]_1 (p & p)`` fails."""
    return {
        "kind": "neighborhood",
        "name": "jre",
        "agents": ["1"],
        "states": ["w", "v"],
        "runs": [{"stem": [], "loop": ["w"]}],
        "neighborhoods": [_rule([["w"]], term="var:*"), _rule([["w"]], term="const:*"), _rule([["w"], "S"])],
        "oneighborhoods": [_rule([["w"], "S"])],
        "valuation": {"w": ["p"]},
        "nonnormal": {"v": {"formulas": ["p & p"], "schemas": []}},
    }


def jre_o() -> dict:
    """The same for obligations: ``O[x]_1 p`` holds while ``O[x]_1 (p & p)`` fails."""
    return {
        "kind": "neighborhood",
        "name": "jre-o",
        "agents": ["1"],
        "states": ["w", "v"],
        "runs": [{"stem": [], "loop": ["w"]}],
        "neighborhoods": [_rule([["w"], "S"])],
        "oneighborhoods": [_rule([["w"]], term="var:*"), _rule([["w"]], term="const:*"), _rule([["w"], "S"])],
        "valuation": {"w": ["p"]},
        "nonnormal": {"v": {"formulas": ["p"], "schemas": []}},
    }


def consistency() -> dict:
    """Without deontic constants, ``O[t]_1 bot`` is satisfiable."""
    return {
        "kind": "neighborhood",
        "name": "consistency",
        "agents": ["1"],
        "states": ["w", "v"],
        "runs": [{"stem": [], "loop": ["w"]}],
        "neighborhoods": [_rule([["w"], "S"])],
        "oneighborhoods": [_rule([["v"], "S"])],
        "valuation": {},
        "nonnormal": {"v": {"formulas": ["bot"], "schemas": ["OF"]}},
    }


def strong_no_conflicts() -> dict:
    """``O[x]_1 p & O[y]_1 ~p`` is satisfiable, so strong no conflicts fails."""
    return {
        "kind": "neighborhood",
        "name": "strong-no-conflicts",
        "agents": ["1"],
        "states": ["w", "v", "u"],
        "runs": [{"stem": [], "loop": ["w"]}],
        "neighborhoods": [_rule([["w"], ["w", "v"], ["w", "u"], "S"])],
        "oneighborhoods": [
            _rule([["w", "v"]], term="x"),
            _rule([["v", "u"]], term="y"),
            _rule([], term="var:*"),
            _rule([], term="const:*"),
            _rule([["v"], ["w", "v"]]),
        ],
        "valuation": {"w": ["p"]},
        "nonnormal": {
            "v": {"formulas": ["p", "~p", "bot"], "schemas": ["OF"]},
            "u": {"formulas": ["~p"], "schemas": []},
        },
    }


BUILDERS = {
    "i1": i1,
    "i1-fitting": i1_fitting,
    "i2": i2,
    "i3": i3,
    "i3-fitting": i3_fitting,
    "i4": i4,
    "jre": jre,
    "jre-o": jre_o,
    "consistency": consistency,
    "strong-no-conflicts": strong_no_conflicts,
}


def build(name: str) -> FittingModel | NeighborhoodModel:
    return model_from_dict(BUILDERS[name]())
