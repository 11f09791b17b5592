"""Reading and writing ``.jtopf`` proof-script files.

A file is a header, a hypothesis table, the goal, a ``---`` separator and the
numbered lines::

    jtopf 1
    name: protagoras
    cs: empty
    requires: court-win, contract-forward
    # free text describing the script
    hyp 1: A (winfirst_e <-> O[a]_e pay)
    hyp 2: time=10
    goal: {1, 2} |- O[a]_e pay | ~winfirst_e
    ---
    # comment attached to the next line
    1 | {2} | time=10 | Hyp

Line fields are split at the first two ``|`` from the left and the last one
from the right, so formulas may use ``|`` for disjunction.  ``cs`` is either
``empty`` or the path of a ``.jto`` file whose formulas are the constant
specification, relative to the script file.
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import ParseError
from .kernel import EMPTY_CS, ConstantSpecification, Justification, ProofLine, ProofScript, RULES
from .parser import parse_formula, parse_formula_file
from .printer import pretty
from .syntax import Formula

HEADER = "jtopf 1"
_JUSTIFICATION = re.compile(r"^([A-Za-z]+)(?:\((.*)\))?$")


def _hyp_set(text: str, table: dict[int, Formula], lineno: int) -> frozenset[Formula]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError("hypothesis set must be written {i, j, ...}", lineno, 1)
    body = text[1:-1].strip()
    out = []
    for part in body.split(",") if body else []:
        try:
            out.append(table[int(part)])
        except (ValueError, KeyError):
            raise ParseError(f"unknown hypothesis index {part.strip()!r}", lineno, 1) from None
    return frozenset(out)


def parse_justification(text: str, lineno: int = 1) -> Justification:
    m = _JUSTIFICATION.match(text.strip())
    if not m or m.group(1) not in RULES:
        raise ParseError(f"unknown justification {text.strip()!r}", lineno, 1)
    rule, args = m.group(1), [a.strip() for a in (m.group(2) or "").split(",") if a.strip()]
    name = None
    if rule in ("Axiom", "Lemma"):
        if not args:
            raise ParseError(f"{rule} needs a name", lineno, 1)
        name, args = args[0], args[1:]
    try:
        refs = tuple(int(a) for a in args)
    except ValueError:
        raise ParseError(f"line references must be numbers in {text.strip()!r}", lineno, 1) from None
    return Justification(rule, refs, name)


def loads_script(text: str) -> ProofScript:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(f"expected header line {HEADER!r}", 1, 1)
    fields: dict[str, str] = {}
    table: dict[int, Formula] = {}
    goal = None
    comments: list[str] = []
    k = 1
    while k < len(lines):
        lineno, line = k + 1, lines[k].strip()
        k += 1
        if line == "---":
            break
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno, 1)
        key, value = key.strip(), value.strip()
        if key.startswith("hyp "):
            try:
                table[int(key[4:])] = _formula(value, lineno)
            except ValueError:
                raise ParseError(f"bad hypothesis number in {key!r}", lineno, 1) from None
        elif key == "goal":
            hyps, arrow, body = value.partition("|-")
            if not arrow:
                raise ParseError("goal must be written {i, ...} |- formula", lineno, 1)
            goal = (_hyp_set(hyps, table, lineno), _formula(body, lineno), hyps)
        elif key in ("name", "cs", "requires"):
            fields[key] = value
        else:
            raise ParseError(f"unknown header field {key!r}", lineno, 1)
    else:
        raise ParseError("missing '---' before the proof lines", len(lines), 1)
    if "name" not in fields or goal is None:
        raise ParseError("header needs name and goal", 1, 1)
    indices = [int(x) for x in goal[2].strip()[1:-1].split(",") if x.strip()]
    goal_hyps = tuple(table[i] for i in indices)
    body: list[ProofLine] = []
    pending: list[str] = []
    for k in range(k, len(lines)):
        lineno, line = k + 1, lines[k].strip()
        if not line:
            continue
        if line.startswith("#"):
            pending.append(line[1:].strip())
            continue
        head = line.split("|", 2)
        if len(head) < 3 or "|" not in head[2]:
            raise ParseError("proof line must be 'n | {hyps} | formula | justification'", lineno, 1)
        formula_text, _, just = head[2].rpartition("|")
        try:
            index = int(head[0])
        except ValueError:
            raise ParseError(f"bad line number {head[0].strip()!r}", lineno, 1) from None
        body.append(
            ProofLine(
                index,
                _hyp_set(head[1], table, lineno),
                _formula(formula_text, lineno),
                parse_justification(just, lineno),
                " ".join(pending),
            )
        )
        pending = []
    requires = tuple(r.strip() for r in fields.get("requires", "").split(",") if r.strip())
    return ProofScript(fields["name"], goal_hyps, goal[1], body, fields.get("cs", "empty"), "\n".join(comments), requires)


def _formula(text: str, lineno: int) -> Formula:
    try:
        return parse_formula(text.strip())
    except ParseError as err:
        raise ParseError(str(err).split(" at line")[0], lineno, err.column, err.expected) from None


def dumps_script(s: ProofScript) -> str:
    table: list[Formula] = []
    for f in list(s.goal_hypotheses) + [h for line in s.lines for h in sorted(line.hypotheses, key=pretty)]:
        if f not in table:
            table.append(f)
    number = {f: k for k, f in enumerate(table, 1)}

    def hyps(fs) -> str:
        return "{" + ", ".join(str(i) for i in sorted(number[f] for f in fs)) + "}"

    out = [HEADER, f"name: {s.name}", f"cs: {s.cs}"]
    if s.requires:
        out.append("requires: " + ", ".join(s.requires))
    out += [f"# {c}" if c else "#" for c in s.comment.splitlines()] if s.comment else []
    out += [f"hyp {k}: {pretty(f)}" for k, f in enumerate(table, 1)]
    goal_ids = ", ".join(str(number[f]) for f in s.goal_hypotheses)
    out.append(f"goal: {{{goal_ids}}} |- {pretty(s.goal)}")
    out.append("---")
    for line in s.lines:
        if line.comment:
            out.append(f"# {line.comment}")
        out.append(f"{line.index} | {hyps(line.hypotheses)} | {pretty(line.formula)} | {line.justification}")
    return "\n".join(out) + "\n"


def load_script(path: str | Path) -> ProofScript:
    return loads_script(Path(path).read_text(encoding="utf-8"))


def save_script(s: ProofScript, path: str | Path) -> None:
    Path(path).write_text(dumps_script(s), encoding="utf-8")


def load_cs(path: str | Path) -> ConstantSpecification:
    """A constant specification from a ``.jto`` file: every formula in it is an entry."""
    return ConstantSpecification(frozenset(parse_formula_file(Path(path).read_text(encoding="utf-8")).all()))


def resolve_cs(s: ProofScript, base: Path) -> ConstantSpecification:
    """The constant specification a script names, looked up next to the script file."""
    if s.cs in ("", "empty"):
        return EMPTY_CS
    return load_cs(base / s.cs)
