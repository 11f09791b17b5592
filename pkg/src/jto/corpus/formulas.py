"""The named formulas of the case study and of the non-validity countermodels."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..parser import FormulaFile, parse_formula_file
from ..syntax import Formula


def asset_text(name: str) -> str:
    return resources.files("jto.corpus").joinpath("assets", name).read_text(encoding="utf-8")


FORMULA_FILES = ("protagoras.jto", "countermodels.jto")


@lru_cache(maxsize=None)
def formula_file(name: str = "protagoras.jto") -> FormulaFile:
    return parse_formula_file(asset_text(name))


@lru_cache(maxsize=None)
def formulas() -> dict[str, Formula]:
    out: dict[str, Formula] = {}
    for name in FORMULA_FILES:
        out.update(formula_file(name).named())
    return out


def F(name: str) -> Formula:
    """One named case-study formula."""
    return formulas()[name]
