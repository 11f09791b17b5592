"""Justification logic with linear time and obligations.

Modules: ``syntax``/``parser``/``printer`` for formulas, ``axioms``/``kernel``/
``proofs`` for derivations, ``models``/``semantics``/``validation`` for the two
model classes, ``search`` for bounded satisfiability, ``corpus`` for the
Protagoras and Euathlus case study and ``cli`` for the command line.
"""

__version__ = "0.1.0"
