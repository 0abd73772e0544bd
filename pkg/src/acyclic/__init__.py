"""Rewrite stratified set-theoretic formulas into acyclic equivalents.

The package is organised bottom-up:

* :mod:`acyclic.formula` - syntax trees, parser, printer, rectification
* :mod:`acyclic.analysis` - stratification, variable graphs, prenex form
* :mod:`acyclic.gadgets` / :mod:`acyclic.translate` - acyclic building blocks
  and the coding-function translation pipelines
* :mod:`acyclic.hf`, :mod:`acyclic.evaluate`, :mod:`acyclic.harness` -
  hereditarily finite models and the equivalence checker
* :mod:`acyclic.cli` - command line front end
"""

from acyclic.formula import (
    And, Eq, EqConst, Exists, Forall, Formula, Implies, Mem, Not, Or,
    ParseError, free_vars, parse, rectify, render,
)
from acyclic.analysis import (
    Acyclic, CycleWitness, PrenexForm, StratFailure, Stratification,
    check_acyclic, identity_indices, prenex, stratify, variable_graph,
)
from acyclic.hf import HFSet, Universe, closure_universe, hf_universe
from acyclic.evaluate import Evaluator, evaluate
from acyclic.harness import (
    EquivReport, build_coding_function, check_equivalence, rank_bound,
    verify_translation,
)
from acyclic.translate import (
    NotStratified, TranslationOptions, TranslationReport, translate,
    translate_nested, translate_prenex,
)

__all__ = [
    "And", "Eq", "EqConst", "Exists", "Forall", "Formula", "Implies", "Mem",
    "Not", "Or", "ParseError", "free_vars", "parse", "rectify", "render",
    "Acyclic", "CycleWitness", "PrenexForm", "StratFailure", "Stratification",
    "check_acyclic", "identity_indices", "prenex", "stratify",
    "variable_graph", "NotStratified", "TranslationOptions",
    "TranslationReport", "translate", "translate_nested", "translate_prenex",
    "HFSet", "Universe", "closure_universe", "hf_universe", "Evaluator",
    "evaluate", "EquivReport", "build_coding_function", "check_equivalence",
    "rank_bound", "verify_translation",
]
