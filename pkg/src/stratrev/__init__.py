"""Conflict resolution in stratified propositional knowledge bases by revision.

The main entry points are :func:`dma`, :func:`whole_dma`, :func:`dr` and
:func:`cmr`, each taking a :class:`StratifiedKB` and a sure formula.
"""

from .engine import (
    FORMULA_OPERATORS, METHODS, MODEL_OPERATORS, OperatorContractError,
    RevisionOutcome, StratumStep, cmr, dma, dr, register_formula_operator,
    register_model_operator, revise, revise_formula_based, revise_model_based,
    whole_dma,
)
from .kb import (
    InconsistentStratumError, KBFormatError, StratifiedKB, Subbase,
    UnsatisfiableFormulaError, conflicts, d_k, kernel, load_base, load_kb,
    parse_kb, with_sure_formula,
)
from .lex import OracleGuardError, delta_lex, lex_entails, lex_min_models, lex_prefers
from .logic import (
    BOTTOM, TOP, And, Bottom, Formula, FormulaSyntaxError, Implies,
    Interpretation, ModelSet, Not, Or, ResourceLimitError, Signature, Top,
    UnknownAtomError, Var, atom_cap, canonical, count_oracle_calls,
    cross_disjunctions, entails, equivalent, evaluate, form, is_consistent,
    models, parse_base, parse_formula, subsumes,
)
from .operators import (
    card_max_subsets, cm_reduce, cm_revise, dalal_revise, dist_to_base,
    dma_revise_flat, hamming,
)

__all__ = [
    "And", "atom_cap", "BOTTOM", "Bottom", "canonical", "card_max_subsets", "cm_reduce",
    "cm_revise", "cmr", "conflicts", "count_oracle_calls", "cross_disjunctions", "d_k",
    "dalal_revise", "delta_lex", "dist_to_base", "dma", "dma_revise_flat", "dr",
    "entails", "equivalent", "evaluate", "form", "Formula", "FORMULA_OPERATORS",
    "FormulaSyntaxError", "hamming", "Implies", "InconsistentStratumError",
    "Interpretation", "is_consistent", "KBFormatError", "kernel", "lex_entails",
    "lex_min_models", "lex_prefers", "load_base", "load_kb", "METHODS",
    "MODEL_OPERATORS", "models", "ModelSet", "Not", "OperatorContractError", "Or",
    "OracleGuardError", "parse_base", "parse_formula", "parse_kb",
    "register_formula_operator", "register_model_operator", "ResourceLimitError",
    "revise", "revise_formula_based", "revise_model_based", "RevisionOutcome",
    "Signature", "StratifiedKB", "StratumStep", "Subbase", "subsumes", "TOP", "Top",
    "UnknownAtomError", "UnsatisfiableFormulaError", "Var", "whole_dma",
    "with_sure_formula",
]

__version__ = "0.1.0"
