"""Stratum-by-stratum conflict resolution.

Every algorithm here starts from the sure formula ``phi`` and walks the
strata from most to least reliable.  A stratum consistent with what has been
accepted so far is merged whole; otherwise it is adjusted, and how that
happens is what distinguishes the methods:

* :func:`dma`: keep the stratum's formulas outside the kernel and add the
  least-size disjunctions of the kernel part that stay consistent.
* :func:`whole_dma`: same weakening, applied to the whole stratum, with no
  kernel computation.
* :func:`revise_model_based` / :func:`revise_formula_based`: revise the
  stratum by what has been accepted, using a pluggable revision operator.
  :func:`dr` and :func:`cmr` plug in Dalal and CM revision.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from typing import Callable

from .kb import StratifiedKB, with_sure_formula
from .logic import (
    And, Formula, ModelSet, Not, Signature, Var, canonical, conjoin,
    entails, form, is_consistent, models,
)
from .operators import cm_reduce, cm_revise, dalal_revise, dma_revise_flat, dma_step, weaken

__all__ = [
    "StratumStep", "RevisionOutcome", "OperatorContractError",
    "ModelRevisionOperator", "FormulaRevisionOperator",
    "MODEL_OPERATORS", "FORMULA_OPERATORS", "register_model_operator",
    "register_formula_operator", "dma", "whole_dma", "revise_model_based",
    "revise_formula_based", "dr", "cmr", "METHODS", "revise",
]

ModelRevisionOperator = Callable[..., ModelSet]
FormulaRevisionOperator = Callable[[frozenset, Formula], frozenset]

MERGED, REVISED, DROPPED = "merged", "revised", "dropped"


class OperatorContractError(ValueError):
    pass


@dataclass(frozen=True)
class StratumStep:
    stratum: int
    action: str
    k: int | None = None
    kernel: frozenset[Formula] | None = None


@dataclass(frozen=True)
class RevisionOutcome:
    """Result of a stratified revision: a base or a model set, plus its trace."""

    method: str
    signature: Signature
    trace: tuple[StratumStep, ...]
    base: frozenset[Formula] | None = None
    model_set: ModelSet | None = None

    def models(self) -> ModelSet:
        if self.model_set is not None:
            return self.model_set
        return models(self.base, self.signature)

    def formula(self) -> Formula:
        if self.base is not None:
            return conjoin(sorted(self.base, key=str))
        return form(self.model_set)

    def step(self, stratum: int) -> StratumStep:
        for s in self.trace:
            if s.stratum == stratum:
                return s
        raise KeyError(stratum)


def _prepare(kb: StratifiedKB, phi: Formula) -> tuple[Formula, Signature]:
    phi = canonical(phi)
    with_sure_formula(kb, phi)  # rejects an unsatisfiable phi
    sig = Signature.of(kb.union(), phi)
    models((), sig)  # enforces the atom cap up front
    return phi, sig


def _formula_step(i: int, kb: frozenset, new_kb: frozenset, **extra) -> StratumStep:
    return StratumStep(i, REVISED if new_kb - kb else DROPPED, **extra)


def dma(kb: StratifiedKB, phi: Formula) -> RevisionOutcome:
    """Disjunctive maxi-adjustment of ``kb`` by the sure formula ``phi``."""
    phi, sig = _prepare(kb, phi)
    acc = frozenset((phi,))
    trace = []
    for i, stratum in enumerate(kb, 1):
        if is_consistent(acc | stratum):
            acc |= stratum
            trace.append(StratumStep(i, MERGED))
            continue
        kept, conflicting, k = dma_step(stratum, acc)
        new = acc | kept
        trace.append(_formula_step(i, acc, new, k=k, kernel=conflicting))
        acc = new
    return RevisionOutcome("dma", sig, tuple(trace), base=acc)


def whole_dma(kb: StratifiedKB, phi: Formula) -> RevisionOutcome:
    """DMA variant that weakens a conflicting stratum as a whole."""
    phi, sig = _prepare(kb, phi)
    acc = frozenset((phi,))
    trace = []
    for i, stratum in enumerate(kb, 1):
        if is_consistent(acc | stratum):
            acc |= stratum
            trace.append(StratumStep(i, MERGED))
            continue
        weakened, k = weaken(stratum, acc)
        new = acc | weakened
        trace.append(_formula_step(i, acc, new, k=k))
        acc = new
    return RevisionOutcome("whole-dma", sig, tuple(trace), base=acc)


# --------------------------------------------------------------------------
# Pluggable operators

_PROBE_BASE = frozenset((Var("a"), Var("b")))
_PROBE_FORMULA = Not(Var("a"))
_validated: weakref.WeakSet = weakref.WeakSet()


def _probe_model_operator(op: ModelRevisionOperator):
    sig = Signature(("a", "b"))
    out = op(_PROBE_BASE, _PROBE_FORMULA, signature=sig)
    if not isinstance(out, ModelSet) or out.signature != sig:
        raise OperatorContractError(f"{op!r} must return a ModelSet over the given signature")
    if not out or not out.issubset(models((_PROBE_FORMULA,), sig)):
        raise OperatorContractError(
            f"{op!r} must return a nonempty subset of the revising formula's models")


def _probe_formula_operator(op: FormulaRevisionOperator):
    out = op(_PROBE_BASE, _PROBE_FORMULA)
    if not is_consistent(out) or not entails(out, _PROBE_FORMULA):
        raise OperatorContractError(
            f"{op!r} must return a consistent base entailing the revising formula")


def _ensure_validated(op, probe):
    try:
        if op in _validated:
            return
    except TypeError:
        probe(op)
        return
    probe(op)
    try:
        _validated.add(op)
    except TypeError:
        pass


MODEL_OPERATORS: dict[str, ModelRevisionOperator] = {}
FORMULA_OPERATORS: dict[str, FormulaRevisionOperator] = {}


def register_model_operator(name: str, op: ModelRevisionOperator) -> ModelRevisionOperator:
    """Probe ``op`` on a known instance and make it available under ``name``.

    Model operators are called as ``op(base, formula, signature=sig)``.
    """
    _ensure_validated(op, _probe_model_operator)
    MODEL_OPERATORS[name] = op
    return op


def register_formula_operator(name: str, op: FormulaRevisionOperator) -> FormulaRevisionOperator:
    _ensure_validated(op, _probe_formula_operator)
    FORMULA_OPERATORS[name] = op
    return op


register_model_operator("dalal", dalal_revise)
register_formula_operator("cm", cm_reduce)
register_formula_operator("cm-full", cm_revise)
register_formula_operator("dma", dma_revise_flat)


def revise_model_based(kb: StratifiedKB, phi: Formula, op: ModelRevisionOperator,
                       method: str = "model-based") -> RevisionOutcome:
    """Revision-based resolution tracked on model sets.

    A stratum whose models meet the current ones narrows them; otherwise the
    current models are replaced by those of the stratum revised by the
    formula of the current models.
    """
    _ensure_validated(op, _probe_model_operator)
    phi, sig = _prepare(kb, phi)
    current = models((phi,), sig)
    trace = []
    for i, stratum in enumerate(kb, 1):
        inter = current & models(stratum, sig)
        if inter:
            current = inter
            trace.append(StratumStep(i, MERGED))
            continue
        psi = form(current)
        revised = op(stratum, psi, signature=sig)
        if not revised or not revised.issubset(current):
            raise OperatorContractError(f"operator {op!r} broke its contract at stratum {i}")
        current = revised
        trace.append(StratumStep(i, REVISED))
    return RevisionOutcome(method, sig, tuple(trace), model_set=current)


def revise_formula_based(kb: StratifiedKB, phi: Formula, op: FormulaRevisionOperator,
                         method: str = "formula-based") -> RevisionOutcome:
    """Revision-based resolution tracked on formula sets.

    The accumulated formulas enter the operator as one conjunction; where
    that conjunction comes back in the operator's output it is replaced by
    the accumulated formulas themselves.
    """
    _ensure_validated(op, _probe_formula_operator)
    phi, sig = _prepare(kb, phi)
    acc = frozenset((phi,))
    trace = []
    for i, stratum in enumerate(kb, 1):
        if is_consistent(acc | stratum):
            acc |= stratum
            trace.append(StratumStep(i, MERGED))
            continue
        # kept un-flattened so its conjuncts are exactly the accumulated formulas
        psi = And(tuple(sorted(acc, key=str)))
        out = frozenset(op(stratum, psi))
        if not is_consistent(out) or not entails(out, psi):
            raise OperatorContractError(f"operator {op!r} broke its contract at stratum {i}")
        new = (out - {psi}) | acc if psi in out else out
        trace.append(_formula_step(i, acc, new))
        acc = new
    return RevisionOutcome(method, sig, tuple(trace), base=acc)


def dr(kb: StratifiedKB, phi: Formula) -> RevisionOutcome:
    """Model-based revision with Dalal's operator."""
    return revise_model_based(kb, phi, dalal_revise, method="dr")


def cmr(kb: StratifiedKB, phi: Formula) -> RevisionOutcome:
    """Formula-based revision with the subsumption-reduced CM operator."""
    return revise_formula_based(kb, phi, cm_reduce, method="cmr")


METHODS: dict[str, Callable[[StratifiedKB, Formula], RevisionOutcome]] = {
    "dma": dma,
    "whole-dma": whole_dma,
    "dr": dr,
    "cmr": cmr,
}


def revise(kb: StratifiedKB, phi: Formula, method: str = "dma") -> RevisionOutcome:
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(kb, phi)
