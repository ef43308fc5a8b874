"""Flat revision operators: Dalal, cardinality-maximizing (CM) and DMA."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

from .kb import UnsatisfiableFormulaError, d_k, kernel
from .logic import (
    Formula, Interpretation, ModelSet, Not, Signature, SignatureMismatchError,
    base_mask, canonical, conjuncts, cross_disjunctions, is_consistent,
    models, subsumes, truth_mask, _full, _resolve_signature, _tick,
)

__all__ = [
    "InconsistentBaseError", "DalalPreorder", "hamming", "dist_to_base",
    "dalal_revise", "card_max_subsets", "cm_revise", "cm_reduce",
    "dma_revise_flat", "weaken", "non_tautological",
]


class InconsistentBaseError(ValueError):
    pass


def hamming(w1: Interpretation, w2: Interpretation) -> int:
    """Number of atoms on which two interpretations disagree."""
    if w1.signature != w2.signature:
        raise SignatureMismatchError("interpretations over different signatures")
    return (w1.bits ^ w2.bits).bit_count()


@dataclass(frozen=True)
class DalalPreorder:
    """Total pre-order on interpretations by distance to the models of ``base``."""

    base: frozenset[Formula]
    signature: Signature

    def __post_init__(self):
        object.__setattr__(self, "base", frozenset(self.base))
        ms = models(self.base, self.signature)
        if not ms:
            raise InconsistentBaseError("distance to an inconsistent base is undefined")
        object.__setattr__(self, "_models", tuple(ms.members))

    def distance(self, w: Interpretation) -> int:
        if w.signature != self.signature:
            raise SignatureMismatchError("interpretation over a different signature")
        return min((w.bits ^ m).bit_count() for m in self._models)

    def le(self, w1: Interpretation, w2: Interpretation) -> bool:
        return self.distance(w1) <= self.distance(w2)

    def minimal(self, ms: ModelSet) -> ModelSet:
        if not ms:
            return ms
        dist = {w.bits: self.distance(w) for w in ms}
        best = min(dist.values())
        return ModelSet(ms.signature, frozenset(b for b, d in dist.items() if d == best))


def dist_to_base(base: Iterable[Formula], w: Interpretation) -> int:
    return DalalPreorder(frozenset(base), w.signature).distance(w)


def dalal_revise(base: Iterable[Formula], mu: Formula,
                 signature: Signature | None = None) -> ModelSet:
    """Models of ``mu`` at minimal Hamming distance from the models of ``base``."""
    base = frozenset(base)
    sig = _resolve_signature(signature, base, mu)
    mu_models = models((mu,), sig)
    if not mu_models:
        raise UnsatisfiableFormulaError(f"{mu} is unsatisfiable")
    _tick()
    return DalalPreorder(base, sig).minimal(mu_models)


def card_max_subsets(base: Iterable[Formula], phi: Formula) -> frozenset[frozenset[Formula]]:
    """Largest subsets of ``base`` that do not entail ``phi``.

    Empty when even the empty set entails ``phi``.
    """
    items = sorted(set(canonical(f) for f in base), key=str)
    sig = _resolve_signature(None, items, phi)
    masks = {f: base_mask((f,), sig) for f in items}
    counter = _full(len(sig)) & ~truth_mask(phi, sig)
    for size in range(len(items), -1, -1):
        found = []
        for combo in itertools.combinations(items, size):
            _tick()
            m = counter
            for f in combo:
                m &= masks[f]
            if m:
                found.append(frozenset(combo))
        if found:
            return frozenset(found)
    return frozenset()


def _require_satisfiable(phi: Formula):
    if not is_consistent((phi,)):
        raise UnsatisfiableFormulaError(f"{phi} is unsatisfiable")


def cm_revise(base: Iterable[Formula], phi: Formula) -> frozenset[Formula]:
    """Cross-disjunctions of the cardinality-maximal subsets, plus ``phi``."""
    _require_satisfiable(phi)
    family = card_max_subsets(base, Not(phi))
    return cross_disjunctions(family) | {phi}


def cm_reduce(base: Iterable[Formula], phi: Formula) -> frozenset[Formula]:
    """Subsumption-reduced form of :func:`cm_revise` (equivalent to it).

    Formulas shared by every maximal subset are kept as they are; only the
    remainders are cross-disjoined, and a disjunction is dropped when another
    one uses a strict subset of its disjuncts.
    """
    _require_satisfiable(phi)
    family = card_max_subsets(base, Not(phi))
    common = frozenset.intersection(*family)
    cross = cross_disjunctions(a - common for a in family)
    survivors = {d for d in non_tautological(cross)
                 if not any(e != d and subsumes(e, d) for e in cross)}
    return frozenset(survivors) | common | {phi}


def _is_tautology(f: Formula) -> bool:
    sig = Signature.of(f)
    return truth_mask(f, sig) == _full(len(sig))


def non_tautological(formulas: Iterable[Formula]) -> frozenset[Formula]:
    # decided on each formula's own atoms; not counted as an oracle call
    return frozenset(f for f in formulas if not _is_tautology(f))


def weaken(conflicting: Iterable[Formula], context: Iterable[Formula],
           start: int = 2) -> tuple[frozenset[Formula], int | None]:
    """Least-``k`` weakening of ``conflicting`` that is consistent with ``context``.

    Tries ``d_k`` for ``k = start .. |conflicting|`` and returns the
    non-tautological part of the first consistent one with its ``k``, or
    ``(∅, None)`` when none is consistent.
    """
    conflicting = frozenset(conflicting)
    context = tuple(context)
    for k in range(start, len(conflicting) + 1):
        weakened = non_tautological(d_k(conflicting, k))
        if is_consistent(context + tuple(weakened)):
            return weakened, k
    return frozenset(), None


def dma_step(base: frozenset[Formula], kb: Iterable[Formula]):
    """One DMA adjustment of ``base`` against the accumulated formulas ``kb``.

    Returns ``(kept, conflicting, k)``: the formulas to add to ``kb`` (free
    formulas plus the chosen weakening), the part of ``base`` in the kernel,
    and the ``k`` used (None when nothing could be kept from the kernel).
    """
    kb = frozenset(kb)
    conflicting = kernel(kb | base) & base
    free = base - conflicting
    # d_1 of a nonempty kernel part is the inconsistent part itself
    weakened, k = weaken(conflicting, tuple(kb | free))
    return free | weakened, conflicting, k


def dma_revise_flat(base: Iterable[Formula], phi: Formula) -> frozenset[Formula]:
    """DMA revision of a flat base by ``phi``.

    A conjunction ``phi`` stands for the accumulated formulas of a
    stratified run, so its top-level conjuncts enter the kernel computation
    as separate members; the result still contains ``phi`` itself.
    """
    _require_satisfiable(phi)
    base = frozenset(canonical(f) for f in base)
    kept, _, _ = dma_step(base, conjuncts(phi))
    return kept | {phi}
