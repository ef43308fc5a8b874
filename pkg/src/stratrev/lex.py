"""Brute-force lexicographic inference over stratified bases.

This is a reference oracle, not a production path: :func:`delta_lex`
enumerates every subbase and is guarded by a formula-count limit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .kb import StratifiedKB, Subbase, with_sure_formula
from .logic import (
    Formula, Interpretation, ModelSet, ResourceLimitError, Signature,
    base_mask, canonical, entails, models, _check_cap, _tick,
)
from .operators import DalalPreorder

__all__ = [
    "OracleGuardError", "DEFAULT_MAX_FORMULAS", "lex_prefers", "LexModelOrder",
    "delta_lex", "lex_entails", "lex_min_models",
]

DEFAULT_MAX_FORMULAS = 16


class OracleGuardError(ResourceLimitError):
    pass


def lex_prefers(a: Subbase, b: Subbase) -> bool:
    """Strict lexicographic preference on per-stratum cardinalities."""
    if a.kb != b.kb:
        raise ValueError("subbases of different stratified bases are not comparable")
    for x, y in zip(a.sizes, b.sizes):
        if x != y:
            return x > y
    return False


def _powerset(items: Iterable[Formula]) -> list[frozenset[Formula]]:
    items = sorted(items, key=str)
    return [frozenset(c) for r in range(len(items) + 1)
            for c in itertools.combinations(items, r)]


def _consistent_subbases(kphi: StratifiedKB) -> Iterator[Subbase]:
    sig = kphi.signature
    _check_cap(len(sig))
    masks = {f: base_mask((f,), sig) for f in kphi.union()}
    # the sure formula's stratum is always taken whole
    choices = [[kphi[0]]] + [_powerset(s) for s in kphi.strata[1:]]
    for parts in itertools.product(*choices):
        _tick()
        m = -1
        for part in parts:
            for f in part:
                m &= masks[f]
        if m:
            yield Subbase(kphi, tuple(parts))


def delta_lex(kb: StratifiedKB, phi: Formula,
              max_formulas: int = DEFAULT_MAX_FORMULAS) -> frozenset[Subbase]:
    """Lexicographically maximal consistent subbases of ``kb`` topped by ``phi``."""
    kphi = with_sure_formula(kb, phi)
    n = kphi.formula_count()
    if n > max_formulas:
        raise OracleGuardError(
            f"{n} formulas exceed the lexicographic oracle's limit of {max_formulas}")
    candidates = list(_consistent_subbases(kphi))
    best = max(c.sizes for c in candidates)
    return frozenset(c for c in candidates if c.sizes == best)


def lex_entails(kb: StratifiedKB, phi: Formula, psi: Formula,
                max_formulas: int = DEFAULT_MAX_FORMULAS) -> bool:
    """True iff every lexicographically maximal subbase entails ``psi``."""
    sig = Signature.of(kb.union(), phi, psi)
    return all(entails(a.formulas(), psi, sig)
               for a in delta_lex(kb, phi, max_formulas))


@dataclass(frozen=True)
class LexModelOrder:
    """Interpretations compared stratum by stratum on their Dalal distances."""

    kb: StratifiedKB
    signature: Signature

    def __post_init__(self):
        object.__setattr__(self, "_orders",
                           tuple(DalalPreorder(s, self.signature) for s in self.kb))

    def vector(self, w: Interpretation) -> tuple[int, ...]:
        return tuple(o.distance(w) for o in self._orders)

    def less(self, w1: Interpretation, w2: Interpretation) -> bool:
        return _vector_less(self.vector(w1), self.vector(w2))

    def le(self, w1: Interpretation, w2: Interpretation) -> bool:
        return not self.less(w2, w1)


def lex_min_models(kb: StratifiedKB, phi: Formula,
                   signature: Signature | None = None) -> ModelSet:
    """Models of ``phi`` not strictly beaten by another model of ``phi``."""
    phi = canonical(phi)
    with_sure_formula(kb, phi)
    sig = signature or Signature.of(kb.union(), phi)
    order = LexModelOrder(kb, sig)
    vecs = {w.bits: order.vector(w) for w in models((phi,), sig)}
    keep = [b for b, v in vecs.items()
            if not any(_vector_less(u, v) for u in vecs.values())]
    return ModelSet(sig, frozenset(keep))


def _vector_less(u: tuple[int, ...], v: tuple[int, ...]) -> bool:
    # strictly smaller at the first stratum where the distances differ
    for x, y in zip(u, v):
        if x != y:
            return x < y
    return False
