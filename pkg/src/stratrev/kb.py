"""Stratified knowledge bases, conflicts, kernels and disjunctive weakening."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .logic import (
    Formula, Or, Signature, base_mask, canonical, is_consistent, parse_formula,
    _check_cap, _tick,
)

__all__ = [
    "StratifiedKB", "Subbase", "KBFormatError", "InconsistentStratumError",
    "UnsatisfiableFormulaError", "with_sure_formula", "conflicts", "kernel",
    "d_k", "parse_kb", "load_kb", "load_base", "format_kb",
]


class KBFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class InconsistentStratumError(ValueError):
    pass


class UnsatisfiableFormulaError(ValueError):
    pass


@dataclass(frozen=True)
class StratifiedKB:
    """Priority-ordered strata; ``strata[0]`` is the most reliable.

    Each stratum must be consistent on its own; their union need not be.
    """

    strata: tuple[frozenset[Formula], ...]

    def __post_init__(self):
        strata = tuple(frozenset(canonical(f) for f in s) for s in self.strata)
        object.__setattr__(self, "strata", strata)
        for i, s in enumerate(strata, 1):
            if s and not is_consistent(s):
                raise InconsistentStratumError(f"stratum {i} is inconsistent")

    @classmethod
    def from_texts(cls, *strata: Iterable[str]) -> StratifiedKB:
        return cls(tuple(frozenset(parse_formula(t) for t in s) for s in strata))

    def __len__(self) -> int:
        return len(self.strata)

    def __iter__(self) -> Iterator[frozenset[Formula]]:
        return iter(self.strata)

    def __getitem__(self, i: int) -> frozenset[Formula]:
        return self.strata[i]

    def union(self) -> frozenset[Formula]:
        return frozenset().union(*self.strata)

    @property
    def signature(self) -> Signature:
        return Signature.of(*self.strata)

    def formula_count(self) -> int:
        return sum(len(s) for s in self.strata)


def with_sure_formula(kb: StratifiedKB, phi: Formula) -> StratifiedKB:
    """``kb`` with a new top stratum holding only ``phi``."""
    phi = canonical(phi)
    if not is_consistent((phi,)):
        raise UnsatisfiableFormulaError(f"sure formula {phi} is unsatisfiable")
    return StratifiedKB(((phi,),) + kb.strata)


@dataclass(frozen=True)
class Subbase:
    """One subset per stratum of ``kb``."""

    kb: StratifiedKB
    parts: tuple[frozenset[Formula], ...]

    def __post_init__(self):
        if len(self.parts) != len(self.kb):
            raise ValueError("subbase needs exactly one part per stratum")
        for i, (part, stratum) in enumerate(zip(self.parts, self.kb.strata), 1):
            if not part <= stratum:
                raise ValueError(f"part {i} is not a subset of stratum {i}")

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def formulas(self) -> frozenset[Formula]:
        return frozenset().union(*self.parts)


def conflicts(base: Iterable[Formula]) -> frozenset[frozenset[Formula]]:
    """All minimal inconsistent subsets of ``base``.

    Candidates are visited by increasing size; supersets of conflicts already
    found are skipped, and a candidate counts only if it is inconsistent and
    each of its one-smaller subsets is consistent.
    """
    items = sorted(set(canonical(f) for f in base), key=str)
    sig = Signature.of(items)
    _check_cap(len(sig))
    masks = {f: base_mask((f,), sig) for f in items}

    def consistent(subset) -> bool:
        _tick()
        m = -1
        for f in subset:
            m &= masks[f]
            if not m:
                return False
        return True

    found: list[frozenset[Formula]] = []
    for size in range(1, len(items) + 1):
        for combo in itertools.combinations(items, size):
            cand = frozenset(combo)
            if any(c <= cand for c in found):
                continue
            if consistent(combo):
                continue
            if all(consistent(cand - {f}) for f in combo):
                found.append(cand)
    return frozenset(found)


def kernel(base: Iterable[Formula]) -> frozenset[Formula]:
    """Union of all conflicts of ``base``."""
    return frozenset().union(*conflicts(base))


def d_k(c: Iterable[Formula], k: int) -> frozenset[Formula]:
    """All disjunctions of ``k`` distinct formulas of ``c``.

    Nothing is simplified, so tautological disjunctions are included.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    items = sorted(set(canonical(f) for f in c), key=str)
    return frozenset(canonical(Or(combo)) for combo in itertools.combinations(items, k))


# --------------------------------------------------------------------------
# Text format
#
#   # comment
#   [stratum 1]
#   a | b
#   [stratum 2]
#   !a

_HEADER = re.compile(r"^\[\s*stratum\s+(\d+)\s*\]$", re.IGNORECASE)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_kb(text: str) -> StratifiedKB:
    """Parse the stratified KB text format.

    Stratum numbers must increase strictly from 1; skipped numbers denote
    empty strata.
    """
    strata: list[set[Formula]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            n = int(m.group(1))
            if n <= len(strata):
                raise KBFormatError(
                    f"stratum {n} out of order (expected > {len(strata)})", lineno)
            strata.extend(set() for _ in range(n - len(strata)))
            continue
        if not strata:
            raise KBFormatError("formula before the first [stratum N] header", lineno)
        try:
            strata[-1].add(parse_formula(line))
        except ValueError as exc:
            raise KBFormatError(str(exc), lineno) from exc
    return StratifiedKB(tuple(frozenset(s) for s in strata))


def load_kb(path: str | Path) -> StratifiedKB:
    return parse_kb(Path(path).read_text())


def load_base(path: str | Path) -> frozenset[Formula]:
    """Read a flat base: one formula per line, ``#`` comments allowed."""
    out = set()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = _strip(raw)
        if line:
            try:
                out.add(parse_formula(line))
            except ValueError as exc:
                raise KBFormatError(str(exc), lineno) from exc
    return frozenset(out)


def format_kb(kb: StratifiedKB | Sequence[Iterable[Formula]]) -> str:
    strata = kb.strata if isinstance(kb, StratifiedKB) else kb
    lines = []
    for i, s in enumerate(strata, 1):
        lines.append(f"[stratum {i}]")
        lines.extend(sorted(map(str, s)))
    return "\n".join(lines) + "\n"
