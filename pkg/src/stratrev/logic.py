"""Propositional formulas, parsing, interpretations and truth-table reasoning.

Formulas are immutable dataclass trees.  Every public constructor path
(:func:`parse_formula`, the ``&``/``|``/``~`` operators, :func:`canonical`)
yields the canonical form: nested conjunctions and disjunctions are
flattened, their children sorted by printed text and deduplicated.  Two
formulas are "the same formula" exactly when their canonical forms are equal,
which is what gives bases their set semantics.

Reasoning is exact model enumeration.  A formula's models over a signature of
``n`` atoms are packed into one Python integer of ``2**n`` bits (bit ``j`` is
set iff interpretation ``j`` satisfies it), so consistency of a base is a
bitwise AND.  Enumeration is refused beyond a configurable atom cap.
"""

from __future__ import annotations

import contextlib
import contextvars
import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

__all__ = [
    "Formula", "Top", "Bottom", "Var", "Not", "And", "Or", "Implies",
    "TOP", "BOTTOM",
    "Atom", "Signature", "Interpretation", "ModelSet", "Base",
    "FormulaSyntaxError", "UnknownAtomError", "ResourceLimitError",
    "SignatureMismatchError",
    "DEFAULT_ATOM_CAP", "atom_cap", "get_atom_cap", "count_oracle_calls",
    "parse_formula", "parse_base", "canonical", "atoms", "conjoin",
    "conjuncts", "disjuncts", "evaluate", "models", "form",
    "is_consistent", "is_valid", "entails", "equivalent", "subsumes",
    "cross_disjunctions",
]

DEFAULT_ATOM_CAP = 24


class FormulaSyntaxError(ValueError):
    """Raised when formula text does not match the grammar."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class UnknownAtomError(ValueError):
    pass


class SignatureMismatchError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """Raised instead of truncating when an enumeration would exceed its cap."""


# --------------------------------------------------------------------------
# Formula AST


class Formula:
    """Base class of the formula AST nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return _render(self)

    def __and__(self, other: Formula) -> Formula:
        return canonical(And((self, other)))

    def __or__(self, other: Formula) -> Formula:
        return canonical(Or((self, other)))

    def __invert__(self) -> Formula:
        return Not(self)

    def implies(self, other: Formula) -> Formula:
        return Implies(self, other)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "TOP"


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "BOTTOM"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    args: tuple[Formula, ...]

    def __repr__(self):
        return f"And({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    args: tuple[Formula, ...]

    def __repr__(self):
        return f"Or({', '.join(map(repr, self.args))})"


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Implies({self.left!r}, {self.right!r})"


# A base is a finite set of canonical formulas, read as their conjunction.
Base = frozenset


# binding strength used by the printer; higher binds tighter
_PREC = {Implies: 1, Or: 2, And: 3, Not: 4}


def _render(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        inner = _render(f.arg)
        return "!" + (f"({inner})" if type(f.arg) in (And, Or, Implies) else inner)
    if isinstance(f, (And, Or)):
        if not f.args:
            return "true" if isinstance(f, And) else "false"
        op = " & " if isinstance(f, And) else " | "
        mine = _PREC[type(f)]
        parts = []
        for a in f.args:
            s = _render(a)
            # same-type children only occur in raw (non-canonical) trees
            if _PREC.get(type(a), 5) <= mine:
                s = f"({s})"
            parts.append(s)
        return op.join(parts)
    if isinstance(f, Implies):
        left = _render(f.left)
        if isinstance(f.left, Implies):
            left = f"({left})"
        return f"{left} -> {_render(f.right)}"
    raise TypeError(f"not a formula: {f!r}")


def canonical(f: Formula) -> Formula:
    """Flatten, sort and deduplicate every And/Or in ``f``.

    Empty conjunctions become ``true``, empty disjunctions ``false``, and
    single-child ones collapse to the child.  Nothing else is simplified:
    double negations, constants inside connectives and tautologies stay.
    """
    return _canonical(f)


@lru_cache(maxsize=65536)
def _canonical(f: Formula) -> Formula:
    if isinstance(f, (Top, Bottom, Var)):
        return f
    if isinstance(f, Not):
        return Not(_canonical(f.arg))
    if isinstance(f, Implies):
        return Implies(_canonical(f.left), _canonical(f.right))
    if isinstance(f, (And, Or)):
        kind = type(f)
        flat: dict[str, Formula] = {}
        for a in f.args:
            a = _canonical(a)
            for c in (a.args if type(a) is kind else (a,)):
                flat.setdefault(str(c), c)
        if not flat:
            return TOP if kind is And else BOTTOM
        if len(flat) == 1:
            return next(iter(flat.values()))
        return kind(tuple(flat[k] for k in sorted(flat)))
    raise TypeError(f"not a formula: {f!r}")


def conjoin(formulas: Iterable[Formula]) -> Formula:
    return canonical(And(tuple(formulas)))


def conjuncts(f: Formula) -> tuple[Formula, ...]:
    """Top-level conjuncts of ``f`` (``f`` itself when it is not an And)."""
    return f.args if isinstance(f, And) else (f,)


def disjuncts(f: Formula) -> frozenset[Formula]:
    """Disjunct set of ``f``; a non-disjunction is a one-disjunct disjunction."""
    f = canonical(f)
    return frozenset(f.args) if isinstance(f, Or) else frozenset((f,))


@lru_cache(maxsize=65536)
def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Var):
        return frozenset((f.name,))
    if isinstance(f, Not):
        return atoms(f.arg)
    if isinstance(f, (And, Or)):
        return frozenset().union(*map(atoms, f.args))
    if isinstance(f, Implies):
        return atoms(f.left) | atoms(f.right)
    return frozenset()


def _base_atoms(formulas: Iterable[Formula]) -> frozenset[str]:
    return frozenset().union(*map(atoms, formulas))


# --------------------------------------------------------------------------
# Parsing

_TOKEN = re.compile(r"\s*(?:(->)|([!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError("unexpected character", text, bad)
        tokens.append((m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    tokens.append(("", len(text)))
    return tokens


class _Parser:
    # impl := disj ('->' impl)?  ;  disj := conj ('|' conj)*
    # conj := unary ('&' unary)* ;  unary := '!' unary | '(' impl ')' | atom

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self) -> tuple[str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str):
        raise FormulaSyntaxError(message, self.text, self.tokens[self.i][1])

    def parse(self) -> Formula:
        if self.peek() == "":
            self.fail("empty formula")
        f = self.implication()
        if self.peek() != "":
            self.fail(f"unexpected token {self.peek()!r}")
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.peek() == "&":
            self.take()
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        tok, _ = self.tokens[self.i]
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            f = self.implication()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if tok == "true":
            self.take()
            return TOP
        if tok == "false":
            self.take()
            return BOTTOM
        if tok and (tok[0].isalpha() or tok[0] == "_"):
            self.take()
            return Var(tok)
        self.fail("expected a formula" if tok else "unexpected end of input")


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text`` into a canonical formula.

    With ``sig`` given, every atom must belong to it.
    """
    f = canonical(_Parser(text).parse())
    if sig is not None:
        unknown = atoms(f) - set(sig.names)
        if unknown:
            raise UnknownAtomError(
                f"atoms {sorted(unknown)} not in signature {list(sig.names)}")
    return f


def parse_base(*texts: str) -> frozenset[Formula]:
    return frozenset(parse_formula(t) for t in texts)


# --------------------------------------------------------------------------
# Signatures, interpretations, model sets


class Atom(NamedTuple):
    id: int
    name: str


@dataclass(frozen=True)
class Signature:
    """Finite atom alphabet in lexicographic order; atom ``i`` is bit ``i``."""

    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(sorted(set(self.names)))
        object.__setattr__(self, "names", names)

    @classmethod
    def of(cls, *formulas: Formula | Iterable[Formula]) -> Signature:
        """Signature made of every atom occurring in the arguments."""
        found: set[str] = set()
        for item in formulas:
            if isinstance(item, Formula):
                found |= atoms(item)
            else:
                found |= _base_atoms(item)
        return cls(tuple(found))

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(Atom(i, n) for i, n in enumerate(self.names))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownAtomError(f"atom {name!r} not in signature") from None

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name) -> bool:
        return name in self.names

    def union(self, other: Signature) -> Signature:
        return Signature(self.names + other.names)


@dataclass(frozen=True)
class Interpretation:
    """Total truth assignment; bit ``i`` of ``bits`` is the value of atom ``i``."""

    signature: Signature
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 1 << len(self.signature):
            raise ValueError("bits out of range for signature")

    @classmethod
    def from_true_atoms(cls, sig: Signature, true_atoms: Iterable[str]) -> Interpretation:
        bits = 0
        for name in true_atoms:
            bits |= 1 << sig.index(name)
        return cls(sig, bits)

    def __getitem__(self, name: str) -> bool:
        return bool(self.bits >> self.signature.index(name) & 1)

    def __lt__(self, other: Interpretation) -> bool:
        _same_signature(self.signature, other.signature)
        return self.bits < other.bits

    def true_atoms(self) -> frozenset[str]:
        return frozenset(n for i, n in enumerate(self.signature.names) if self.bits >> i & 1)

    def __repr__(self):
        return "{" + ", ".join(sorted(self.true_atoms())) + "}"


@dataclass(frozen=True)
class ModelSet:
    """A set of interpretations over one signature, stored as bit-vectors."""

    signature: Signature
    members: frozenset[int]

    @classmethod
    def from_mask(cls, sig: Signature, mask: int) -> ModelSet:
        return cls(sig, frozenset(_bits_of(mask)))

    @classmethod
    def from_true_atom_sets(cls, sig: Signature, sets: Iterable[Iterable[str]]) -> ModelSet:
        return cls(sig, frozenset(Interpretation.from_true_atoms(sig, s).bits for s in sets))

    @property
    def mask(self) -> int:
        m = 0
        for b in self.members:
            m |= 1 << b
        return m

    def __iter__(self) -> Iterator[Interpretation]:
        return (Interpretation(self.signature, b) for b in sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    def __contains__(self, w: Interpretation) -> bool:
        return w.signature == self.signature and w.bits in self.members

    def __and__(self, other: ModelSet) -> ModelSet:
        _same_signature(self.signature, other.signature)
        return ModelSet(self.signature, self.members & other.members)

    def issubset(self, other: ModelSet) -> bool:
        _same_signature(self.signature, other.signature)
        return self.members <= other.members

    def true_atom_sets(self) -> set[frozenset[str]]:
        return {w.true_atoms() for w in self}

    def __repr__(self):
        return "ModelSet(" + ", ".join(map(repr, self)) + ")"


def _same_signature(s1: Signature, s2: Signature):
    if s1 != s2:
        raise SignatureMismatchError(f"signatures differ: {s1.names} vs {s2.names}")


def _bits_of(mask: int) -> Iterator[int]:
    j = 0
    while mask:
        if mask & 1:
            yield j
        mask >>= 1
        j += 1


# --------------------------------------------------------------------------
# Enumeration cap and oracle-call accounting

_cap: contextvars.ContextVar[int] = contextvars.ContextVar("atom_cap", default=DEFAULT_ATOM_CAP)
_calls: contextvars.ContextVar[list[int] | None] = contextvars.ContextVar("oracle_calls", default=None)


def get_atom_cap() -> int:
    return _cap.get()


@contextlib.contextmanager
def atom_cap(limit: int):
    """Temporarily set the maximum signature size for model enumeration."""
    if limit < 1:
        raise ValueError("atom cap must be positive")
    token = _cap.set(limit)
    try:
        yield limit
    finally:
        _cap.reset(token)


class OracleCounter:
    def __init__(self):
        self._cell = [0]

    @property
    def calls(self) -> int:
        return self._cell[0]


@contextlib.contextmanager
def count_oracle_calls():
    """Count satisfiability checks (consistency / entailment tests) in the block."""
    counter = OracleCounter()
    token = _calls.set(counter._cell)
    try:
        yield counter
    finally:
        _calls.reset(token)


def _tick():
    cell = _calls.get()
    if cell is not None:
        cell[0] += 1


def _check_cap(n: int):
    limit = _cap.get()
    if n > limit:
        raise ResourceLimitError(
            f"signature has {n} atoms; model enumeration is capped at {limit}")


# --------------------------------------------------------------------------
# Semantics


def evaluate(f: Formula, w: Interpretation) -> bool:
    """Classical truth value of ``f`` in ``w``."""
    if isinstance(f, Var):
        return w[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.arg, w)
    if isinstance(f, And):
        return all(evaluate(a, w) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, w) for a in f.args)
    if isinstance(f, Implies):
        return not evaluate(f.left, w) or evaluate(f.right, w)
    raise TypeError(f"not a formula: {f!r}")


@lru_cache(maxsize=256)
def _atom_pattern(i: int, n: int) -> int:
    width = 1 << i
    m = ((1 << width) - 1) << width
    period = width << 1
    total = 1 << n
    while period < total:
        m |= m << period
        period <<= 1
    return m


def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=65536)
def truth_mask(f: Formula, sig: Signature) -> int:
    """Bitmask of the interpretations over ``sig`` that satisfy ``f``."""
    n = len(sig)
    if isinstance(f, Var):
        return _atom_pattern(sig.index(f.name), n)
    if isinstance(f, Top):
        return _full(n)
    if isinstance(f, Bottom):
        return 0
    if isinstance(f, Not):
        return _full(n) ^ truth_mask(f.arg, sig)
    if isinstance(f, And):
        m = _full(n)
        for a in f.args:
            m &= truth_mask(a, sig)
        return m
    if isinstance(f, Or):
        m = 0
        for a in f.args:
            m |= truth_mask(a, sig)
        return m
    if isinstance(f, Implies):
        return (_full(n) ^ truth_mask(f.left, sig)) | truth_mask(f.right, sig)
    raise TypeError(f"not a formula: {f!r}")


def base_mask(base: Iterable[Formula], sig: Signature) -> int:
    _check_cap(len(sig))
    m = _full(len(sig))
    for f in base:
        m &= truth_mask(f, sig)
    return m


def _resolve_signature(sig: Signature | None, *parts) -> Signature:
    needed = Signature.of(*parts)
    if sig is None:
        sig = needed
    else:
        missing = set(needed.names) - set(sig.names)
        if missing:
            raise UnknownAtomError(f"atoms {sorted(missing)} not in signature")
    _check_cap(len(sig))
    return sig


def models(base: Iterable[Formula] | Formula, sig: Signature | None = None) -> ModelSet:
    """All interpretations over ``sig`` satisfying every member of ``base``.

    ``sig`` defaults to the atoms of ``base``.  An empty base has every
    interpretation as a model.
    """
    if isinstance(base, Formula):
        base = (base,)
    base = tuple(base)
    sig = _resolve_signature(sig, base)
    return ModelSet.from_mask(sig, base_mask(base, sig))


def form(ms: ModelSet) -> Formula:
    """A formula whose models over ``ms.signature`` are exactly ``ms``.

    Built as the full DNF (one conjunction of signed literals per member).
    """
    disjuncts_ = []
    for w in ms:
        lits = [Var(n) if w.bits >> i & 1 else Not(Var(n))
                for i, n in enumerate(ms.signature.names)]
        disjuncts_.append(And(tuple(lits)))
    return canonical(Or(tuple(disjuncts_)))


def is_consistent(base: Iterable[Formula], sig: Signature | None = None) -> bool:
    base = tuple(base)
    sig = _resolve_signature(sig, base)
    _tick()
    return base_mask(base, sig) != 0


def is_valid(f: Formula) -> bool:
    return not is_consistent((Not(f),))


def entails(base: Iterable[Formula], f: Formula, sig: Signature | None = None) -> bool:
    """True iff every model of ``base`` satisfies ``f``."""
    base = tuple(base)
    sig = _resolve_signature(sig, base, f)
    _tick()
    return base_mask(base, sig) & ~truth_mask(f, sig) == 0


def equivalent(b1: Iterable[Formula], b2: Iterable[Formula]) -> bool:
    """Mutual entailment of the two conjunctions, over their joint atoms."""
    b1, b2 = tuple(b1), tuple(b2)
    sig = _resolve_signature(None, b1, b2)
    _tick()
    return base_mask(b1, sig) == base_mask(b2, sig)


def subsumes(psi: Formula, phi: Formula) -> bool:
    """True iff the disjuncts of ``psi`` are a subset of those of ``phi``."""
    return disjuncts(psi) <= disjuncts(phi)


def cross_disjunctions(family: Iterable[Iterable[Formula]]) -> frozenset[Formula]:
    """All disjunctions picking one formula from each base of ``family``.

    The empty family gives ``{false}``; a family containing an empty base
    admits no selection and gives the empty set.
    """
    family = [sorted(set(b), key=str) for b in family]
    if not family:
        return frozenset((BOTTOM,))
    return frozenset(canonical(Or(choice)) for choice in itertools.product(*family))
