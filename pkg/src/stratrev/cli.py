"""Command-line front end.

Exit codes: 0 success / true verdict, 1 input error, 2 false verdict,
3 enumeration or oracle limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .engine import METHODS, RevisionOutcome, revise
from .kb import conflicts, load_base, load_kb
from .lex import DEFAULT_MAX_FORMULAS, lex_entails
from .logic import (
    DEFAULT_ATOM_CAP, ResourceLimitError, atom_cap, equivalent, form,
    parse_formula,
)

ENV_ATOM_CAP = "STRATREV_ATOM_CAP"

EXIT_OK, EXIT_INPUT, EXIT_FALSE, EXIT_RESOURCE = 0, 1, 2, 3


def _sorted_texts(formulas) -> list[str]:
    return sorted(str(f) for f in formulas)


def _model_lists(ms) -> list[list[str]]:
    # iteration order of a ModelSet is by bit-vector value
    return [sorted(w.true_atoms()) for w in ms]


def _default_cap() -> int:
    raw = os.environ.get(ENV_ATOM_CAP)
    if not raw:
        return DEFAULT_ATOM_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_ATOM_CAP} must be an integer, got {raw!r}") from None


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _trace_records(outcome: RevisionOutcome) -> list[dict]:
    records = []
    for step in outcome.trace:
        rec = {"stratum": step.stratum, "action": step.action, "k": step.k}
        if step.kernel is not None:
            rec["kernel"] = _sorted_texts(step.kernel)
        records.append(rec)
    return records


def render_outcome(outcome: RevisionOutcome, output: str, as_json: bool,
                   explain: bool) -> str:
    """Deterministic text or JSON rendering of a revision outcome."""
    if output == "models":
        payload = {"models": _model_lists(outcome.models())}
    elif outcome.base is not None:
        payload = {"base": _sorted_texts(outcome.base)}
    else:
        payload = {"base": [str(form(outcome.model_set))]}
    if as_json:
        doc = {"method": outcome.method, **payload, "trace": _trace_records(outcome)}
        return json.dumps(doc, indent=2)
    lines = []
    if explain:
        for rec in _trace_records(outcome):
            line = f"# stratum {rec['stratum']}: {rec['action']}"
            if rec["k"] is not None:
                line += f" k={rec['k']}"
            if "kernel" in rec:
                line += " kernel={" + ", ".join(rec["kernel"]) + "}"
            lines.append(line)
    if "models" in payload:
        lines.extend("{" + ", ".join(m) + "}" for m in payload["models"])
    else:
        lines.extend(payload["base"])
    return "\n".join(lines)


def cmd_revise(args) -> int:
    kb = load_kb(args.kb)
    phi = parse_formula(args.phi)
    outcome = revise(kb, phi, args.method)
    output = args.output or ("models" if args.method == "dr" else "base")
    print(render_outcome(outcome, output, args.json, args.explain))
    return EXIT_OK


def _kernel_input(args):
    if args.base:
        base = set(load_base(args.base))
    else:
        kb = load_kb(args.kb)
        strata = kb.strata[: args.upto] if args.upto else kb.strata
        base = set().union(*strata) if strata else set()
    if args.phi:
        base.add(parse_formula(args.phi))
    return frozenset(base)


def cmd_kernel(args) -> int:
    found = conflicts(_kernel_input(args))
    ordered = sorted((_sorted_texts(c) for c in found), key=lambda c: (len(c), c))
    kern = sorted({f for c in ordered for f in c})
    if args.json:
        print(json.dumps({"consistent": not ordered, "conflicts": ordered, "kernel": kern},
                         indent=2))
    elif not ordered:
        print("consistent")
    else:
        for c in ordered:
            print("conflict: {" + ", ".join(c) + "}")
        print("kernel: {" + ", ".join(kern) + "}")
    return EXIT_OK


def cmd_lex(args) -> int:
    kb = load_kb(args.kb)
    verdict = lex_entails(kb, parse_formula(args.phi), parse_formula(args.query),
                          max_formulas=args.max_formulas)
    print("true" if verdict else "false")
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_check_equiv(args) -> int:
    verdict = equivalent(load_base(args.first), load_base(args.second))
    print("true" if verdict else "false")
    return EXIT_OK if verdict else EXIT_FALSE


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for false verdicts here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--atom-cap", type=_positive_int, default=None,
                        help=f"max atoms for model enumeration (default {DEFAULT_ATOM_CAP}, "
                             f"or ${ENV_ATOM_CAP})")

    parser = _Parser(
        prog="stratrev",
        description="Resolve conflicts in stratified propositional knowledge bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("revise", parents=[common], help="revise a stratified KB by a sure formula")
    p.add_argument("--kb", required=True, help="stratified KB file")
    p.add_argument("--phi", required=True, help="the sure formula")
    p.add_argument("--method", choices=sorted(METHODS), default="dma")
    p.add_argument("--output", choices=["base", "models"], default=None,
                   help="render a base or a model set (default: the method's native form)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--explain", action="store_true", help="print the per-stratum trace")
    p.set_defaults(func=cmd_revise)

    p = sub.add_parser("kernel", parents=[common], help="list minimal conflicts and the kernel")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--kb", help="stratified KB file (strata are unioned)")
    src.add_argument("--base", help="flat base file")
    p.add_argument("--phi", help="formula added to the input before the search")
    p.add_argument("--upto", type=_positive_int, default=None,
                   help="with --kb, only union strata 1..N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("lex", parents=[common], help="lexicographic entailment check")
    p.add_argument("--kb", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--max-formulas", type=_positive_int, default=DEFAULT_MAX_FORMULAS,
                   help="subset-enumeration guard")
    p.set_defaults(func=cmd_lex)

    p = sub.add_parser("check-equiv", parents=[common],
                       help="semantic equivalence of two formula lists")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_check_equiv)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cap = args.atom_cap or _default_cap()
        with atom_cap(cap):
            return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
