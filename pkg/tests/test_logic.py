import itertools

import pytest

from conftest import B, P
from stratrev.logic import (
    BOTTOM, TOP, And, FormulaSyntaxError, Implies, Interpretation, ModelSet,
    Not, Or, ResourceLimitError, Signature, UnknownAtomError, Var, atom_cap,
    count_oracle_calls, cross_disjunctions, entails, equivalent,
    evaluate, form, is_consistent, models, parse_formula, subsumes,
)

a, b, c, d, r = map(Var, "abcdr")


class TestParse:
    def test_disjunction(self):
        assert P("a | b") == Or((a, b))

    def test_negated_disjunct_sorted_first(self):
        assert P("!c | b") == Or((Not(c), b))

    def test_implication(self):
        assert P("d -> r") == Implies(d, r)

    def test_implication_is_right_associative(self):
        assert P("a -> b -> c") == Implies(a, Implies(b, c))

    def test_precedence(self):
        assert P("!a & b | c -> d") == Implies(Or((And((Not(a), b)), c)), d)

    def test_constants_and_whitespace(self):
        assert P("  true |\tfalse ") == Or((BOTTOM, TOP))

    def test_flatten_sort_dedupe(self):
        assert P("b & (a & b) & a") == And((a, b))
        assert P("(c | a) | (b | a)") == Or((a, b, c))

    def test_single_child_collapses(self):
        assert P("a | a") == a

    def test_double_negation_kept(self):
        assert P("!!a") == Not(Not(a))

    @pytest.mark.parametrize("text,pos", [("a &", 3), ("(a | b", 6), ("a $ b", 2),
                                          ("", 0), ("a b", 2), ("-> a", 0)])
    def test_syntax_error_position(self, text, pos):
        with pytest.raises(FormulaSyntaxError) as info:
            parse_formula(text)
        assert info.value.position == pos

    def test_unknown_atom_with_fixed_signature(self):
        sig = Signature(("a", "b"))
        assert parse_formula("a | b", sig) == Or((a, b))
        with pytest.raises(UnknownAtomError):
            parse_formula("a | z", sig)

    @pytest.mark.parametrize("text", ["a | b & c", "(a | b) & c", "!(a -> b)", "(a -> b) -> c",
                                      "a -> b -> c", "!!a & !(b | c)", "true & x_1"])
    def test_printing_round_trips(self, text):
        f = P(text)
        assert P(str(f)) == f


class TestSignature:
    def test_lexicographic_ids(self):
        sig = Signature(("c", "a", "b", "a"))
        assert sig.names == ("a", "b", "c")
        assert [(x.id, x.name) for x in sig.atoms] == [(0, "a"), (1, "b"), (2, "c")]

    def test_of_formulas(self):
        assert Signature.of(P("d -> r"), [P("a")]).names == ("a", "d", "r")


class TestEvaluate:
    sig = Signature(("a", "b", "c"))

    def w(self, *true):
        return Interpretation.from_true_atoms(self.sig, true)

    def test_examples(self):
        assert evaluate(P("a | b"), self.w("a")) is True
        assert evaluate(P("!a"), self.w("a")) is False
        assert evaluate(P("c & (a | b)"), self.w("b", "c")) is True

    def test_implication_semantics(self):
        f = P("a -> b")
        assert [evaluate(f, self.w(*t)) for t in [(), ("a",), ("b",), ("a", "b")]] == \
            [True, False, True, True]

    def test_atom_outside_signature(self):
        with pytest.raises(UnknownAtomError):
            evaluate(P("z"), self.w())


class TestModels:
    def test_conjunction(self):
        ms = models(B("a & b"), Signature(("a", "b")))
        assert ms.true_atom_sets() == {frozenset("ab")}

    def test_two_models_first_stratum(self):
        ms = models(B("c", "a | b"), Signature(("a", "b", "c")))
        assert ms.true_atom_sets() == {frozenset("ac"), frozenset("bc"), frozenset("abc")}

    def test_contradiction(self):
        assert not models(B("a", "!a"))

    def test_empty_base_has_all_models(self):
        assert len(models(frozenset(), Signature(("a", "b", "c")))) == 8

    def test_iteration_sorted_by_bits(self):
        bits = [w.bits for w in models(B("a | b"))]
        assert bits == sorted(bits) == [1, 2, 3]

    def test_cap_is_enforced_not_truncated(self):
        base = frozenset(Var(f"x{i}") for i in range(6))
        with atom_cap(5):
            with pytest.raises(ResourceLimitError):
                models(base)
            with pytest.raises(ResourceLimitError):
                is_consistent(base)
        assert len(models(base)) == 1

    def test_default_cap_rejects_25_atoms(self):
        with pytest.raises(ResourceLimitError):
            models(frozenset(Var(f"x{i:02d}") for i in range(25)))


class TestForm:
    def test_empty(self):
        assert form(ModelSet(Signature(("a",)), frozenset())) == BOTTOM

    def test_all_interpretations(self):
        f = form(models(frozenset(), Signature(("a",))))
        assert equivalent([f], [TOP])

    def test_two_models(self):
        f = form(models(B("c", "a | b"), Signature(("a", "b", "c"))))
        assert equivalent([f], B("(a | b) & c"))

    def test_exhaustive_two_atoms(self):
        sig = Signature(("a", "b"))
        for r in range(5):
            for members in itertools.combinations(range(4), r):
                ms = ModelSet(sig, frozenset(members))
                assert models([form(ms)], sig) == ms


class TestEntailment:
    def test_three_strata_conflict(self):
        assert not is_consistent(B("a | b", "!a", "!b"))

    def test_member_is_entailed(self):
        assert entails(B("!a", "b", "c", "d", "e"), P("b"))

    def test_three_strata_equivalence(self):
        raw = B("a | b", "c", "!a | !b", "!a | !c | b", "d", "e")
        assert equivalent(raw, B("!a", "b", "c", "d", "e"))

    def test_inconsistent_base_entails_anything(self):
        assert entails(B("a", "!a"), P("z"))

    def test_oracle_calls_are_counted(self):
        with count_oracle_calls() as counter:
            is_consistent(B("a"))
            entails(B("a"), P("a | b"))
        assert counter.calls == 2


class TestSubsumes:
    def test_subset_of_disjuncts(self):
        assert subsumes(P("a | b"), P("a | b | c"))

    def test_single_formula(self):
        assert subsumes(P("a"), P("a | b"))

    def test_not_subset(self):
        assert not subsumes(P("a | c"), P("a | b"))

    def test_implication_is_opaque(self):
        assert not subsumes(P("!d"), P("d -> r"))
        assert subsumes(P("d -> r"), P("(d -> r) | a"))


class TestCrossDisjunctions:
    def test_three_pairs(self):
        # 8 selections enumerated by hand, canonicalized and deduplicated
        got = cross_disjunctions([B("a", "b"), B("a", "c"), B("b", "c")])
        assert got == B("a | b", "a | c", "b | c", "a | b | c")

    def test_empty_family(self):
        assert cross_disjunctions([]) == {BOTTOM}

    def test_single_base(self):
        assert cross_disjunctions([B("a")]) == B("a")

    def test_family_with_empty_member(self):
        assert cross_disjunctions([B("a", "b"), frozenset()]) == frozenset()

    def test_four_facts_raw(self):
        got = cross_disjunctions([B("a", "b", "d"), B("a", "c", "d"), B("b", "c", "d")])
        assert got == B("a | b", "a | c", "b | c", "a | b | c", "d", "a | d", "b | d", "c | d",
                        "a | b | d", "a | c | d", "b | c | d")
