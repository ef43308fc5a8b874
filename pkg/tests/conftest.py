import pytest

from stratrev import StratifiedKB, parse_base, parse_formula


def P(text):
    return parse_formula(text)


def B(*texts):
    return parse_base(*texts)


def texts(formulas):
    return sorted(map(str, formulas))


THREE_STRATA = (["a | b"], ["!a", "!b", "!c | b", "d", "e"], ["!c | !d"])
IMPLICATIONS = (["a", "c", "d"], ["!a | b", "!b", "d -> r", "r -> !a"])
NEGATED_ATOMS = (["c | d | e"], ["!a", "!b", "!c", "!d", "!e"])
SINGLE_MAX = (["a | b"], ["!a", "!b", "!c | b", "d"])


@pytest.fixture
def three_strata():
    return StratifiedKB.from_texts(*THREE_STRATA), P("c")


@pytest.fixture
def implications():
    return StratifiedKB.from_texts(*IMPLICATIONS), P("c")


@pytest.fixture
def negated_atoms():
    return StratifiedKB.from_texts(*NEGATED_ATOMS), P("a | b")


@pytest.fixture
def single_max():
    return StratifiedKB.from_texts(*SINGLE_MAX), P("c")
