import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import NONCONFLUENT_TEXT, Z_TEXT, all_words, normal_forms, rule_pairs
from plainrws.errors import ParseError, PreconditionError
from plainrws.rewrite_core import (
    Alphabet,
    Rule,
    StringRewritingSystem,
    check_convergent,
    check_presents_group,
    critical_pairs,
    equal_in_group,
    format_system,
    is_length_reducing,
    normalize,
    normalize_append,
    one_step_reducts,
    parse_system,
)


def test_parse_z_system(z_system):
    assert z_system.alphabet.names == ("a", "A")
    assert z_system.alphabet.inverse == (1, 0)
    assert [(r.lhs, r.rhs) for r in z_system.rules] == [((0, 1), ()), ((1, 0), ())]


def test_parse_empty_rule_set():
    rws = parse_system("letters: a\ninverses: a=a\n")
    assert rws.rules == ()
    assert is_length_reducing(rws)
    assert rws.alphabet.inverse == (0,)


def test_parse_keeps_non_reducing_rule():
    rws = parse_system("letters: a b\nrule: a -> a b\n")
    assert not is_length_reducing(rws)
    assert not rws.rules[0].length_reducing


def test_parse_empty_rhs_forms():
    a = parse_system("letters: a A\ninverses: a=A\nrule: a A ->\nrule: A a -> λ\n")
    assert all(r.rhs == () for r in a.rules)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("letters: a\nrule: a b -> a\n", 2, "unknown letter 'b'"),
        ("letters: a a\n", 1, "declared twice"),
        ("letters: a b c\ninverses: a=b a=c\n", 2, "not an involution"),
        ("letters: a\nrule: -> a\n", 2, "empty"),
        ("letters: a\nfoo: a\n", 2, "unknown directive"),
        ("letters: a\nrule: a a a\n", 2, "->"),
        ("letters: a b\ninverses: a=a\n", None, "omits"),
    ],
)
def test_parse_errors_carry_location(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_system(text, "bad.rws")
    err = info.value
    assert err.line == line
    assert fragment in str(err)
    assert str(err).startswith("bad.rws:")


def test_format_round_trip(c2c3, z_system, nonconfluent):
    for rws in (c2c3, z_system, nonconfluent):
        assert parse_system(format_system(rws)) == rws


def test_word_parsing_and_formatting(z_system):
    assert z_system.parse_word("aAa") == (0, 1, 0)
    assert z_system.parse_word("a A a") == (0, 1, 0)
    assert z_system.parse_word("λ") == ()
    assert z_system.format_word(()) == "λ"
    with pytest.raises(ParseError):
        z_system.parse_word("ab")
    multi = Alphabet(("x1", "x2"), (1, 0))
    assert multi.parse_word("x1 x2") == (0, 1)
    assert multi.format_word((0, 1)) == "x1 x2"
    with pytest.raises(ParseError):
        multi.parse_word("x1x2")


def test_normalize_examples(z_system, c2c3):
    assert normalize(z_system, z_system.parse_word("aAa")) == (0,)
    assert normalize(z_system, ()) == ()
    assert normalize(c2c3, c2c3.parse_word("bbb")) == ()
    # every rewrite sequence of bbb ends at λ
    assert normal_forms(rule_pairs(c2c3), c2c3.parse_word("bbb")) == {()}


def test_normalize_requires_length_reducing():
    rws = parse_system("letters: a b\nrule: a b -> b a\n")
    assert not is_length_reducing(rws)
    with pytest.raises(PreconditionError):
        normalize(rws, (0, 1))


def test_normalize_z_matches_exponent_sum(z_system):
    for w in all_words(2, 7):
        e = w.count(0) - w.count(1)
        expect = (0,) * e if e >= 0 else (1,) * -e
        assert normalize(z_system, w) == expect


@pytest.mark.parametrize("strategy", ["leftmost", "rightmost", "random"])
def test_strategies_agree_with_brute_force(c2c3, strategy):
    rules = rule_pairs(c2c3)
    rng = random.Random(7)
    for w in all_words(3, 5):
        (nf,) = normal_forms(rules, w)
        assert normalize(c2c3, w, strategy, rng) == nf


def test_unknown_strategy(z_system):
    with pytest.raises(ValueError):
        normalize(z_system, (0,), "middle")


def test_normalize_append_matches_normalize(c2c3):
    for w in all_words(3, 4):
        nf = normalize(c2c3, w)
        for x in range(3):
            assert normalize_append(c2c3, nf, x) == normalize(c2c3, w + (x,))


def test_one_step_reducts(nonconfluent):
    got = one_step_reducts(nonconfluent, (0, 1, 0))
    assert got == [(0, 0, (1, 0)), (1, 1, (0, 0))]


def test_critical_pairs_z(z_system):
    pairs = critical_pairs(z_system)
    supers = {(cp.superposition, cp.left_result, cp.right_result) for cp in pairs}
    assert ((0, 1, 0), (0,), (0,)) in supers
    assert ((1, 0, 1), (1,), (1,)) in supers
    assert all(cp.kind == "overlap" for cp in pairs)
    assert len(pairs) == 2


def test_critical_pairs_nonconfluent(nonconfluent):
    pairs = critical_pairs(nonconfluent)
    supers = {(cp.superposition, cp.left_result, cp.right_result) for cp in pairs}
    assert supers == {((0, 1, 0), (1, 0), (0, 0)), ((1, 0, 1), (0, 1), (1, 1))}


def test_critical_pairs_self_overlap():
    rws = parse_system("letters: a\nrule: a a ->\n")
    (cp,) = critical_pairs(rws)
    assert cp.superposition == (0, 0, 0)
    assert cp.left_result == cp.right_result == (0,)


def test_critical_pairs_containment():
    rws = parse_system("letters: a b\nrule: a b a -> a\nrule: b -> λ\n")
    kinds = {(cp.kind, cp.superposition, cp.right_result) for cp in critical_pairs(rws)}
    assert ("containment", (0, 1, 0), (0, 0)) in kinds


def test_check_convergent_examples(z_system, c2c3, nonconfluent):
    assert z_system.report.convergent
    assert check_convergent(c2c3).convergent
    rep = check_convergent(nonconfluent)
    assert rep.length_reducing and not rep.locally_confluent
    (first, _) = rep.unresolved_pairs
    assert first.superposition == (0, 1, 0)
    assert {first.left_normal, first.right_normal} == {(0,), (0, 0)}
    assert rep.to_dict(nonconfluent)["unresolved_pairs"][0]["left_normal"] == "a"


def test_check_convergent_non_reducing_system():
    rws = parse_system("letters: a b\nrule: a b -> b a\nrule: b a -> a b\n")
    rep = check_convergent(rws)
    assert not rep.convergent
    assert not rep.length_reducing


def test_presents_group():
    assert check_presents_group(parse_system(Z_TEXT))
    half = parse_system("letters: a b\ninverses: a=b\nrule: a b -> λ\n")
    assert not check_presents_group(half)
    with pytest.raises(PreconditionError):
        check_presents_group(parse_system(NONCONFLUENT_TEXT))


def test_equal_in_group(z_system, c2c3, nonconfluent):
    assert equal_in_group(z_system, z_system.parse_word("aA"), ())
    assert not equal_in_group(z_system, (0,), (1,))
    assert equal_in_group(c2c3, c2c3.parse_word("bb"), c2c3.parse_word("B"))
    with pytest.raises(PreconditionError):
        equal_in_group(nonconfluent, (0,), (0,))


def test_conflicting_lhs_reported():
    rws = parse_system("letters: a b\nrule: a a -> a\nrule: a a -> b\n")
    assert rws.report.conflicting_lhs == ((0, 1),)


def test_rule_and_alphabet_validation():
    with pytest.raises(ValueError):
        Rule((), ())
    with pytest.raises(ValueError):
        Alphabet(("a", "a"))
    with pytest.raises(ValueError):
        Alphabet(("a", "b"), (1, 1))
    with pytest.raises(ValueError):
        StringRewritingSystem(Alphabet(("a",)), (Rule((3,), ()),))


# ---------------------------------------------------------------- properties

_rule = st.tuples(
    st.lists(st.integers(0, 1), min_size=1, max_size=3).map(tuple),
    st.lists(st.integers(0, 1), max_size=2).map(tuple),
).filter(lambda r: len(r[0]) > len(r[1]))


@st.composite
def small_systems(draw):
    rules = draw(st.lists(_rule, min_size=1, max_size=4))
    return StringRewritingSystem(Alphabet(("a", "b")), tuple(Rule(l, r) for l, r in rules))


@settings(max_examples=150, deadline=None)
@given(small_systems())
def test_local_confluence_matches_unique_normal_forms(rws):
    # terminating systems: locally confluent iff every word has one normal form;
    # superpositions are no longer than 2 * max_lhs - 1
    rules = rule_pairs(rws)
    unique = all(len(normal_forms(rules, w)) == 1 for w in all_words(2, 2 * rws.max_lhs - 1))
    assert check_convergent(rws).locally_confluent == unique


@settings(max_examples=100, deadline=None)
@given(small_systems(), st.lists(st.integers(0, 1), max_size=8).map(tuple))
def test_normal_form_is_reachable_and_irreducible(rws, w):
    nf = normalize(rws, w)
    assert rws.is_irreducible(nf)
    assert nf in normal_forms(rule_pairs(rws), w)
    assert len(nf) <= len(w)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=10).map(tuple))
def test_group_inverse_law(w):
    from plainrws.presentations import gen_plain, parse_factors

    rws = gen_plain(parse_factors("C2,C3"))
    assert normalize(rws, w + rws.alphabet.invert(w)) == ()
    assert normalize(rws, rws.alphabet.invert(w) + w) == ()


@settings(max_examples=60, deadline=None)
@given(small_systems())
def test_round_trip_property(rws):
    assert parse_system(format_system(rws)) == rws
