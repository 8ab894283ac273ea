import numpy as np
import pytest
from hypothesis import given, strategies as st

from autolearn import fixture
from autolearn.automata import Nfa, isomorphic
from autolearn.formats import (
    ParseError,
    emit_dfa,
    emit_dot,
    emit_kripke,
    emit_labeled,
    emit_samples,
    emit_words,
    parse_dfa,
    parse_kripke,
    parse_labeled,
    parse_samples,
    parse_words,
)
from autolearn.generate import random_dfa
from autolearn.rpni import InconsistentSample, Sample
from autolearn.teacher import LabeledExample

words = st.text(alphabet="ab", max_size=6)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", 1, "missing alphabet"),
        ("a b\nq0 1 1 q0\n", 2, "missing successor"),
        ("a b\nq0 1 1 q0 q0 q0\n", 2, "too many columns"),
        ("a b\nq0 1 1 q0 q0\nq0 0 0 q0 q0\n", 3, "duplicate"),
        ("a b\nq0 1 1 q0 q9\n", 2, "unknown successor"),
        ("a b\nq0 0 1 q0 q0\n", 2, "exactly one initial"),
        ("a b\nq0 1 1 q0 q1\nq1 1 0 q1 q1\n", 3, "exactly one initial"),
        ("a b\nq0 1 x q0 q0\n", 2, "accepting flag"),
        ("a a\nq0 1 1 q0 q0\n", 1, "alphabet"),
    ],
)
def test_malformed_dfa_reports_line(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_dfa(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {line}:")


def test_comments_and_blank_lines_are_skipped():
    d = parse_dfa("# even zeros\n0 1\n\nq0 1 1 q1 q0\n# odd\nq1 0 0 q0 q1\n")
    assert d.accepts("00") and not d.accepts("0")


def test_kripke_width_must_be_constant():
    with pytest.raises(ParseError) as info:
        parse_kripke("a b\ns0 1 01 s0 s1\ns1 0 1 s1 s0\n")
    assert info.value.line == 3


def test_kripke_fixture_round_trips():
    k = parse_kripke(fixture("ikl3.kripke"))
    assert k.width == 3 and k.n_states == 5
    k2 = parse_kripke(emit_kripke(k))
    assert np.array_equal(k.outputs, k2.outputs) and np.array_equal(k.delta, k2.delta)


def test_empty_word_encoding():
    assert parse_labeled("+ \n- a\n") == [LabeledExample("", True), LabeledExample("a", False)]
    assert emit_labeled([LabeledExample("", True)]) == "+ \n"
    assert parse_words('""\n\na\n# note\n') == ["", "", "a"]
    assert emit_words(["", "ab"]) == '""\nab\n'


def test_bad_sample_line():
    with pytest.raises(ParseError) as info:
        parse_labeled("+ a\n* b\n")
    assert info.value.line == 2


def test_empty_sample():
    sample = parse_samples("", "ab")
    assert sample == Sample(set(), set(), ("a", "b"))
    assert emit_samples(sample) == ""


def test_double_label_is_inconsistent():
    with pytest.raises(InconsistentSample):
        parse_samples("+ ab\n- ab\n")


def test_samples_emitted_in_shortlex_order():
    assert emit_samples(Sample({"ab", "b", ""}, {"a"}, ("a", "b"))) == "+ \n+ b\n+ ab\n- a\n"


@given(st.lists(words, max_size=8))
def test_word_lists_round_trip(ws):
    assert parse_words(emit_words(ws)) == ws


@given(st.sets(words, max_size=6), st.sets(words, max_size=6))
def test_samples_round_trip(pos, neg):
    sample = Sample(pos, neg - pos, ("a", "b"))
    assert parse_samples(emit_samples(sample), "ab") == sample


@given(st.integers(0, 2**32 - 1), st.integers(1, 7))
def test_dfa_round_trip(seed, n):
    d = random_dfa(np.random.default_rng(seed), n)
    assert isomorphic(parse_dfa(emit_dfa(d)), d)


def _count(dot, kind):
    body = [line for line in dot.splitlines() if line.startswith("  q")]
    edges = [line for line in body if "->" in line]
    return len(edges) if kind == "edges" else len(body) - len(edges)


def test_dot_counts_for_even0s(even0s):
    dot = emit_dot(even0s)
    assert _count(dot, "nodes") == even0s.n_states
    assert _count(dot, "edges") == even0s.n_states * 2
    assert dot.count("doublecircle") == 1
    assert "__start -> q0;" in dot


def test_dot_for_kripke_and_nfa(ikl3):
    dot = emit_dot(ikl3)
    assert _count(dot, "nodes") == 5 and "q0\\n000" in dot
    nfa = Nfa(("a",), 2, frozenset({0, 1}), frozenset({1}), {(0, "a"): frozenset({0, 1})})
    dot = emit_dot(nfa)
    assert _count(dot, "edges") == 2 and dot.count("__start ->") == 2
