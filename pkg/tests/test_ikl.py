import numpy as np
from hypothesis import given, settings, strategies as st

from autolearn import fixture
from autolearn.automata import kripke_counterexample, prefixes, words_upto
from autolearn.formats import parse_kripke
from autolearn.generate import random_kripke, random_words
from autolearn.ikl import consistent_with, ikl_hypothesis, ikl_init, ikl_ingest, ikl_refine_all, ikl_run
from autolearn.teacher import KripkeTeacher

seeds = st.integers(0, 2**32 - 1)


def test_empty_queue_gives_all_zero_structure(ikl3):
    result = ikl_run([], KripkeTeacher(ikl3))
    assert result.hypothesis.n_states == 1
    assert not result.hypothesis.outputs.any()
    assert result.stats.membership == 0


def test_first_word_is_always_ingested(ikl3):
    result = ikl_run(["a"], KripkeTeacher(ikl3))
    assert result.rebuilt == [True]
    assert result.state.P == ["", "a"]


def test_slice_tables_share_p_but_not_columns(ikl3):
    result = ikl_run(["a", "ba"], KripkeTeacher(ikl3))
    tables = result.state.tables
    assert len(tables) == 3
    assert all(t.P == tables[0].P for t in tables)
    assert result.state.V(0) == ["", "a", "b"]
    assert result.state.V(2) == [""]


def test_hypothesis_agrees_with_every_filled_cell():
    k = parse_kripke(fixture("ikl3_even_nonempty.kripke"))
    teacher = KripkeTeacher(k)
    result = ikl_run(["a", "ba"], teacher)
    h = result.hypothesis
    for c, table in enumerate(result.state.tables):
        for e in table.P:
            for v in table.V:
                assert h.output(e + v)[c] == teacher.membership(c, e + v)


def test_refining_one_slice_leaves_others_untouched(ikl3):
    teacher = KripkeTeacher(ikl3)
    state = ikl_ingest(ikl_init(teacher), "ab", teacher)
    ikl_refine_all(state, teacher)
    before = [list(t.V) for t in state.tables]
    state.tables[0].add_words(["abb"])
    ikl_refine_all(state, teacher)
    assert [list(t.V) for t in state.tables][1:] == before[1:]


@settings(max_examples=30)
@given(seeds, st.integers(1, 5), st.integers(1, 3))
def test_hypothesis_consistent_with_every_queued_word(seed, n, width):
    rng = np.random.default_rng(seed)
    k = random_kripke(rng, n, width)
    teacher = KripkeTeacher(k)
    queue = random_words(rng, 6, 6)
    result = ikl_run(queue, teacher)
    for w in queue:
        assert consistent_with(result.hypothesis, w, teacher)


@settings(max_examples=30)
@given(seeds, st.integers(1, 5), st.integers(1, 3))
def test_distinct_values_bounded_by_target_states(seed, n, width):
    rng = np.random.default_rng(seed)
    k = random_kripke(rng, n, width)
    result = ikl_run(random_words(rng, 6, 6), KripkeTeacher(k))
    for table in result.state.tables:
        values = {table.value(e) for e in table.elements}
        assert len(values) <= n + 1  # + the empty value of d0


@settings(max_examples=20)
@given(seeds, st.integers(1, 4), st.integers(1, 3))
def test_exhaustive_queue_learns_target(seed, n, width):
    rng = np.random.default_rng(seed)
    k = random_kripke(rng, n, width)
    result = ikl_run(words_upto("ab", 2 * n), KripkeTeacher(k))
    assert kripke_counterexample(result.hypothesis, k) is None
