"""IKL: incremental Kripke-structure learning by bit-slicing.

Each output bit gets its own partition table over a shared, prefix-closed P.
Slices refine independently (a split in one never adds a column to
another) and are recombined by the reachable product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .automata import KripkeStructure, Word, check_word, prefixes, slice_product
from .id_family import PartitionSnapshot, PartitionTable, Split, refine
from .teacher import QueryStats


@dataclass
class IklState:
    alphabet: tuple[str, ...]
    width: int
    tables: list[PartitionTable] = field(default_factory=list)

    @property
    def P(self) -> list[Word]:
        return list(self.tables[0].P) if self.tables else []

    @property
    def elements(self) -> list:
        return list(self.tables[0].elements) if self.tables else []

    def V(self, bit: int) -> list[Word]:
        return list(self.tables[bit].V) if self.tables else []


def ikl_init(kteacher) -> IklState:
    return IklState(tuple(kteacher.alphabet), kteacher.width)


def ikl_ingest(state: IklState, w: Word, kteacher) -> IklState:
    """Add Pref(w) to P (and ε); new Tset elements are filled on every slice's columns."""
    check_word(w, state.alphabet)
    words = [""] + prefixes(w)
    if not state.tables:
        state.tables = [PartitionTable(state.alphabet, kteacher.slice(c), words) for c in range(state.width)]
    else:
        for table in state.tables:
            table.add_words(words)
    return state


def ikl_refine_all(state: IklState, kteacher=None, trace: Optional[list] = None, splits: Optional[dict] = None):
    """Refine each slice to stability, one bit at a time."""
    trace = [] if trace is None else trace
    splits = {} if splits is None else splits
    for c, table in enumerate(state.tables):
        bit_trace: list[PartitionSnapshot] = []
        bit_splits: list[Split] = splits.setdefault(c, [])
        refine(table, bit_trace, bit_splits, f"bit {c + 1}: ")
        trace.extend(bit_trace)
    return state


def ikl_hypothesis(state: IklState) -> KripkeStructure:
    if not state.tables:
        k = len(state.alphabet)
        return KripkeStructure(state.alphabet, np.zeros((1, k), dtype=np.int64), np.zeros((1, state.width), dtype=np.bool_))
    return slice_product([t.hypothesis() for t in state.tables])


def consistent_with(hypothesis: KripkeStructure, w: Word, kteacher) -> bool:
    """Every prefix of ``w`` yields the teacher's output on every bit."""
    for p in prefixes(w):
        out = hypothesis.output(p)
        for c in range(hypothesis.width):
            if out[c] != kteacher.membership(c, p):
                return False
    return True


@dataclass
class IklResult:
    hypothesis: KripkeStructure
    state: IklState
    trace: list
    stats: QueryStats
    rebuilt: list[bool]
    splits: dict = field(default_factory=dict)

    def render_trace(self) -> str:
        return "\n\n".join(x if isinstance(x, str) else x.render() for x in self.trace)


def ikl_run(queue: Iterable[Word], kteacher) -> IklResult:
    m0, e0, b0 = kteacher.membership_count, kteacher.equivalence_count, kteacher.bookkeeping_count
    state = ikl_init(kteacher)
    hypothesis = ikl_hypothesis(state)
    trace: list = []
    splits: dict = {}
    rebuilt = []
    for w in queue:
        check_word(w, state.alphabet)
        if state.tables and consistent_with(hypothesis, w, kteacher):
            trace.append(f"# word {w or 'ε'}: consistent with H_m, no rebuild")
            rebuilt.append(False)
            continue
        ikl_ingest(state, w, kteacher)
        ikl_refine_all(state, kteacher, trace, splits)
        hypothesis = ikl_hypothesis(state)
        trace.append(f"# word {w or 'ε'}: P={{{', '.join(p or 'ε' for p in state.P)}}}, H_m has {hypothesis.n_states} states")
        rebuilt.append(True)
    stats = QueryStats(
        "ikl",
        kteacher.membership_count - m0,
        kteacher.equivalence_count - e0,
        kteacher.bookkeeping_count - b0,
    )
    return IklResult(hypothesis, state, trace, stats, rebuilt, splits)
