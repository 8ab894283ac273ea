"""ID, IID and IDS: learners built on one partition-table core."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .automata import Dfa, Word, canonical, check_word, prefixes, render_word, shortlex_key
from .lstar import LearnerError
from .teacher import LabeledExample, QueryStats


class _DeadMarker:
    """The absorbing non-word element ``d0``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "d0"

    def __reduce__(self):
        return (_DeadMarker, ())


D0 = _DeadMarker()
Element = Union[Word, _DeadMarker]


class InconsistentExample(LearnerError):
    """A labeled example disagrees with the teacher."""


def _label(e: Element) -> str:
    if e is D0:
        return "d0"
    return e if e else "λ"


def build_tset(P: Iterable[Word], alphabet: Sequence[str]) -> list[Element]:
    """``d0`` followed by P ∪ P·Σ in shortlex order."""
    words = set(P)
    words |= {p + a for p in list(words) for a in alphabet}
    return [D0] + sorted(words, key=shortlex_key(alphabet))


class Split(NamedTuple):
    alpha: Element
    beta: Element
    sigma: str
    gamma: Word

    @property
    def distinguishing(self) -> Word:
        return self.sigma + self.gamma

    def __str__(self):
        return f"({_label(self.alpha)}, {_label(self.beta)}) -> {_label(self.distinguishing)}"


@dataclass(frozen=True)
class PartitionSnapshot:
    elements: tuple
    V: tuple[Word, ...]
    matrix: tuple[tuple[bool, ...], ...]
    note: str = ""

    def e_set(self, element) -> frozenset[Word]:
        row = self.matrix[self.elements.index(element)]
        return frozenset(v for v, b in zip(self.V, row) if b)

    def render(self) -> str:
        labels = [_label(e) for e in self.elements]
        width = max(len(x) for x in labels + ["T"])
        cols = [_label(v) for v in self.V]
        lines = [f"# {self.note}"] if self.note else []
        lines.append("T".ljust(width) + " | " + " ".join(cols))
        for lab, row in zip(labels, self.matrix):
            cells = " ".join(str(int(b)).ljust(len(c)) for b, c in zip(row, cols))
            lines.append(lab.ljust(width) + " | " + cells.rstrip())
        return "\n".join(lines)


class PartitionTable:
    """Tset × V membership matrix; ``E(α)`` is the set of columns marked for α."""

    def __init__(self, alphabet: Sequence[str], teacher, P: Iterable[Word] = ()):
        self.alphabet = tuple(alphabet)
        self.teacher = teacher
        self.P: list[Word] = []
        self.V: list[Word] = []
        self.elements: list[Element] = [D0]
        self._rows: dict[Element, list[bool]] = {D0: []}
        self.add_words(P)

    # -- structure ---------------------------------------------------------
    def add_words(self, words: Iterable[Word]) -> list[Word]:
        """Extend P, rebuild Tset and refill existing columns for new elements."""
        added = [check_word(w, self.alphabet) for w in words if w not in self.P]
        if not added:
            return []
        key = shortlex_key(self.alphabet)
        self.P = sorted(set(self.P) | set(added), key=key)
        self.elements = build_tset(self.P, self.alphabet)
        for e in self.elements:
            if e not in self._rows:
                self._rows[e] = [self.teacher.membership(e + v) for v in self.V]
        return added

    def fill_column(self, v: Word):
        if v in self.V:
            raise LearnerError(f"column {render_word(v)} already present")
        self.V.append(v)
        for e in self.elements:
            self._rows[e].append(False if e is D0 else self.teacher.membership(e + v))
        return self

    def value(self, e: Element) -> tuple[bool, ...]:
        return tuple(self._rows[e])

    def e_set(self, e: Element) -> frozenset[Word]:
        return frozenset(v for v, b in zip(self.V, self._rows[e]) if b)

    def successor(self, e: Element, symbol: str) -> Optional[Element]:
        if e is D0:
            return D0
        t = e + symbol
        return t if t in self._rows else None

    # -- refinement --------------------------------------------------------
    def find_split(self) -> Optional[Split]:
        """Witness whose σγ is shortlex-least over all splitting pairs.

        Ties go to the first pair in scan order (α before β in element
        order, then σ in alphabet order). Elements are grouped by E-value so
        only distinct successor values are compared.
        """
        key = shortlex_key(self.alphabet)
        groups: dict[tuple, list[int]] = {}
        for i, e in enumerate(self.elements):
            if e is D0 or any(e + a in self._rows for a in self.alphabet):
                groups.setdefault(self.value(e), []).append(i)
        best_key, best = None, None
        for members in groups.values():
            if len(members) < 2:
                continue
            for sigma in self.alphabet:
                # successor value -> element indices having it, in order
                by_value: dict[tuple, list[int]] = {}
                for i in members:
                    t = self.successor(self.elements[i], sigma)
                    if t is not None:
                        by_value.setdefault(self.value(t), []).append(i)
                values = list(by_value)
                for x in range(len(values)):
                    for y in range(x + 1, len(values)):
                        diff = [v for v, p, q in zip(self.V, values[x], values[y]) if p != q]
                        gamma = min(diff, key=key)
                        k = key(sigma + gamma)
                        ia, ib = by_value[values[x]], by_value[values[y]]
                        pair = _first_pair(ia, ib)
                        rank = (k, pair, self.alphabet.index(sigma))
                        if best_key is None or rank < best_key:
                            best_key = rank
                            alpha, beta = self.elements[pair[0]], self.elements[pair[1]]
                            best = Split(alpha, beta, sigma, gamma)
        return best

    def hypothesis(self) -> Dfa:
        """DFA over distinct E-values; missing transitions fall to the empty value."""
        values: dict[tuple, int] = {}
        empty = self.value(D0)
        values[empty] = 0
        for e in self.elements:
            values.setdefault(self.value(e), len(values))
        n, k = len(values), len(self.alphabet)
        delta = np.full((n, k), -1, dtype=np.int64)
        delta[0, :] = 0
        for e in self.elements:
            if e is D0:
                continue
            q = values[self.value(e)]
            for i, a in enumerate(self.alphabet):
                t = self.successor(e, a)
                if t is None:
                    continue
                target = values[self.value(t)]
                if delta[q, i] not in (-1, target):
                    raise LearnerError(f"conflicting transitions for block of {_label(e)} on {a}")
                delta[q, i] = target
        # A block without an outgoing element on σ still knows its successor's
        # entries at every γ with σγ ∈ V; take the first block that agrees.
        column = {v: j for j, v in enumerate(self.V)}
        for val, q in values.items():
            for i, a in enumerate(self.alphabet):
                if delta[q, i] >= 0:
                    continue
                known = [(j, column[a + g]) for j, g in enumerate(self.V) if a + g in column]
                delta[q, i] = next(
                    (r for cand, r in values.items() if all(cand[j] == val[m] for j, m in known)), 0
                )
        accepting = np.zeros(n, dtype=np.bool_)
        if self.V and self.V[0] == "":
            for val, q in values.items():
                accepting[q] = val[0]
        if "" not in self._rows:
            initial = 0
        else:
            initial = values[self.value("")]
        return canonical(Dfa(self.alphabet, delta, accepting, initial))

    def snapshot(self, note: str = "") -> PartitionSnapshot:
        return PartitionSnapshot(
            tuple(self.elements), tuple(self.V), tuple(self.value(e) for e in self.elements), note
        )


def _first_pair(xs: list[int], ys: list[int]) -> tuple[int, int]:
    """Scan-order-first (i, j), i < j, with one index from each sorted list."""
    i = min(xs[0], ys[0])
    other = ys if i == xs[0] else xs
    j = next(v for v in other if v > i)
    return i, j


def fill_column(table: PartitionTable, v: Word) -> PartitionTable:
    return table.fill_column(v)


def find_split(table: PartitionTable) -> Optional[Split]:
    return table.find_split()


def id_hypothesis(table: PartitionTable) -> Dfa:
    return table.hypothesis()


def null_hypothesis(alphabet: Sequence[str]) -> Dfa:
    """Single rejecting state with self-loops."""
    k = len(alphabet)
    return Dfa(tuple(alphabet), np.zeros((1, k), dtype=np.int64), np.zeros(1, dtype=np.bool_), 0)


def refine(table: PartitionTable, trace: list, splits: list, label: str = "") -> None:
    """Split until stable, recording each witness and table."""
    if not table.V:
        table.fill_column("")
        trace.append(table.snapshot(f"{label}column λ".strip()))
    while True:
        witness = table.find_split()
        if witness is None:
            return
        splits.append(witness)
        table.fill_column(witness.distinguishing)
        trace.append(table.snapshot(f"{label}split {witness}".strip()))


def _stats(teacher, start, algorithm) -> QueryStats:
    m0, e0, b0 = start
    return QueryStats(
        algorithm,
        teacher.membership_count - m0,
        teacher.equivalence_count - e0,
        teacher.bookkeeping_count - b0,
    )


def _counters(teacher):
    return teacher.membership_count, teacher.equivalence_count, teacher.bookkeeping_count


@dataclass
class IdResult:
    hypothesis: Dfa
    trace: list[PartitionSnapshot]
    stats: QueryStats
    table: PartitionTable
    splits: list[Split] = field(default_factory=list)

    @property
    def V(self) -> tuple[Word, ...]:
        return tuple(self.table.V)

    def render_trace(self) -> str:
        return "\n\n".join(s.render() for s in self.trace)


def id_run(P: Iterable[Word], teacher) -> IdResult:
    """Batch ID from a live-complete set ``P`` (not validated)."""
    start = _counters(teacher)
    table = PartitionTable(teacher.alphabet, teacher, P)
    trace, splits = [], []
    refine(table, trace, splits)
    return IdResult(table.hypothesis(), trace, _stats(teacher, start, "id"), table, splits)


@dataclass
class IncrementalResult:
    hypothesis: Dfa
    hypotheses: list[Dfa]
    trace: list
    stats: QueryStats
    table: Optional[PartitionTable]
    splits: list[Split] = field(default_factory=list)
    events: list[str] = field(default_factory=list)

    @property
    def P(self) -> tuple[Word, ...]:
        return tuple(self.table.P) if self.table else ()

    @property
    def V(self) -> tuple[Word, ...]:
        return tuple(self.table.V) if self.table else ()

    def render_trace(self) -> str:
        parts = []
        for item in self.trace:
            parts.append(item if isinstance(item, str) else item.render())
        return "\n\n".join(parts)


def _incremental(stream, teacher, algorithm: str, negatives_always: bool, prefix_closed: bool):
    start = _counters(teacher)
    alphabet = tuple(teacher.alphabet)
    hypothesis = null_hypothesis(alphabet)
    hypotheses, trace, splits, events = [], [], [], []
    table: Optional[PartitionTable] = None
    for i, ex in enumerate(stream, 1):
        ex = LabeledExample(check_word(ex.word, alphabet), bool(ex.label))
        if teacher.label(ex.word).label != ex.label:
            raise InconsistentExample(f"example {ex} contradicts the teacher")
        consistent = hypothesis.accepts(ex.word) == ex.label
        if not (negatives_always or ex.label or not consistent):
            events.append(f"{i}: {ex} consistent, ignored")
            trace.append(f"# example {i} {ex}: consistent, hypothesis unchanged")
            hypotheses.append(hypothesis)
            continue
        new = prefixes(ex.word) if prefix_closed else [ex.word]
        if table is None:
            table = PartitionTable(alphabet, teacher, [""] + new)
        else:
            table.add_words(new)
        events.append(f"{i}: {ex} incorporated, P={{{', '.join(_label(p) for p in table.P)}}}")
        if table.V:
            trace.append(table.snapshot(f"example {i} {ex}"))
        refine(table, trace, splits, f"example {i}: ")
        hypothesis = table.hypothesis()
        hypotheses.append(hypothesis)
    return IncrementalResult(hypothesis, hypotheses, trace, _stats(teacher, start, algorithm), table, splits, events)


def iid_run(stream: Iterable[LabeledExample], teacher) -> IncrementalResult:
    """IID: consistent negatives are skipped; everything else adds Pref(α) to P."""
    return _incremental(stream, teacher, "iid", negatives_always=False, prefix_closed=True)


def ids_run(stream: Iterable[LabeledExample], teacher, mode: str = "closed") -> IncrementalResult:
    """IDS: every example enters P, with its prefixes (``closed``) or alone (``free``)."""
    mode = mode.replace("prefix_", "").replace("prefix-", "")
    if mode not in ("closed", "free"):
        raise ValueError(f"mode must be 'closed' or 'free', got {mode!r}")
    return _incremental(stream, teacher, f"ids-{mode}", negatives_always=True, prefix_closed=mode == "closed")
