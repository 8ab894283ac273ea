"""Angluin's L* over an observation table (S, E, T)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .automata import Dfa, Word, prefixes
from .teacher import QueryStats


class LearnerError(RuntimeError):
    """A learner step was invoked outside its precondition."""


class Inconsistency(NamedTuple):
    s1: Word
    s2: Word
    symbol: str
    experiment: Word

    @property
    def new_experiment(self) -> Word:
        return self.symbol + self.experiment


def _cell(word: Word) -> str:
    return word if word else "λ"


@dataclass(frozen=True)
class TableSnapshot:
    upper: tuple[Word, ...]
    lower: tuple[Word, ...]
    experiments: tuple[Word, ...]
    rows: dict

    def row(self, u: Word) -> tuple[bool, ...]:
        return self.rows[u]

    def render(self) -> str:
        labels = [_cell(u) for u in self.upper + self.lower]
        width = max(len(x) for x in labels + ["T"])
        header = "T".ljust(width) + " | " + " ".join(_cell(e) for e in self.experiments)
        lines = [header]
        for u in self.upper:
            lines.append(self._line(u, width))
        lines.append("-" * len(header))
        for u in self.lower:
            lines.append(self._line(u, width))
        return "\n".join(lines)

    def _line(self, u, width):
        cells = [str(int(b)).ljust(len(_cell(e))) for b, e in zip(self.rows[u], self.experiments)]
        return _cell(u).ljust(width) + " | " + " ".join(cells).rstrip()


class ObservationTable:
    """L* observation table.

    ``S`` is kept prefix-closed; the lower part is ``S·Σ`` minus ``S`` in
    (S order × alphabet order). Cells are answered by membership queries on
    ``u + e``.
    """

    def __init__(self, teacher):
        self.teacher = teacher
        self.alphabet = tuple(teacher.alphabet)
        self.S: list[Word] = [""]
        self.E: list[Word] = [""]
        self.T: dict[tuple[Word, Word], bool] = {}
        self.fill()

    @property
    def lower(self) -> list[Word]:
        upper = set(self.S)
        out = []
        seen = set()
        for s in self.S:
            for a in self.alphabet:
                u = s + a
                if u not in upper and u not in seen:
                    seen.add(u)
                    out.append(u)
        return out

    def fill(self):
        for u in self.S + self.lower:
            for e in self.E:
                if (u, e) not in self.T:
                    self.T[(u, e)] = self.teacher.membership(u + e)

    def row(self, u: Word) -> tuple[bool, ...]:
        return tuple(self.T[(u, e)] for e in self.E)

    def is_closed(self) -> Optional[Word]:
        """First lower label whose row matches no upper row, or None."""
        upper_rows = {self.row(s) for s in self.S}
        for u in self.lower:
            if self.row(u) not in upper_rows:
                return u
        return None

    def is_consistent(self) -> Optional[Inconsistency]:
        """First (s1, s2, a, e) with row(s1) = row(s2) but T(s1·a, e) != T(s2·a, e)."""
        for i, s1 in enumerate(self.S):
            r1 = self.row(s1)
            for s2 in self.S[i + 1:]:
                if self.row(s2) != r1:
                    continue
                for a in self.alphabet:
                    for e in self.E:
                        if self.T[(s1 + a, e)] != self.T[(s2 + a, e)]:
                            return Inconsistency(s1, s2, a, e)
        return None

    def close_step(self, u: Word):
        if u in self.S:
            raise LearnerError(f"{u!r} is already in S")
        self.S.append(u)
        self.fill()
        return self

    def consistency_step(self, witness: Inconsistency):
        new = witness.new_experiment
        if new in self.E:
            raise LearnerError(f"experiment {new!r} already in E")
        self.E.append(new)
        self.fill()
        return self

    def handle_counterexample(self, cex: Word):
        for p in prefixes(cex):
            if p not in self.S:
                self.S.append(p)
        self.fill()
        return self

    def conjecture(self) -> Dfa:
        if self.is_closed() is not None or self.is_consistent() is not None:
            raise LearnerError("conjecture needs a closed and consistent table")
        state_of: dict[tuple, int] = {}
        for s in self.S:
            state_of.setdefault(self.row(s), len(state_of))
        reps = {}
        for s in self.S:
            reps.setdefault(state_of[self.row(s)], s)
        n = len(state_of)
        delta = np.zeros((n, len(self.alphabet)), dtype=np.int64)
        accepting = np.zeros(n, dtype=np.bool_)
        for q, s in reps.items():
            accepting[q] = self.T[(s, "")]
            for i, a in enumerate(self.alphabet):
                delta[q, i] = state_of[self.row(s + a)]
        return Dfa(self.alphabet, delta, accepting, state_of[self.row("")])

    def snapshot(self) -> TableSnapshot:
        labels = self.S + self.lower
        return TableSnapshot(tuple(self.S), tuple(self.lower), tuple(self.E), {u: self.row(u) for u in labels})


# functional aliases mirroring the step names used in traces
def init_table(teacher) -> ObservationTable:
    return ObservationTable(teacher)


@dataclass
class LStarResult:
    hypothesis: Dfa
    trace: list[TableSnapshot]
    stats: QueryStats
    hypotheses: list[Dfa] = field(default_factory=list)
    counterexamples: list[Word] = field(default_factory=list)

    def render_trace(self) -> str:
        return "\n\n".join(f"# table {i + 1}\n{snap.render()}" for i, snap in enumerate(self.trace))


def lstar_run(teacher, max_rounds: int = 10_000) -> LStarResult:
    """Learn the teacher's language; loop order fill, consistency, closure, conjecture."""
    m0, e0, b0 = teacher.membership_count, teacher.equivalence_count, teacher.bookkeeping_count
    table = ObservationTable(teacher)
    trace = [table.snapshot()]
    hypotheses, cexs = [], []
    for _ in range(max_rounds):
        while True:
            witness = table.is_consistent()
            if witness is not None:
                table.consistency_step(witness)
                trace.append(table.snapshot())
                continue
            u = table.is_closed()
            if u is not None:
                table.close_step(u)
                trace.append(table.snapshot())
                continue
            break
        hypothesis = table.conjecture()
        hypotheses.append(hypothesis)
        cex = teacher.equivalence(hypothesis)
        if cex is None:
            stats = QueryStats(
                "lstar",
                teacher.membership_count - m0,
                teacher.equivalence_count - e0,
                teacher.bookkeeping_count - b0,
            )
            return LStarResult(hypothesis, trace, stats, hypotheses, cexs)
        cexs.append(cex)
        table.handle_counterexample(cex)
        trace.append(table.snapshot())
    raise LearnerError(f"no agreement after {max_rounds} equivalence queries")
