"""Minimally adequate teachers synthesized from a hidden target."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .automata import (
    AutomatonError,
    Dfa,
    KripkeStructure,
    Word,
    check_word,
    counterexample,
    kripke_counterexample,
    render_word,
)


class LabeledExample(NamedTuple):
    word: Word
    label: bool

    @property
    def sign(self) -> str:
        return "+" if self.label else "-"

    def __str__(self):
        return f"({render_word(self.word)}, {self.sign})"


@dataclass
class QueryStats:
    """Per-run query counts; ``bookkeeping`` counts answers served from cache."""

    algorithm: str = ""
    membership: int = 0
    equivalence: int = 0
    bookkeeping: int = 0

    @property
    def total_membership_calls(self) -> int:
        return self.membership + self.bookkeeping

    def as_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "membership": self.membership,
            "equivalence": self.equivalence,
            "bookkeeping": self.bookkeeping,
        }


class Teacher:
    """Answers membership and equivalence queries about a hidden DFA.

    Repeated membership queries are answered from a cache and counted as
    bookkeeping rather than membership. Every query is appended to
    ``transcript`` in the line format ``M <word> -> 0|1`` / ``E -> yes|cex <word>``.
    """

    def __init__(self, target: Dfa):
        self._target = target
        self.alphabet = target.alphabet
        self.membership_count = 0
        self.equivalence_count = 0
        self.bookkeeping_count = 0
        self.transcript: list[str] = []
        self._cache: dict[Word, bool] = {}

    def membership(self, word: Word) -> bool:
        cached = self._cache.get(word)
        if cached is not None:
            self.bookkeeping_count += 1
            return cached
        check_word(word, self.alphabet)
        answer = self._target.accepts(word)
        self._cache[word] = answer
        self.membership_count += 1
        self.transcript.append(f"M {render_word(word)} -> {int(answer)}")
        return answer

    def equivalence(self, hypothesis: Dfa) -> Optional[Word]:
        """None when the hypothesis is correct, else the shortest counterexample."""
        if not isinstance(hypothesis, Dfa):
            raise AutomatonError("equivalence queries need a total DFA hypothesis")
        if hypothesis.alphabet != self.alphabet:
            raise AutomatonError(f"hypothesis alphabet {hypothesis.alphabet!r} differs from {self.alphabet!r}")
        self.equivalence_count += 1
        cex = counterexample(hypothesis, self._target)
        self.transcript.append("E -> yes" if cex is None else f"E -> cex {render_word(cex)}")
        return cex

    def label(self, word: Word) -> LabeledExample:
        """True label of ``word``; not metered (examples are learner input)."""
        return LabeledExample(check_word(word, self.alphabet), self._target.accepts(word))

    def stats(self, algorithm: str = "") -> QueryStats:
        return QueryStats(algorithm, self.membership_count, self.equivalence_count, self.bookkeeping_count)


def membership(teacher: Teacher, word: Word) -> bool:
    return teacher.membership(word)


def equivalence(teacher: Teacher, hypothesis: Dfa) -> Optional[Word]:
    return teacher.equivalence(hypothesis)


def example_stream(teacher: Teacher, schedule: Iterable[Word]) -> list[LabeledExample]:
    return [teacher.label(w) for w in schedule]


class KripkeTeacher:
    """Teacher for a hidden k-bit Kripke structure, queried one bit at a time."""

    def __init__(self, target: KripkeStructure):
        self._target = target
        self.alphabet = target.alphabet
        self.width = target.width
        self.membership_counts = [0] * target.width
        self.equivalence_count = 0
        self.bookkeeping_count = 0
        self.transcript: list[str] = []
        self._cache: dict[tuple[int, Word], bool] = {}

    @property
    def membership_count(self) -> int:
        return sum(self.membership_counts)

    def membership(self, bit: int, word: Word) -> bool:
        if not 0 <= bit < self.width:
            raise AutomatonError(f"bit index {bit} outside 0..{self.width - 1}")
        key = (bit, word)
        cached = self._cache.get(key)
        if cached is not None:
            self.bookkeeping_count += 1
            return cached
        check_word(word, self.alphabet)
        answer = bool(self._target.outputs[self._target.run(word), bit])
        self._cache[key] = answer
        self.membership_counts[bit] += 1
        self.transcript.append(f"K{bit + 1} {render_word(word)} -> {int(answer)}")
        return answer

    def equivalence(self, hypothesis: KripkeStructure) -> Optional[Word]:
        self.equivalence_count += 1
        cex = kripke_counterexample(hypothesis, self._target)
        self.transcript.append("E -> yes" if cex is None else f"E -> cex {render_word(cex)}")
        return cex

    def slice(self, bit: int) -> "BitTeacher":
        return BitTeacher(self, bit)

    def stats(self, algorithm: str = "") -> QueryStats:
        return QueryStats(algorithm, self.membership_count, self.equivalence_count, self.bookkeeping_count)


def kripke_membership(teacher: KripkeTeacher, bit: int, word: Word) -> bool:
    return teacher.membership(bit, word)


class BitTeacher:
    """One-bit view of a KripkeTeacher, usable wherever a DFA teacher is."""

    def __init__(self, parent: KripkeTeacher, bit: int):
        if not 0 <= bit < parent.width:
            raise AutomatonError(f"bit index {bit} outside 0..{parent.width - 1}")
        self.parent = parent
        self.bit = bit
        self.alphabet = parent.alphabet

    def membership(self, word: Word) -> bool:
        return self.parent.membership(self.bit, word)
