"""Seeded random machines and samples for property tests and benchmarks."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .automata import Dfa, KripkeStructure, Nfa, minimize, words_upto


def random_dfa(rng: np.random.Generator, n: int, alphabet: Sequence[str] = "ab") -> Dfa:
    delta = rng.integers(0, n, size=(n, len(alphabet)))
    accepting = rng.random(n) < 0.5
    return Dfa(tuple(alphabet), delta, accepting, 0)


def random_minimal_dfa(rng: np.random.Generator, n: int, alphabet: Sequence[str] = "ab", tries: int = 10_000) -> Dfa:
    """Rejection-sample until the minimal DFA has exactly ``n`` states."""
    for _ in range(tries):
        d = minimize(random_dfa(rng, n, alphabet))
        if d.n_states == n:
            return d
    raise RuntimeError(f"no minimal {n}-state DFA found in {tries} draws")


def random_nfa(rng: np.random.Generator, n: int, alphabet: Sequence[str] = "ab", density: float = 0.3) -> Nfa:
    delta = {}
    for s in range(n):
        for a in alphabet:
            targets = frozenset(np.flatnonzero(rng.random(n) < density).tolist())
            if targets:
                delta[(s, a)] = targets
    initials = frozenset(np.flatnonzero(rng.random(n) < 0.3).tolist()) or frozenset([0])
    accepting = frozenset(np.flatnonzero(rng.random(n) < 0.4).tolist())
    return Nfa(tuple(alphabet), n, initials, accepting, delta)


def random_kripke(rng: np.random.Generator, n: int, width: int, alphabet: Sequence[str] = "ab") -> KripkeStructure:
    delta = rng.integers(0, n, size=(n, len(alphabet)))
    outputs = rng.random((n, width)) < 0.5
    return KripkeStructure(tuple(alphabet), delta, outputs, 0)


def random_words(rng: np.random.Generator, count: int, max_len: int, alphabet: Sequence[str] = "ab") -> list[str]:
    lengths = rng.integers(0, max_len + 1, size=count)
    return ["".join(alphabet[i] for i in rng.integers(0, len(alphabet), size=int(k))) for k in lengths]


def labeled_upto(target: Dfa, max_len: int) -> tuple[set, set]:
    """Every word up to ``max_len`` split by the target's verdict."""
    words = words_upto(target.alphabet, max_len)
    verdict = target.accepts_many(words)
    return {w for w, v in zip(words, verdict) if v}, {w for w, v in zip(words, verdict) if not v}
