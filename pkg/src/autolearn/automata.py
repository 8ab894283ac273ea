"""Finite automata: data model and exact algorithms.

Words are plain strings over an alphabet of single-character symbols; the
empty string is the empty word. State ids are integers ``0..n-1``.
"""
from __future__ import annotations

import operator
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import _kernels

Word = str


class AutomatonError(ValueError):
    """Malformed automaton or input outside the automaton's alphabet."""


# -- words and alphabets -----------------------------------------------------

def check_alphabet(symbols: Iterable[str]) -> tuple[str, ...]:
    alphabet = tuple(symbols)
    if not alphabet:
        raise AutomatonError("alphabet must be non-empty")
    if len(set(alphabet)) != len(alphabet):
        raise AutomatonError(f"duplicate symbols in alphabet {alphabet!r}")
    for a in alphabet:
        if not isinstance(a, str) or len(a) != 1:
            raise AutomatonError(f"alphabet symbols must be single characters, got {a!r}")
    return alphabet


def check_word(word: Word, alphabet: Sequence[str]) -> Word:
    for a in word:
        if a not in alphabet:
            raise AutomatonError(f"symbol {a!r} of word {word!r} not in alphabet {tuple(alphabet)!r}")
    return word


def shortlex_key(alphabet: Sequence[str]) -> Callable[[Word], tuple]:
    """Sort key: length first, then symbol by symbol in alphabet order."""
    rank = {a: i for i, a in enumerate(alphabet)}
    return lambda w: (len(w), tuple(rank[a] for a in w))


def shortlex_sorted(words: Iterable[Word], alphabet: Sequence[str]) -> list[Word]:
    return sorted(set(words), key=shortlex_key(alphabet))


def prefixes(word: Word) -> list[Word]:
    return [word[:i] for i in range(len(word) + 1)]


def words_upto(alphabet: Sequence[str], max_len: int) -> list[Word]:
    """Every word of length <= max_len, in shortlex order."""
    out = [""]
    layer = [""]
    for _ in range(max_len):
        layer = [w + a for w in layer for a in alphabet]
        out.extend(layer)
    return out


def encode_words(words: Sequence[Word], alphabet: Sequence[str]):
    """Pack words into a ``-1``-padded symbol-index matrix plus lengths."""
    rank = {a: i for i, a in enumerate(alphabet)}
    width = max((len(w) for w in words), default=0)
    matrix = np.full((len(words), max(width, 1)), -1, dtype=np.int64)
    lengths = np.zeros(len(words), dtype=np.int64)
    for i, w in enumerate(words):
        try:
            matrix[i, : len(w)] = [rank[a] for a in w]
        except KeyError as exc:
            raise AutomatonError(f"symbol {exc.args[0]!r} of word {w!r} not in alphabet") from None
        lengths[i] = len(w)
    return matrix, lengths


def render_word(word: Word) -> str:
    return word if word else '""'


# -- DFA ---------------------------------------------------------------------

def _frozen(array, dtype):
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Dfa:
    """Total deterministic acceptor.

    ``delta[s, i]`` is the successor of state ``s`` on ``alphabet[i]``.
    """

    alphabet: tuple[str, ...]
    delta: np.ndarray
    accepting: np.ndarray
    initial: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        delta = _frozen(self.delta, np.int64)
        accepting = _frozen(self.accepting, np.bool_)
        if delta.ndim != 2 or delta.shape[1] != len(self.alphabet):
            raise AutomatonError(
                f"transition table shape {delta.shape} does not match alphabet of size {len(self.alphabet)}"
            )
        n = delta.shape[0]
        if n == 0:
            raise AutomatonError("a DFA needs at least one state")
        if accepting.shape != (n,):
            raise AutomatonError("accepting mask must have one entry per state")
        if delta.size and (delta.min() < 0 or delta.max() >= n):
            raise AutomatonError("transition to a non-existent state")
        if not 0 <= self.initial < n:
            raise AutomatonError(f"initial state {self.initial} out of range")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", accepting)
        object.__setattr__(self, "initial", int(self.initial))

    @classmethod
    def from_table(cls, alphabet, transitions: Mapping[int, Sequence[int]], accepting: Iterable[int], initial=0):
        """Build from ``{state: [succ per symbol]}`` with states ``0..n-1``."""
        n = len(transitions)
        delta = [list(transitions[s]) for s in range(n)]
        mask = np.zeros(n, dtype=np.bool_)
        mask[list(accepting)] = True
        return cls(tuple(alphabet), np.asarray(delta, dtype=np.int64).reshape(n, len(alphabet)), mask, initial)

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def accepting_states(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.accepting).tolist())

    def symbol_index(self, symbol: str) -> int:
        try:
            return self.alphabet.index(symbol)
        except ValueError:
            raise AutomatonError(f"symbol {symbol!r} not in alphabet {self.alphabet!r}") from None

    def step(self, state: int, symbol: str) -> int:
        return int(self.delta[state, self.symbol_index(symbol)])

    def run(self, word: Word, state: Optional[int] = None) -> int:
        s = self.initial if state is None else state
        for a in word:
            s = int(self.delta[s, self.symbol_index(a)])
        return s

    def accepts(self, word: Word) -> bool:
        return bool(self.accepting[self.run(word)])

    def accepts_many(self, words: Sequence[Word]) -> np.ndarray:
        if not words:
            return np.zeros(0, dtype=np.bool_)
        matrix, lengths = encode_words(words, self.alphabet)
        finals = _kernels.run_batch(self.delta, self.initial, matrix, lengths)
        return self.accepting[finals]

    def __repr__(self):
        return f"Dfa(states={self.n_states}, alphabet={''.join(self.alphabet)!r}, accepting={sorted(self.accepting_states)})"


def accepts(dfa: Dfa, word: Word) -> bool:
    return dfa.accepts(word)


def canonical(dfa: Dfa) -> Dfa:
    """Drop unreachable states and renumber in BFS order from the initial state."""
    order, _, _ = _kernels.bfs_tree(dfa.delta, dfa.initial)
    remap = np.full(dfa.n_states, -1, dtype=np.int64)
    remap[order] = np.arange(order.size)
    return Dfa(dfa.alphabet, remap[dfa.delta[order]], dfa.accepting[order], 0)


def isomorphic(a: Dfa, b: Dfa) -> bool:
    ca, cb = canonical(a), canonical(b)
    return (
        ca.alphabet == cb.alphabet
        and ca.n_states == cb.n_states
        and np.array_equal(ca.delta, cb.delta)
        and np.array_equal(ca.accepting, cb.accepting)
    )


def product(a: Dfa, b: Dfa, combine: Callable[[bool, bool], bool]) -> Dfa:
    """Synchronous product restricted to reachable pairs, in canonical numbering."""
    if a.alphabet != b.alphabet:
        raise AutomatonError(f"alphabet mismatch: {a.alphabet!r} vs {b.alphabet!r}")
    nb = b.n_states
    pair_delta = (a.delta[:, None, :] * nb + b.delta[None, :, :]).reshape(a.n_states * nb, -1)
    order, _, _ = _kernels.bfs_tree(pair_delta, a.initial * nb + b.initial)
    accepting = np.array(
        [bool(combine(bool(a.accepting[p // nb]), bool(b.accepting[p % nb]))) for p in order.tolist()],
        dtype=np.bool_,
    )
    remap = np.full(pair_delta.shape[0], -1, dtype=np.int64)
    remap[order] = np.arange(order.size)
    return Dfa(a.alphabet, remap[pair_delta[order]], accepting, 0)


def shortest_accepted(dfa: Dfa) -> Optional[Word]:
    """Shortest accepted word, ties broken by alphabet order; None if empty."""
    order, parent, via = _kernels.bfs_tree(dfa.delta, dfa.initial)
    # BFS visits states in shortlex order of their shortest access words
    hits = np.flatnonzero(dfa.accepting[order])
    if hits.size == 0:
        return None
    s = int(order[hits[0]])
    symbols = []
    while parent[s] != -1:
        symbols.append(dfa.alphabet[via[s]])
        s = int(parent[s])
    return "".join(reversed(symbols))


def counterexample(a: Dfa, b: Dfa) -> Optional[Word]:
    """Shortest word in the symmetric difference of the two languages."""
    return shortest_accepted(product(a, b, operator.xor))


def equivalent(a: Dfa, b: Dfa) -> bool:
    return counterexample(a, b) is None


def access_words(dfa: Dfa) -> dict[int, Word]:
    """Shortlex-least access word of every reachable state."""
    order, parent, via = _kernels.bfs_tree(dfa.delta, dfa.initial)
    words = {}
    for s in order.tolist():
        p = int(parent[s])
        words[s] = "" if p == -1 else words[p] + dfa.alphabet[via[s]]
    return words


def minimize(dfa: Dfa) -> Dfa:
    trimmed = canonical(dfa)
    classes = _kernels.moore_classes(trimmed.delta, trimmed.accepting)
    n = int(classes.max()) + 1
    reps = np.zeros(n, dtype=np.int64)
    # state 0 is the initial one, so the first occurrence keeps BFS order stable
    for s in range(trimmed.n_states - 1, -1, -1):
        reps[classes[s]] = s
    delta = classes[trimmed.delta[reps]]
    return canonical(Dfa(dfa.alphabet, delta, trimmed.accepting[reps], int(classes[0])))


def live_states(dfa: Dfa) -> frozenset[int]:
    """States from which some accepting state is reachable."""
    preds: dict[int, set[int]] = {}
    for s in range(dfa.n_states):
        for t in dfa.delta[s].tolist():
            preds.setdefault(t, set()).add(s)
    live = set(np.flatnonzero(dfa.accepting).tolist())
    queue = deque(live)
    while queue:
        t = queue.popleft()
        for s in preds.get(t, ()):
            if s not in live:
                live.add(s)
                queue.append(s)
    return frozenset(live)


# -- NFA ---------------------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    """Nondeterministic acceptor; missing ``delta`` entries mean no successor."""

    alphabet: tuple[str, ...]
    n_states: int
    initials: frozenset[int]
    accepting: frozenset[int]
    delta: Mapping[tuple[int, str], frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        delta = {}
        for (s, a), targets in self.delta.items():
            targets = frozenset(targets)
            if a not in self.alphabet:
                raise AutomatonError(f"transition on unknown symbol {a!r}")
            if not 0 <= s < self.n_states or any(not 0 <= t < self.n_states for t in targets):
                raise AutomatonError(f"transition ({s}, {a!r}) -> {sorted(targets)} references a missing state")
            if targets:
                delta[(s, a)] = targets
        object.__setattr__(self, "delta", delta)
        for s in self.initials | self.accepting:
            if not 0 <= s < self.n_states:
                raise AutomatonError(f"state {s} out of range")

    def successors(self, states: Iterable[int], symbol: str) -> frozenset[int]:
        out: set[int] = set()
        for s in states:
            out |= self.delta.get((s, symbol), frozenset())
        return frozenset(out)

    def accepts(self, word: Word) -> bool:
        check_word(word, self.alphabet)
        current = self.initials
        for a in word:
            current = self.successors(current, a)
            if not current:
                return False
        return bool(current & self.accepting)

    @property
    def is_deterministic(self) -> bool:
        return len(self.initials) <= 1 and all(len(t) <= 1 for t in self.delta.values())

    def nondeterministic_points(self) -> list[tuple[int, str]]:
        return sorted(k for k, t in self.delta.items() if len(t) > 1)


def nfa_accepts(nfa: Nfa, word: Word) -> bool:
    return nfa.accepts(word)


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction over reachable subsets (the empty subset is the sink)."""
    start = nfa.initials
    index = {start: 0}
    order = [start]
    rows = []
    head = 0
    while head < len(order):
        current = order[head]
        head += 1
        row = []
        for a in nfa.alphabet:
            target = nfa.successors(current, a)
            if target not in index:
                index[target] = len(order)
                order.append(target)
            row.append(index[target])
        rows.append(row)
    accepting = np.array([bool(subset & nfa.accepting) for subset in order], dtype=np.bool_)
    return Dfa(nfa.alphabet, np.asarray(rows, dtype=np.int64).reshape(len(order), -1), accepting, 0)


def dfa_to_nfa(dfa: Dfa) -> Nfa:
    delta = {(s, a): frozenset([int(dfa.delta[s, i])]) for s in range(dfa.n_states) for i, a in enumerate(dfa.alphabet)}
    return Nfa(dfa.alphabet, dfa.n_states, frozenset([dfa.initial]), dfa.accepting_states, delta)


def complete_with_dead_state(nfa: Nfa) -> Dfa:
    """Total DFA from a deterministic, possibly partial, automaton.

    A single non-accepting sink is appended only if a transition is missing.
    """
    if isinstance(nfa, Dfa):
        return nfa
    if not nfa.is_deterministic or len(nfa.initials) != 1:
        raise AutomatonError("complete_with_dead_state needs a deterministic automaton with one initial state")
    n = nfa.n_states
    missing = any((s, a) not in nfa.delta for s in range(n) for a in nfa.alphabet)
    size = n + 1 if missing else n
    delta = np.full((size, len(nfa.alphabet)), n, dtype=np.int64)
    for (s, a), targets in nfa.delta.items():
        delta[s, nfa.alphabet.index(a)] = next(iter(targets))
    accepting = np.zeros(size, dtype=np.bool_)
    accepting[list(nfa.accepting)] = True
    (initial,) = nfa.initials
    return Dfa(nfa.alphabet, delta, accepting, initial)


# -- prefix trees, partitions and quotients ----------------------------------

@dataclass(frozen=True)
class PrefixTree:
    """Prefix-tree acceptor: one state per prefix, numbered in shortlex order."""

    alphabet: tuple[str, ...]
    access: tuple[Word, ...]
    accepting: frozenset[int]

    @property
    def n_states(self) -> int:
        return len(self.access)

    def state_of(self, word: Word) -> Optional[int]:
        return self._index.get(word)

    @property
    def _index(self) -> dict[Word, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {w: i for i, w in enumerate(self.access)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def parent(self, state: int) -> Optional[int]:
        w = self.access[state]
        return None if not w else self._index[w[:-1]]

    def subtree(self, state: int) -> list[int]:
        root = self.access[state]
        return [i for i, w in enumerate(self.access) if w.startswith(root)]

    def as_nfa(self) -> Nfa:
        delta = {}
        for i, w in enumerate(self.access):
            if w:
                delta[(self._index[w[:-1]], w[-1])] = frozenset([i])
        return Nfa(self.alphabet, self.n_states, frozenset([0]), self.accepting, delta)

    def accepts(self, word: Word) -> bool:
        s = self.state_of(word)
        return s is not None and s in self.accepting


def build_prefix_tree(positives: Iterable[Word], alphabet: Sequence[str]) -> PrefixTree:
    alphabet = check_alphabet(alphabet)
    positives = set(positives)
    if not positives:
        raise AutomatonError("prefix tree needs at least one positive word")
    for w in positives:
        check_word(w, alphabet)
    access = tuple(shortlex_sorted((p for w in positives for p in prefixes(w)), alphabet))
    index = {w: i for i, w in enumerate(access)}
    return PrefixTree(alphabet, access, frozenset(index[w] for w in positives))


class StatePartition:
    """Partition of states ``0..n-1`` into disjoint blocks.

    Blocks are kept sorted by their smallest member, which serves as the
    block's representative.
    """

    __slots__ = ("n_states", "blocks", "_owner")

    def __init__(self, n_states: int, blocks: Iterable[Iterable[int]]):
        blocks = [frozenset(b) for b in blocks]
        owner = {}
        for b in blocks:
            if not b:
                raise AutomatonError("partition blocks must be non-empty")
            for s in b:
                if s in owner:
                    raise AutomatonError(f"state {s} appears in two blocks")
                if not 0 <= s < n_states:
                    raise AutomatonError(f"state {s} outside 0..{n_states - 1}")
                owner[s] = b
        if len(owner) != n_states:
            missing = sorted(set(range(n_states)) - set(owner))
            raise AutomatonError(f"partition does not cover states {missing}")
        self.n_states = n_states
        self.blocks = tuple(sorted(blocks, key=min))
        self._owner = owner

    @classmethod
    def identity(cls, n_states: int) -> "StatePartition":
        return cls(n_states, ([s] for s in range(n_states)))

    def block_of(self, state: int) -> frozenset[int]:
        return self._owner[state]

    def representative(self, state: int) -> int:
        return min(self._owner[state])

    def join(self, bi: Iterable[int], bj: Iterable[int]) -> "StatePartition":
        bi, bj = frozenset(bi), frozenset(bj)
        if bi == bj:
            raise ValueError("cannot join a block with itself")
        if bi not in self.blocks or bj not in self.blocks:
            raise AutomatonError("join arguments must be blocks of the partition")
        rest = [b for b in self.blocks if b != bi and b != bj]
        return StatePartition(self.n_states, rest + [bi | bj])

    def detach(self, state: int) -> "StatePartition":
        block = self._owner[state]
        if len(block) == 1:
            return self
        rest = [b for b in self.blocks if b != block]
        return StatePartition(self.n_states, rest + [block - {state}, [state]])

    def __len__(self):
        return len(self.blocks)

    def __eq__(self, other):
        return isinstance(other, StatePartition) and self.n_states == other.n_states and self.blocks == other.blocks

    def __hash__(self):
        return hash((self.n_states, self.blocks))

    def __repr__(self):
        return f"StatePartition({[sorted(b) for b in self.blocks]})"


def quotient(tree: Union[PrefixTree, Nfa], pi: StatePartition) -> Nfa:
    """Automaton on the blocks of ``pi``; may be nondeterministic."""
    nfa = tree.as_nfa() if isinstance(tree, PrefixTree) else tree
    if pi.n_states != nfa.n_states:
        raise AutomatonError(f"partition covers {pi.n_states} states, automaton has {nfa.n_states}")
    block_id = {}
    for i, b in enumerate(pi.blocks):
        for s in b:
            block_id[s] = i
    delta: dict[tuple[int, str], set[int]] = {}
    for (s, a), targets in nfa.delta.items():
        delta.setdefault((block_id[s], a), set()).update(block_id[t] for t in targets)
    return Nfa(
        nfa.alphabet,
        len(pi.blocks),
        frozenset(block_id[s] for s in nfa.initials),
        frozenset(block_id[s] for s in nfa.accepting),
        {k: frozenset(v) for k, v in delta.items()},
    )


# -- Kripke structures -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class KripkeStructure:
    """Deterministic Moore machine with a fixed-width bit vector per state."""

    alphabet: tuple[str, ...]
    delta: np.ndarray
    outputs: np.ndarray
    initial: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        delta = _frozen(self.delta, np.int64)
        outputs = _frozen(self.outputs, np.bool_)
        n = delta.shape[0]
        if delta.ndim != 2 or delta.shape[1] != len(self.alphabet) or n == 0:
            raise AutomatonError(f"transition table shape {delta.shape} does not match alphabet")
        if outputs.ndim != 2 or outputs.shape[0] != n or outputs.shape[1] < 1:
            raise AutomatonError("outputs must be an (n_states, width>=1) bit matrix")
        if delta.min() < 0 or delta.max() >= n or not 0 <= self.initial < n:
            raise AutomatonError("transition or initial state out of range")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "initial", int(self.initial))

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @property
    def width(self) -> int:
        return self.outputs.shape[1]

    def run(self, word: Word) -> int:
        s = self.initial
        for a in word:
            try:
                s = int(self.delta[s, self.alphabet.index(a)])
            except ValueError:
                raise AutomatonError(f"symbol {a!r} not in alphabet {self.alphabet!r}") from None
        return s

    def output(self, word: Word) -> tuple[bool, ...]:
        return tuple(bool(b) for b in self.outputs[self.run(word)])

    def __repr__(self):
        return f"KripkeStructure(states={self.n_states}, width={self.width})"


def bit_slice(k: KripkeStructure, c: int) -> Dfa:
    if not 0 <= c < k.width:
        raise AutomatonError(f"bit index {c} outside 0..{k.width - 1}")
    return Dfa(k.alphabet, k.delta, k.outputs[:, c], k.initial)


def slice_product(slices: Sequence[Dfa]) -> KripkeStructure:
    """Reachable product of one-bit acceptors; bit c is slice c's acceptance."""
    if not slices:
        raise AutomatonError("need at least one slice")
    alphabet = slices[0].alphabet
    if any(s.alphabet != alphabet for s in slices):
        raise AutomatonError("all slices must share one alphabet")
    start = tuple(s.initial for s in slices)
    index = {start: 0}
    order = [start]
    rows = []
    head = 0
    while head < len(order):
        current = order[head]
        head += 1
        row = []
        for i in range(len(alphabet)):
            nxt = tuple(int(s.delta[q, i]) for s, q in zip(slices, current))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
            row.append(index[nxt])
        rows.append(row)
    outputs = np.array([[bool(s.accepting[q]) for s, q in zip(slices, tup)] for tup in order], dtype=np.bool_)
    return KripkeStructure(alphabet, np.asarray(rows, dtype=np.int64), outputs, 0)


def kripke_counterexample(a: KripkeStructure, b: KripkeStructure) -> Optional[Word]:
    """Shortest word after which the two structures' outputs differ."""
    if a.alphabet != b.alphabet or a.width != b.width:
        raise AutomatonError("structures differ in alphabet or output width")
    nb = b.n_states
    pair_delta = (a.delta[:, None, :] * nb + b.delta[None, :, :]).reshape(a.n_states * nb, -1)
    order, parent, via = _kernels.bfs_tree(pair_delta, a.initial * nb + b.initial)
    differs = np.any(a.outputs[order // nb] != b.outputs[order % nb], axis=1)
    hits = np.flatnonzero(differs)
    if hits.size == 0:
        return None
    s = int(order[hits[0]])
    symbols = []
    while parent[s] != -1:
        symbols.append(a.alphabet[via[s]])
        s = int(parent[s])
    return "".join(reversed(symbols))
