"""RPNI state merging over a prefix-tree acceptor, and incremental RPNI2."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .automata import (
    AutomatonError,
    Dfa,
    Nfa,
    PrefixTree,
    StatePartition,
    Word,
    build_prefix_tree,
    check_alphabet,
    check_word,
    determinize,
    minimize,
    prefixes,
    quotient,
    render_word,
    shortlex_key,
    shortlex_sorted,
)
from .teacher import LabeledExample, QueryStats


class InconsistentSample(AutomatonError):
    """A word is labeled both positive and negative."""


@dataclass(frozen=True)
class Sample:
    positives: frozenset
    negatives: frozenset
    alphabet: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "positives", frozenset(self.positives))
        object.__setattr__(self, "negatives", frozenset(self.negatives))
        both = self.positives & self.negatives
        if both:
            raise InconsistentSample(f"words labeled both ways: {sorted(both)}")
        if self.alphabet is not None:
            alphabet = check_alphabet(self.alphabet)
            for w in self.positives | self.negatives:
                check_word(w, alphabet)
            object.__setattr__(self, "alphabet", alphabet)

    @property
    def symbols(self) -> tuple[str, ...]:
        """Declared alphabet, else the sorted symbols that occur in the words."""
        if self.alphabet is not None:
            return self.alphabet
        found = sorted({a for w in self.positives | self.negatives for a in w})
        if not found:
            raise AutomatonError("cannot infer an alphabet from a sample without symbols")
        return tuple(found)

    def with_example(self, x: LabeledExample) -> "Sample":
        if x.label:
            return Sample(self.positives | {x.word}, self.negatives, self.alphabet)
        return Sample(self.positives, self.negatives | {x.word}, self.alphabet)

    def examples(self) -> list[LabeledExample]:
        key = shortlex_key(self.symbols)
        words = sorted(self.positives | self.negatives, key=key)
        return [LabeledExample(w, w in self.positives) for w in words]


@dataclass
class MergeState:
    tree: PrefixTree
    pi: StatePartition

    @property
    def order(self) -> list[int]:
        return list(range(self.tree.n_states))

    def quotient(self) -> Nfa:
        return quotient(self.tree, self.pi)

    def block_words(self) -> list[list[Word]]:
        return [[self.tree.access[s] for s in sorted(b)] for b in self.pi.blocks]

    def render(self) -> str:
        return " ".join("{" + ",".join(render_word(w) for w in ws) + "}" for ws in self.block_words())


@dataclass(frozen=True)
class MergeAttempt:
    state: Word
    block: Word
    accepted: bool
    violations: tuple[Word, ...] = ()
    missed: tuple[Word, ...] = ()
    members: tuple[Word, ...] = ()

    @property
    def pair(self) -> tuple[Word, Word]:
        return (self.block, self.state)

    def joins(self, a: Word, b: Word) -> bool:
        """Whether this attempt merges the blocks holding ``a`` and ``b``."""
        group = set(self.members or (self.block,))
        return (a in group and b == self.state) or (b in group and a == self.state)

    def render(self) -> str:
        members = self.members or (self.block,)
        left = render_word(members[0]) if len(members) == 1 else "{" + ",".join(map(render_word, members)) + "}"
        head = f"join({left}, {render_word(self.state)})"
        if self.accepted:
            return f"{head}: accepted"
        parts = []
        if self.violations:
            parts.append("accepts " + " ".join(render_word(w) for w in self.violations))
        if self.missed:
            parts.append("rejects " + " ".join(render_word(w) for w in self.missed))
        return f"{head}: rejected, {'; '.join(parts)}"


@dataclass(frozen=True)
class SplitStep:
    state: Word

    def render(self) -> str:
        return f"split {render_word(self.state)}"


def shortlex_prefixes(positives: Iterable[Word], alphabet: Sequence[str]) -> list[Word]:
    return shortlex_sorted((p for w in positives for p in prefixes(w)), alphabet)


def join(pi: StatePartition, bi, bj) -> StatePartition:
    return pi.join(bi, bj)


def _violations(nfa: Nfa, sample: Sample) -> tuple[tuple[Word, ...], tuple[Word, ...]]:
    key = shortlex_key(nfa.alphabet)
    bad = tuple(sorted((w for w in sample.negatives if nfa.accepts(w)), key=key))
    missed = tuple(sorted((w for w in sample.positives if not nfa.accepts(w)), key=key))
    return bad, missed


def consistent_with_negatives(tree: PrefixTree, pi: StatePartition, negatives: Iterable[Word]) -> bool:
    nfa = quotient(tree, pi)
    return not any(nfa.accepts(w) for w in negatives)


def _consistent(tree, pi, sample) -> bool:
    bad, missed = _violations(quotient(tree, pi), sample)
    return not bad and not missed


def _candidates(tree: PrefixTree, pi: StatePartition, u: int) -> list:
    """Earlier blocks: the tree parent's block first, then the rest by representative."""
    own = pi.block_of(u)
    earlier = [b for b in pi.blocks if min(b) < u and b != own]
    parent = tree.parent(u)
    if parent is not None:
        pb = pi.block_of(parent)
        if pb in earlier:
            earlier.remove(pb)
            earlier.insert(0, pb)
    return earlier


def rpni_merge(state: MergeState, sample: Sample, trace: list) -> MergeState:
    """One pass over block representatives in shortlex order (λ's block skipped)."""
    tree, pi = state.tree, state.pi
    for u in [min(b) for b in pi.blocks]:
        if u == 0 or min(pi.block_of(u)) != u:
            continue
        for block in _candidates(tree, pi, u):
            trial = pi.join(block, pi.block_of(u))
            bad, missed = _violations(quotient(tree, trial), sample)
            ok = not bad and not missed
            members = tuple(tree.access[s] for s in sorted(block))
            trace.append(MergeAttempt(tree.access[u], tree.access[min(block)], ok, bad, missed, members))
            if ok:
                pi = trial
                break
    return MergeState(tree, pi)


@dataclass
class RpniResult:
    hypothesis: Dfa
    state: MergeState
    trace: list
    stats: QueryStats = field(default_factory=lambda: QueryStats("rpni"))
    splits: list[Word] = field(default_factory=list)

    @property
    def attempts(self) -> list[MergeAttempt]:
        return [t for t in self.trace if isinstance(t, MergeAttempt)]

    def render_trace(self) -> str:
        return "\n".join(t if isinstance(t, str) else t.render() for t in self.trace)


def _result_dfa(state: MergeState) -> Dfa:
    return minimize(determinize(state.quotient()))


def _initial_state(sample: Sample, alphabet) -> MergeState:
    if sample.positives:
        tree = build_prefix_tree(sample.positives, alphabet)
    else:
        tree = PrefixTree(check_alphabet(alphabet), ("",), frozenset())
    return MergeState(tree, StatePartition.identity(tree.n_states))


def rpni_run(sample: Sample, alphabet: Optional[Sequence[str]] = None) -> RpniResult:
    """Merge prefix-tree states in shortlex order, keeping each join that stays consistent."""
    alphabet = tuple(alphabet) if alphabet is not None else sample.symbols
    state = _initial_state(sample, alphabet)
    trace: list = [f"# prefix tree: {state.render()}"]
    state = rpni_merge(state, sample, trace)
    trace.append(f"# final partition: {state.render()}")
    return RpniResult(_result_dfa(state), state, trace, QueryStats("rpni"))


def _extend_tree(state: MergeState, word: Word) -> MergeState:
    """Grow the tree by ``word``; old states keep their blocks, new ones are singletons."""
    old = state.tree
    accepted = [old.access[s] for s in old.accepting] + [word]
    tree = build_prefix_tree(accepted, old.alphabet)
    index = {w: i for i, w in enumerate(tree.access)}
    blocks = [[index[old.access[s]] for s in b] for b in state.pi.blocks]
    fresh = [[i] for i, w in enumerate(tree.access) if old.state_of(w) is None]
    return MergeState(tree, StatePartition(tree.n_states, blocks + fresh))


def rpni2_split(state: MergeState, sample: Sample, x: LabeledExample) -> tuple[MergeState, list[Word]]:
    """Detach states until the quotient is deterministic and consistent.

    Affected states are the subtree under the shortest proper prefix of ``x``
    lying in a merged block, visited in reverse shortlex order; all other
    merged states follow if that is not enough.
    """
    tree, pi = state.tree, state.pi

    def done(p):
        q = quotient(tree, p)
        return q.is_deterministic and _consistent(tree, p, sample)

    if done(pi):
        return state, []

    order: list[int] = []
    for p in prefixes(x.word)[1:]:
        s = tree.state_of(p)
        if s is None:
            break
        if len(pi.block_of(s)) > 1:
            order = sorted(tree.subtree(s), reverse=True)
            break
    order += [s for s in range(tree.n_states - 1, -1, -1) if s not in order]
    split: list[Word] = []
    for s in order:
        if done(pi):
            break
        if len(pi.block_of(s)) == 1:
            continue
        pi = pi.detach(s)
        split.append(tree.access[s])
    return MergeState(tree, pi), split


def rpni2_run(sample: Sample, prior: MergeState, x: LabeledExample) -> RpniResult:
    """Fold one new example into a prior merge state."""
    check_word(x.word, prior.tree.alphabet)
    opposite = sample.negatives if x.label else sample.positives
    if x.word in opposite:
        raise InconsistentSample(f"example {x} contradicts the sample")
    new_sample = sample.with_example(x)
    trace: list = [f"# prior partition: {prior.render()}", f"# new example {x}"]
    if prior.quotient().accepts(x.word) == x.label:
        trace.append("# consistent with the prior quotient; unchanged")
        return RpniResult(_result_dfa(prior), prior, trace, QueryStats("rpni2"))
    state = prior
    # positives folded in earlier without a repair are not in the tree yet
    for w in shortlex_sorted(new_sample.positives, prior.tree.alphabet):
        if state.tree.state_of(w) not in state.tree.accepting:
            state = _extend_tree(state, w)
    state, split = rpni2_split(state, new_sample, x)
    trace.extend(SplitStep(w) for w in split)
    trace.append(f"# after splitting: {state.render()}")
    state = rpni_merge(state, new_sample, trace)
    trace.append(f"# final partition: {state.render()}")
    return RpniResult(_result_dfa(state), state, trace, QueryStats("rpni2"), split)


def rpni2_stream(sample: Sample, examples: Iterable[LabeledExample], alphabet=None) -> RpniResult:
    """RPNI on ``sample``, then fold in each example in order."""
    result = rpni_run(sample, alphabet)
    trace = list(result.trace)
    splits: list[Word] = []
    for x in examples:
        result = rpni2_run(sample, result.state, x)
        sample = sample.with_example(x)
        trace.extend(result.trace)
        splits.extend(result.splits)
    return RpniResult(result.hypothesis, result.state, trace, QueryStats("rpni2"), splits)
