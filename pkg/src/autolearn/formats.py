"""Line-oriented text formats and DOT export.

All formats are UTF-8, LF-terminated, with ``#`` comment lines and blank
lines ignored (except in word lists, where a blank line is the empty word).

DFA::

    a b                 # alphabet header
    q0 1 1 q1 q0        # <id> <initial> <accepting> <succ per symbol>

Kripke: the accepting column becomes a fixed-width bit string.
Samples: ``+ <word>`` / ``- <word>``; the empty word is ``+ `` (sign, space).
"""
from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .automata import (
    AutomatonError,
    Dfa,
    KripkeStructure,
    Nfa,
    Word,
    check_alphabet,
    render_word,
    shortlex_key,
)
from .teacher import LabeledExample


class ParseError(AutomatonError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _content_lines(text: str):
    for no, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield no, line


def _parse_machine(text: str, kind: str):
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError(f"empty {kind} file: missing alphabet header", 1)
    header_no, header = lines[0]
    try:
        alphabet = check_alphabet(header.split())
    except AutomatonError as exc:
        raise ParseError(f"bad alphabet header: {exc}", header_no) from None
    k = len(alphabet)
    rows = []
    ids: dict[str, int] = {}
    for no, line in lines[1:]:
        fields = line.split()
        if len(fields) != 3 + k:
            what = "missing successor" if len(fields) < 3 + k else "too many columns"
            raise ParseError(f"{what}: expected {3 + k} fields for a {k}-symbol alphabet, got {len(fields)}", no)
        sid = fields[0]
        if sid in ids:
            raise ParseError(f"duplicate state id {sid!r}", no)
        ids[sid] = len(ids)
        rows.append((no, fields))
    if not rows:
        raise ParseError(f"{kind} has no states", header_no)
    n = len(rows)
    delta = np.zeros((n, k), dtype=np.int64)
    initials = []
    marks = []
    for i, (no, fields) in enumerate(rows):
        if fields[1] not in ("0", "1"):
            raise ParseError(f"initial flag must be 0 or 1, got {fields[1]!r}", no)
        if fields[1] == "1":
            initials.append(i)
        marks.append((no, fields[2]))
        for j, succ in enumerate(fields[3:]):
            if succ not in ids:
                raise ParseError(f"unknown successor state {succ!r} on symbol {alphabet[j]!r}", no)
            delta[i, j] = ids[succ]
    if len(initials) != 1:
        raise ParseError(f"expected exactly one initial state, found {len(initials)}", rows[0][0] if not initials else rows[initials[1]][0])
    return alphabet, delta, marks, initials[0]


def parse_dfa(text: str) -> Dfa:
    alphabet, delta, marks, initial = _parse_machine(text, "DFA")
    accepting = []
    for no, flag in marks:
        if flag not in ("0", "1"):
            raise ParseError(f"accepting flag must be 0 or 1, got {flag!r}", no)
        accepting.append(flag == "1")
    return Dfa(alphabet, delta, np.array(accepting, dtype=np.bool_), initial)


def emit_dfa(dfa: Dfa) -> str:
    lines = [" ".join(dfa.alphabet)]
    for s in range(dfa.n_states):
        succ = " ".join(f"q{t}" for t in dfa.delta[s].tolist())
        lines.append(f"q{s} {int(s == dfa.initial)} {int(dfa.accepting[s])} {succ}")
    return "\n".join(lines) + "\n"


def parse_kripke(text: str) -> KripkeStructure:
    alphabet, delta, marks, initial = _parse_machine(text, "Kripke structure")
    width = None
    outputs = []
    for no, bits in marks:
        if not re.fullmatch(r"[01]+", bits):
            raise ParseError(f"output must be a bit string, got {bits!r}", no)
        if width is None:
            width = len(bits)
        elif len(bits) != width:
            raise ParseError(f"output width {len(bits)} differs from {width}", no)
        outputs.append([b == "1" for b in bits])
    return KripkeStructure(alphabet, delta, np.array(outputs, dtype=np.bool_), initial)


def emit_kripke(k: KripkeStructure) -> str:
    lines = [" ".join(k.alphabet)]
    for s in range(k.n_states):
        bits = "".join(str(int(b)) for b in k.outputs[s])
        succ = " ".join(f"q{t}" for t in k.delta[s].tolist())
        lines.append(f"q{s} {int(s == k.initial)} {bits} {succ}")
    return "\n".join(lines) + "\n"


_SAMPLE_LINE = re.compile(r"([+-]) (\S*)")


def parse_labeled(text: str) -> list[LabeledExample]:
    """Ordered ``+``/``-`` records, duplicates kept."""
    out = []
    for no, line in _content_lines(text):
        m = _SAMPLE_LINE.fullmatch(line)
        if m is None:
            raise ParseError(f"expected '+ <word>' or '- <word>', got {line!r}", no)
        out.append(LabeledExample(m.group(2), m.group(1) == "+"))
    return out


def parse_samples(text: str, alphabet: Optional[Sequence[str]] = None):
    from .rpni import InconsistentSample, Sample

    positives, negatives = set(), set()
    for ex in parse_labeled(text):
        (positives if ex.label else negatives).add(ex.word)
    both = positives & negatives
    if both:
        raise InconsistentSample(f"words labeled both ways: {sorted(both)}")
    return Sample(positives, negatives, tuple(alphabet) if alphabet else None)


def emit_labeled(examples: Iterable[LabeledExample]) -> str:
    return "".join(f"{ex.sign} {ex.word}\n" for ex in examples)


def emit_samples(sample) -> str:
    """Positives then negatives, each in shortlex order."""
    symbols = sample.alphabet or sorted({a for w in sample.positives | sample.negatives for a in w})
    key = shortlex_key(symbols)
    pos = sorted(sample.positives, key=key)
    neg = sorted(sample.negatives, key=key)
    return emit_labeled([LabeledExample(w, True) for w in pos] + [LabeledExample(w, False) for w in neg])


def parse_words(text: str) -> list[Word]:
    """One word per line; a blank line or ``""`` is the empty word, ``#`` starts a comment."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    out = []
    for raw in lines:
        line = raw.rstrip("\r").strip()
        if line.startswith("#"):
            continue
        out.append("" if line in ("", '""') else line)
    return out


def emit_words(words: Iterable[Word]) -> str:
    return "".join(f"{render_word(w)}\n" for w in words)


def _dot_word(symbol: str) -> str:
    return symbol.replace("\\", "\\\\").replace('"', '\\"')


def emit_dot(machine: Union[Dfa, Nfa, KripkeStructure], name: str = "automaton") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  __start [shape=point];"]
    edges = []
    if isinstance(machine, Dfa):
        for s in range(machine.n_states):
            shape = "doublecircle" if machine.accepting[s] else "circle"
            lines.append(f'  q{s} [shape={shape}, label="q{s}"];')
        lines.append(f"  __start -> q{machine.initial};")
        for s in range(machine.n_states):
            for i, a in enumerate(machine.alphabet):
                edges.append((s, int(machine.delta[s, i]), a))
    elif isinstance(machine, KripkeStructure):
        for s in range(machine.n_states):
            bits = "".join(str(int(b)) for b in machine.outputs[s])
            lines.append(f'  q{s} [shape=circle, label="q{s}\\n{bits}"];')
        lines.append(f"  __start -> q{machine.initial};")
        for s in range(machine.n_states):
            for i, a in enumerate(machine.alphabet):
                edges.append((s, int(machine.delta[s, i]), a))
    elif isinstance(machine, Nfa):
        for s in range(machine.n_states):
            shape = "doublecircle" if s in machine.accepting else "circle"
            lines.append(f'  q{s} [shape={shape}, label="q{s}"];')
        for s in sorted(machine.initials):
            lines.append(f"  __start -> q{s};")
        for (s, a), targets in sorted(machine.delta.items()):
            for t in sorted(targets):
                edges.append((s, t, a))
    else:
        raise TypeError(f"cannot render {type(machine).__name__} as DOT")
    for s, t, a in edges:
        lines.append(f'  q{s} -> q{t} [label="{_dot_word(a)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
