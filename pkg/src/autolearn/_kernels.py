"""Array kernels behind the automata core.

Each kernel exists twice: a numba ``@njit`` version and a plain numpy
version. ``AUTOLEARN_PURE_NUMPY=1`` (or a missing numba) selects the numpy
path at import time; both are always importable for cross-checking.

Transition tables are ``int64`` arrays of shape ``(n_states, n_symbols)``;
words are rows of an ``int64`` matrix padded with ``-1``.
"""
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional extra
    HAVE_NUMBA = False

PURE_NUMPY = os.environ.get("AUTOLEARN_PURE_NUMPY", "").lower() in ("1", "true", "yes")
USE_NUMBA = HAVE_NUMBA and not PURE_NUMPY

JIT_OPTIONS = {"nogil": True, "cache": True}


# -- numpy implementations ---------------------------------------------------

def run_batch_numpy(delta, initial, words, lengths):
    """Final state reached by every word (vectorised over words)."""
    states = np.full(words.shape[0], initial, dtype=np.int64)
    for t in range(words.shape[1]):
        live = lengths > t
        if not live.any():
            break
        states[live] = delta[states[live], words[live, t]]
    return states


def bfs_tree_numpy(delta, initial):
    """Breadth-first visit with symbols in column order.

    Returns ``(order, parent, via)``: ``order`` lists reachable states in
    visit order; ``parent[s]``/``via[s]`` give the BFS-tree edge into ``s``
    (``-1`` for the root and for unreachable states).
    """
    n, k = delta.shape
    parent = np.full(n, -1, dtype=np.int64)
    via = np.full(n, -1, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    order = [initial]
    seen[initial] = True
    head = 0
    while head < len(order):
        s = order[head]
        head += 1
        for a in range(k):
            t = delta[s, a]
            if not seen[t]:
                seen[t] = True
                parent[t] = s
                via[t] = a
                order.append(t)
    return np.asarray(order, dtype=np.int64), parent, via


def moore_classes_numpy(delta, accepting):
    """Coarsest stable partition refining acceptance, as class ids."""
    classes = np.unique(accepting.astype(np.int64), return_inverse=True)[1].ravel()
    count = int(classes.max()) + 1 if classes.size else 0
    while True:
        signature = np.column_stack([classes, classes[delta]])
        _, refined = np.unique(signature, axis=0, return_inverse=True)
        refined = refined.ravel()
        new_count = int(refined.max()) + 1
        if new_count == count:
            return _first_seen_numbering(refined)
        classes, count = refined, new_count


def _first_seen_numbering(classes):
    out = np.empty_like(classes)
    mapping = {}
    for i, c in enumerate(classes.tolist()):
        out[i] = mapping.setdefault(c, len(mapping))
    return out


# -- numba implementations ---------------------------------------------------

if HAVE_NUMBA:

    @njit(**JIT_OPTIONS)
    def run_batch_numba(delta, initial, words, lengths):
        out = np.empty(words.shape[0], dtype=np.int64)
        for i in range(words.shape[0]):
            s = initial
            for t in range(lengths[i]):
                s = delta[s, words[i, t]]
            out[i] = s
        return out

    @njit(**JIT_OPTIONS)
    def bfs_tree_numba(delta, initial):
        n, k = delta.shape
        parent = np.full(n, -1, dtype=np.int64)
        via = np.full(n, -1, dtype=np.int64)
        seen = np.zeros(n, dtype=np.bool_)
        order = np.empty(n, dtype=np.int64)
        order[0] = initial
        seen[initial] = True
        head = 0
        tail = 1
        while head < tail:
            s = order[head]
            head += 1
            for a in range(k):
                t = delta[s, a]
                if not seen[t]:
                    seen[t] = True
                    parent[t] = s
                    via[t] = a
                    order[tail] = t
                    tail += 1
        return order[:tail].copy(), parent, via

    @njit(**JIT_OPTIONS)
    def _regroup(keys):
        """Dense ids for ``keys`` by sorting, so equal keys share an id."""
        order = np.argsort(keys, kind="mergesort")
        out = np.empty(keys.shape[0], dtype=np.int64)
        count = 0
        for i in range(keys.shape[0]):
            if i > 0 and keys[order[i]] != keys[order[i - 1]]:
                count += 1
            out[order[i]] = count
        return out, count + 1

    @njit(**JIT_OPTIONS)
    def moore_classes_numba(delta, accepting):
        n, k = delta.shape
        classes = np.zeros(n, dtype=np.int64)
        for s in range(n):
            if accepting[s] != accepting[0]:
                classes[s] = 1
        count = classes.max() + 1 if n else 0
        while True:
            # refine by one successor column at a time; keys c*n+d stay in int64
            refined = classes.copy()
            new_count = count
            for a in range(k):
                keys = refined * n + classes[delta[:, a]]
                refined, new_count = _regroup(keys)
            if new_count == count:
                break
            classes, count = refined, new_count
        seen = np.full(n, -1, dtype=np.int64)
        out = np.empty(n, dtype=np.int64)
        m = 0
        for s in range(n):
            c = classes[s]
            if seen[c] == -1:
                seen[c] = m
                m += 1
            out[s] = seen[c]
        return out


if USE_NUMBA:
    run_batch = run_batch_numba
    bfs_tree = bfs_tree_numba
    moore_classes = moore_classes_numba
else:
    run_batch = run_batch_numpy
    bfs_tree = bfs_tree_numpy
    moore_classes = moore_classes_numpy


def backend():
    return "numba" if USE_NUMBA else "numpy"
