"""Reference implementations that share no code with the library's algorithms."""
from itertools import product as cartesian


def table_filling_classes(delta, accepting, alphabet_size):
    """Myhill-Nerode table filling on reachable states; returns the number of classes."""
    n = len(accepting)
    reach = {0}
    stack = [0]
    while stack:
        s = stack.pop()
        for a in range(alphabet_size):
            t = delta[s][a]
            if t not in reach:
                reach.add(t)
                stack.append(t)
    states = sorted(reach)
    marked = {(p, q): accepting[p] != accepting[q] for p in states for q in states if p < q}
    changed = True
    while changed:
        changed = False
        for (p, q), m in marked.items():
            if m:
                continue
            for a in range(alphabet_size):
                x, y = sorted((delta[p][a], delta[q][a]))
                if x != y and marked[(x, y)]:
                    marked[(p, q)] = True
                    changed = True
                    break
    # count classes with union-find over unmarked pairs
    parent = {s: s for s in states}

    def find(s):
        while parent[s] != s:
            s = parent[s]
        return s

    for (p, q), m in marked.items():
        if not m:
            parent[find(q)] = find(p)
    return len({find(s) for s in states})


def words(alphabet, max_len):
    for k in range(max_len + 1):
        for t in cartesian(alphabet, repeat=k):
            yield "".join(t)


def dfa_accepts(delta, accepting, initial, alphabet, word):
    s = initial
    for a in word:
        s = delta[s][alphabet.index(a)]
    return bool(accepting[s])


def nfa_path_accepts(nfa, word):
    """Depth-first search over individual runs, no subset bookkeeping."""

    def walk(state, i):
        if i == len(word):
            return state in nfa.accepting
        return any(walk(t, i + 1) for t in nfa.delta.get((state, word[i]), ()))

    return any(walk(s, 0) for s in nfa.initials)


def same_language_upto(accepts_a, accepts_b, alphabet, max_len):
    """First word (shortlex) on which the two predicates differ, or None."""
    for w in words(alphabet, max_len):
        if accepts_a(w) != accepts_b(w):
            return w
    return None
