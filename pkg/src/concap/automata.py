"""Finite automata compiled from constraint regexes.

Thompson construction over symbol labels, plus a subset-construction DFA.
The DFA is what makes counting sound: every accepted string corresponds to
exactly one DFA path, so path counts are distinct-string counts even when
the source regex is ambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .dsl import Concat, Epsilon, Regex, Star, Symbol, SystemDef, Union, DslError


@dataclass
class Nfa:
    start: int
    accept: int
    # label edges: (state, label) -> [states]; eps edges: state -> [states]
    edges: dict[tuple[int, str], list[int]]
    eps: dict[int, list[int]]
    n_states: int


def build_nfa(expr: Regex) -> Nfa:
    edges: dict[tuple[int, str], list[int]] = {}
    eps: dict[int, list[int]] = {}
    counter = [0]

    def new_state() -> int:
        counter[0] += 1
        return counter[0] - 1

    def add_eps(a: int, b: int) -> None:
        eps.setdefault(a, []).append(b)

    def walk(node: Regex) -> tuple[int, int]:
        match node:
            case Symbol(label):
                a, b = new_state(), new_state()
                edges.setdefault((a, label), []).append(b)
                return a, b
            case Epsilon():
                a, b = new_state(), new_state()
                add_eps(a, b)
                return a, b
            case Concat(l, r):
                la, lb = walk(l)
                ra, rb = walk(r)
                add_eps(lb, ra)
                return la, rb
            case Union(l, r):
                la, lb = walk(l)
                ra, rb = walk(r)
                a, b = new_state(), new_state()
                add_eps(a, la)
                add_eps(a, ra)
                add_eps(lb, b)
                add_eps(rb, b)
                return a, b
            case Star(c):
                ca, cb = walk(c)
                a, b = new_state(), new_state()
                add_eps(a, ca)
                add_eps(a, b)
                add_eps(cb, ca)
                add_eps(cb, b)
                return a, b
        raise TypeError(f"not a regex node: {node!r}")

    start, accept = walk(expr)
    return Nfa(start, accept, edges, eps, counter[0])


def _closure(nfa: Nfa, states: frozenset[int]) -> frozenset[int]:
    stack = list(states)
    out = set(states)
    while stack:
        s = stack.pop()
        for t in nfa.eps.get(s, ()):
            if t not in out:
                out.add(t)
                stack.append(t)
    return frozenset(out)


@dataclass
class Dfa:
    """Deterministic automaton over the label alphabet."""

    start: int
    accepting: frozenset[int]
    transitions: list[dict[str, int]]  # state -> {label: state}

    @property
    def n_states(self) -> int:
        return len(self.transitions)


def determinize(nfa: Nfa, labels: list[str]) -> Dfa:
    start = _closure(nfa, frozenset([nfa.start]))
    index = {start: 0}
    order = [start]
    transitions: list[dict[str, int]] = [{}]
    pos = 0
    while pos < len(order):
        current = order[pos]
        for lab in labels:
            targets = set()
            for s in current:
                targets.update(nfa.edges.get((s, lab), ()))
            if not targets:
                continue
            nxt = _closure(nfa, frozenset(targets))
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                transitions.append({})
            transitions[pos][lab] = index[nxt]
        pos += 1
    accepting = frozenset(i for st, i in index.items() if nfa.accept in st)
    return Dfa(0, accepting, transitions)


def system_dfa(system: SystemDef) -> Dfa:
    return determinize(build_nfa(system.expr), [d.label for d in system.alphabet])


@lru_cache(maxsize=256)
def _char_dfa(system: SystemDef) -> Dfa:
    nfa = build_nfa(system.expr)
    # expand each label edge into a chain of single-character steps
    char_edges: dict[tuple[int, str], list[int]] = {}
    extra = nfa.n_states
    eps = {k: list(v) for k, v in nfa.eps.items()}
    for (state, label), targets in nfa.edges.items():
        for target in targets:
            prev = state
            for c in label[:-1]:
                char_edges.setdefault((prev, c), []).append(extra)
                prev = extra
                extra += 1
            char_edges.setdefault((prev, label[-1]), []).append(target)
    cnfa = Nfa(nfa.start, nfa.accept, char_edges, eps, extra)
    chars = sorted({c for (_, c) in char_edges})
    return determinize(cnfa, chars)


def matches(system: SystemDef, s: str) -> bool:
    """Membership test: is ``s`` (a concatenation of alphabet labels) in the
    language of the system?

    Works character-by-character so multi-character labels need no external
    tokenization; any segmentation of ``s`` into labels counts.
    """
    alphabet_chars = {c for d in system.alphabet for c in d.label}
    for c in s:
        if c not in alphabet_chars:
            raise DslError(f"character {c!r} not in alphabet")
    dfa = _char_dfa(system)
    state = dfa.start
    for c in s:
        state = dfa.transitions[state].get(c)
        if state is None:
            return False
    return state in dfa.accepting
