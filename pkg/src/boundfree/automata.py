"""Finite automata over digit and digit-pair alphabets.

Only the constructions the decision procedure needs are here: the
equal-value automaton for a rational base, automata for patterns
``q_1 p_1* q_2 ... p_s* q_{s+1}`` (single and paired), synchronized product,
reversal, shortest-witness emptiness and ambiguity detection.

State labels are arbitrary hashables and are kept through ``product`` so
that callers can read pattern positions back out of an accepting run.
Letters are Fractions (digits) or :class:`PairLetter` tuples; both sort
naturally, which fixes the exploration order of every search.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .algebra import RationalLike, as_rational, format_rational
from .numeration import Base, BadBase

State = Hashable
Letter = Hashable


class PairLetter(NamedTuple):
    top: Fraction
    bottom: Fraction


class AlphabetMismatch(ValueError):
    pass


class Nfa:
    """Nondeterministic automaton without epsilon moves.

    ``transitions`` is either a mapping ``state -> letter -> targets`` or an
    iterable of ``(source, letter, target)`` triples. State order is the
    order given in ``states`` and is preserved by every construction.
    """

    def __init__(
        self,
        states: Iterable[State],
        alphabet: Iterable[Letter],
        transitions: Mapping | Iterable[tuple[State, Letter, State]],
        initial: Iterable[State],
        accepting: Iterable[State],
    ):
        self.states: tuple[State, ...] = tuple(dict.fromkeys(states))
        self.alphabet: tuple[Letter, ...] = tuple(sorted(set(alphabet)))
        self.initial: tuple[State, ...] = tuple(dict.fromkeys(initial))
        self.accepting: frozenset[State] = frozenset(accepting)
        state_set = set(self.states)
        letter_set = set(self.alphabet)

        delta: dict[State, dict[Letter, list[State]]] = {}
        if isinstance(transitions, Mapping):
            triples = ((p, a, q) for p, row in transitions.items() for a, qs in row.items() for q in qs)
        else:
            triples = transitions
        for p, a, q in triples:
            if p not in state_set or q not in state_set:
                raise ValueError(f"transition {p!r} --{a!r}--> {q!r} uses an unknown state")
            if a not in letter_set:
                raise ValueError(f"letter {a!r} is not in the alphabet")
            targets = delta.setdefault(p, {}).setdefault(a, [])
            if q not in targets:
                targets.append(q)
        self._delta = {p: {a: tuple(qs) for a, qs in sorted(row.items())} for p, row in delta.items()}

        for s in (*self.initial, *self.accepting):
            if s not in state_set:
                raise ValueError(f"initial/accepting state {s!r} is not a state")

    def successors(self, state: State, letter: Letter) -> tuple[State, ...]:
        return self._delta.get(state, {}).get(letter, ())

    def moves(self, state: State) -> Iterator[tuple[Letter, State]]:
        """Outgoing ``(letter, target)`` pairs in letter order."""
        for a, qs in self._delta.get(state, {}).items():
            for q in qs:
                yield a, q

    def transitions(self) -> Iterator[tuple[State, Letter, State]]:
        for p in self.states:
            for a, q in self.moves(p):
                yield p, a, q

    def accepts(self, word: Iterable[Letter]) -> bool:
        current = set(self.initial)
        for a in word:
            current = {q for p in current for q in self.successors(p, a)}
            if not current:
                return False
        return bool(current & self.accepting)

    def count_accepting_runs(self, word: Sequence[Letter]) -> int:
        counts: dict[State, int] = {s: 1 for s in self.initial}
        for a in word:
            nxt: dict[State, int] = {}
            for p, n in counts.items():
                for q in self.successors(p, a):
                    nxt[q] = nxt.get(q, 0) + n
            counts = nxt
        return sum(n for s, n in counts.items() if s in self.accepting)

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"<{type(self).__name__} states={len(self.states)} letters={len(self.alphabet)}>"


class EqualityAutomaton(Nfa):
    """Pair words, least significant digit first, whose tracks have equal value in base ``r``.

    States are the integer carries ``i`` with ``|i| <= d`` where
    ``d = (2m - 2) / (|r| - 1)`` and ``m = max|digit| + 1``. Reading
    ``(a, b)`` in state ``i`` moves to ``j`` when ``i + a - b == r * j``.
    Transitions are computed on demand, so large carry ranges cost nothing
    until explored. Being deterministic, it is still stored as an Nfa.
    """

    def __init__(self, r: RationalLike | Base, digits: Iterable[int]):
        base = r if isinstance(r, Base) else Base(as_rational(r))
        if abs(base.r) <= 1:
            raise BadBase(f"equality automaton needs |r| > 1 (got {base.r}); use 1/r on reversed words")
        digits = sorted(set(digits))
        if not digits:
            raise ValueError("digit set must be nonempty")
        if any(Fraction(x).denominator != 1 for x in digits):
            raise ValueError("digits must be integers; scale them by a common denominator first")
        digits = [int(x) for x in digits]
        self.base = base
        self.digits = tuple(digits)
        self.m = max(abs(x) for x in digits) + 1
        self.d = Fraction(2 * self.m - 2) / (abs(base.r) - 1)
        self._bound = floor(self.d)
        self.states = tuple(range(-self._bound, self._bound + 1))
        self.alphabet = tuple(PairLetter(Fraction(a), Fraction(b)) for a in digits for b in digits)
        self._letters = frozenset(self.alphabet)
        self.initial = (0,)
        self.accepting = frozenset({0})

    def successors(self, state: int, letter: PairLetter) -> tuple[int, ...]:
        if letter not in self._letters or not (-self._bound <= state <= self._bound):
            return ()
        num = (state + int(letter.top) - int(letter.bottom)) * self.base.v
        if num % self.base.u:
            return ()
        j = num // self.base.u
        return (j,) if -self._bound <= j <= self._bound else ()

    def moves(self, state: int) -> Iterator[tuple[PairLetter, int]]:
        for a in self.alphabet:
            for q in self.successors(state, a):
                yield a, q


def equality_automaton(r: RationalLike | Base, digits: Iterable[int]) -> EqualityAutomaton:
    return EqualityAutomaton(r, digits)


@dataclass(frozen=True)
class PatternSpec:
    """The expression ``fixed[0] starred[0]* fixed[1] ... starred[s-1]* fixed[s]``."""

    fixed: tuple[Fraction, ...]
    starred: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "fixed", tuple(as_rational(x) for x in self.fixed))
        object.__setattr__(self, "starred", tuple(as_rational(x) for x in self.starred))
        if len(self.fixed) != len(self.starred) + 1:
            raise ValueError("need exactly one more fixed letter than starred letters")

    @property
    def s(self) -> int:
        return len(self.starred)

    def letters(self) -> frozenset[Fraction]:
        return frozenset(self.fixed) | frozenset(self.starred)


def pattern_automaton(pattern: PatternSpec, alphabet: Iterable[Fraction] | None = None) -> Nfa:
    """States ``0..s+1``: state ``i`` means ``fixed[0..i-1]`` have been read.

    State ``i`` (``1 <= i <= s``) loops on ``starred[i-1]``; accepting runs are
    in bijection with the loop-count tuples.
    """
    s = pattern.s
    triples = []
    for i in range(s + 1):
        triples.append((i, pattern.fixed[i], i + 1))
        if i >= 1:
            triples.append((i, pattern.starred[i - 1], i))
    letters = pattern.letters() if alphabet is None else alphabet
    return Nfa(range(s + 2), letters, triples, [0], [s + 1])


def _pattern_moves(pattern: PatternSpec, i: int) -> list[tuple[Fraction, int]]:
    out = []
    if 1 <= i <= pattern.s:
        out.append((pattern.starred[i - 1], i))
    if i <= pattern.s:
        out.append((pattern.fixed[i], i + 1))
    return out


def pair_pattern_automaton(
    top: PatternSpec,
    bottom: PatternSpec,
    require_diff: bool = False,
    alphabet: Iterable[PairLetter] | None = None,
) -> Nfa:
    """Pair words ``[u1; u2]`` with ``u1`` matching ``top`` and ``u2`` matching ``bottom``.

    States are ``(i, j, differs)`` with ``i``/``j`` the positions in the two
    pattern automata; ``differs`` records whether a letter with unequal
    tracks has been read and is only tracked when ``require_diff`` is set.
    """
    start = (0, 0, False)
    states = {start: None}
    triples = []
    queue = deque([start])
    while queue:
        i, j, diff = state = queue.popleft()
        for x, i2 in _pattern_moves(top, i):
            for y, j2 in _pattern_moves(bottom, j):
                nxt = (i2, j2, require_diff and (diff or x != y))
                triples.append((state, PairLetter(x, y), nxt))
                if nxt not in states:
                    states[nxt] = None
                    queue.append(nxt)
    final = (top.s + 1, bottom.s + 1, require_diff)
    accepting = [final] if final in states else []
    if alphabet is None:
        alphabet = {a for _, a, _ in triples}
    return Nfa(states, alphabet, triples, [start], accepting)


def product(a: Nfa, b: Nfa) -> Nfa:
    """Intersection automaton over reachable pairs ``(p, q)``."""
    if set(a.alphabet) != set(b.alphabet):
        raise AlphabetMismatch("product needs automata over the same alphabet")
    starts = [(p, q) for p in a.initial for q in b.initial]
    seen = dict.fromkeys(starts)
    triples = []
    queue = deque(starts)
    while queue:
        p, q = pq = queue.popleft()
        for letter, p2 in a.moves(p):
            for q2 in b.successors(q, letter):
                nxt = (p2, q2)
                triples.append((pq, letter, nxt))
                if nxt not in seen:
                    seen[nxt] = None
                    queue.append(nxt)
    accepting = [s for s in seen if s[0] in a.accepting and s[1] in b.accepting]
    return Nfa(seen, a.alphabet, triples, starts, accepting)


def reverse(a: Nfa) -> Nfa:
    triples = [(q, letter, p) for p, letter, q in a.transitions()]
    return Nfa(a.states, a.alphabet, triples, sorted(a.accepting, key=a.states.index), a.initial)


def shortest_accepting_run(a: Nfa) -> tuple[tuple[Letter, ...], tuple[State, ...]] | None:
    """Breadth-first search for a shortest accepted word and one run on it."""
    parent: dict[State, tuple[State, Letter] | None] = {}
    queue: deque[State] = deque()
    for s in a.initial:
        if s not in parent:
            parent[s] = None
            queue.append(s)
    while queue:
        p = queue.popleft()
        if p in a.accepting:
            word: list[Letter] = []
            path = [p]
            while parent[p] is not None:
                p, letter = parent[p]
                word.append(letter)
                path.append(p)
            return tuple(reversed(word)), tuple(reversed(path))
        for letter, q in a.moves(p):
            if q not in parent:
                parent[q] = (p, letter)
                queue.append(q)
    return None


def emptiness_witness(a: Nfa) -> tuple[Letter, ...] | None:
    """A shortest accepted word, or None when the language is empty."""
    run = shortest_accepting_run(a)
    return None if run is None else run[0]


def ambiguity_check(a: Nfa) -> tuple[tuple[Letter, ...], tuple[State, ...], tuple[State, ...]] | None:
    """Find a word with two distinct accepting runs.

    Searches the self-product restricted to equal letters, tracking whether
    the two runs have split. Returns ``(word, run1, run2)`` or None if the
    automaton is unambiguous.
    """
    starts = [(p, q, p != q) for p in a.initial for q in a.initial]
    parent: dict[tuple, tuple | None] = {s: None for s in starts}
    queue = deque(starts)
    while queue:
        node = queue.popleft()
        p, q, split = node
        if split and p in a.accepting and q in a.accepting:
            word, run1, run2 = [], [p], [q]
            while parent[node] is not None:
                node, letter = parent[node]
                word.append(letter)
                run1.append(node[0])
                run2.append(node[1])
            return tuple(reversed(word)), tuple(reversed(run1)), tuple(reversed(run2))
        for letter, p2 in a.moves(p):
            for q2 in a.successors(q, letter):
                nxt = (p2, q2, split or p2 != q2)
                if nxt not in parent:
                    parent[nxt] = (node, letter)
                    queue.append(nxt)
    return None


def loop_counts(run: Sequence[int], s: int) -> tuple[int, ...]:
    """Number of self-loops taken at pattern positions ``1..s`` along ``run``."""
    counts = [0] * s
    for p, q in zip(run, run[1:]):
        if p == q:
            counts[p - 1] += 1
    return tuple(counts)


def _letter_text(letter: Letter) -> str:
    if isinstance(letter, PairLetter):
        return f"{format_rational(letter.top)}|{format_rational(letter.bottom)}"
    return format_rational(letter)


def to_dot(a: Nfa, name: str = "A", state_label: Callable[[State], str] | None = None) -> str:
    """Graphviz text; accepting states are drawn as double circles."""
    if state_label is None:
        state_label = (lambda s: f"q{s}") if isinstance(a, EqualityAutomaton) else str
    ids = {s: f"n{k}" for k, s in enumerate(a.states)}
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in a.states:
        shape = "doublecircle" if s in a.accepting else "circle"
        label = state_label(s).replace('"', '\\"')
        lines.append(f'  {ids[s]} [shape={shape}, label="{label}"];')
    for s in a.initial:
        lines.append(f"  __start -> {ids[s]};")
    for p, letter, q in a.transitions():
        lines.append(f'  {ids[p]} -> {ids[q]} [label="{_letter_text(letter)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
