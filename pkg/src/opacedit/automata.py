"""Nondeterministic finite automata with unobservable moves, and the basic
operations the rest of the library is built on: synchronous composition,
quotients by a state partition, subautomaton tests, natural projection,
bounded language enumeration and isomorphism of deterministic automata.

States carry three independent flags (initial, marked, secret).  Events carry
observability and controllability flags.  The label ``tau`` is reserved for
unobservable internal moves: it may appear on transitions but never in the
declared alphabet.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

TAU = "tau"
EPSILON = "ε"


class InvalidAutomaton(ValueError):
    """Raised when automaton components do not form a well-defined automaton."""


def erasure_symbol(event: str) -> str:
    """Edit symbol denoting that ``event`` is suppressed from the output."""
    return f"{event}→{EPSILON}"


@dataclass(frozen=True)
class Event:
    """An alphabet symbol with its observability and controllability flags."""

    name: str
    observable: bool = True
    controllable: bool = True


@dataclass(frozen=True)
class State:
    name: str
    initial: bool = False
    marked: bool = False
    secret: bool = False


Transition = tuple[str, str, str]


@dataclass(frozen=True)
class Automaton:
    """A finite automaton ``(Q, Sigma, ->, Q0)`` with marked and secret subsets.

    ``transitions`` holds ``(source, label, target)`` triples where ``label``
    is either a declared event name or ``tau``.  The structure is immutable;
    derived lookup tables are cached on first use.
    """

    name: str
    events: tuple[Event, ...]
    states: tuple[State, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self) -> None:
        seen_events: set[str] = set()
        for ev in self.events:
            if ev.name == TAU:
                raise InvalidAutomaton(f"{self.name!r}: {TAU!r} must not be declared as an event")
            if not ev.name:
                raise InvalidAutomaton(f"{self.name!r}: empty event name")
            if ev.name in seen_events:
                raise InvalidAutomaton(f"{self.name!r}: duplicate event {ev.name!r}")
            seen_events.add(ev.name)
        seen_states: set[str] = set()
        for st in self.states:
            if not st.name:
                raise InvalidAutomaton(f"{self.name!r}: empty state name")
            if st.name in seen_states:
                raise InvalidAutomaton(f"{self.name!r}: duplicate state {st.name!r}")
            seen_states.add(st.name)
        for i, (src, label, dst) in enumerate(self.transitions):
            if src not in seen_states:
                raise InvalidAutomaton(f"{self.name!r}: transitions[{i}] has unknown source {src!r}")
            if dst not in seen_states:
                raise InvalidAutomaton(f"{self.name!r}: transitions[{i}] has unknown target {dst!r}")
            if label != TAU and label not in seen_events:
                raise InvalidAutomaton(f"{self.name!r}: transitions[{i}] has undeclared event {label!r}")

    @cached_property
    def event_map(self) -> Mapping[str, Event]:
        return {ev.name: ev for ev in self.events}

    @cached_property
    def state_map(self) -> Mapping[str, State]:
        return {st.name: st for st in self.states}

    @cached_property
    def initial_states(self) -> tuple[str, ...]:
        return tuple(st.name for st in self.states if st.initial)

    @cached_property
    def marked_states(self) -> frozenset[str]:
        return frozenset(st.name for st in self.states if st.marked)

    @cached_property
    def secret_states(self) -> frozenset[str]:
        return frozenset(st.name for st in self.states if st.secret)

    @cached_property
    def _succ(self) -> Mapping[tuple[str, str], tuple[str, ...]]:
        table: dict[tuple[str, str], list[str]] = {}
        for src, label, dst in self.transitions:
            table.setdefault((src, label), []).append(dst)
        return {key: tuple(val) for key, val in table.items()}

    @cached_property
    def _out(self) -> Mapping[str, tuple[tuple[str, str], ...]]:
        table: dict[str, list[tuple[str, str]]] = {st.name: [] for st in self.states}
        for src, label, dst in self.transitions:
            table[src].append((label, dst))
        return {key: tuple(val) for key, val in table.items()}

    def successors(self, state: str, label: str) -> tuple[str, ...]:
        return self._succ.get((state, label), ())

    def outgoing(self, state: str) -> tuple[tuple[str, str], ...]:
        return self._out.get(state, ())

    @cached_property
    def is_deterministic(self) -> bool:
        """Single initial state, no tau moves, at most one target per (state, event)."""
        if len(self.initial_states) > 1:
            return False
        if any(label == TAU for _, label, _ in self.transitions):
            return False
        return all(len(targets) <= 1 for targets in self._succ.values())

    def reachable_states(self) -> frozenset[str]:
        seen = set(self.initial_states)
        queue = deque(seen)
        while queue:
            here = queue.popleft()
            for _, dst in self.outgoing(here):
                if dst not in seen:
                    seen.add(dst)
                    queue.append(dst)
        return frozenset(seen)

    def trim_reachable(self) -> "Automaton":
        """Restrict to states reachable from the initial states."""
        keep = self.reachable_states()
        return restrict(self, keep)


@dataclass(frozen=True)
class Partition:
    """A partition of an automaton's state set into disjoint blocks."""

    blocks: tuple[frozenset[str], ...]

    @cached_property
    def block_index(self) -> Mapping[str, int]:
        table: dict[str, int] = {}
        for i, block in enumerate(self.blocks):
            for member in block:
                if member in table:
                    raise InvalidAutomaton(f"partition blocks overlap at {member!r}")
                table[member] = i
        return table

    def block_of(self, state: str) -> frozenset[str]:
        return self.blocks[self.block_index[state]]


def block_name(block: frozenset[str]) -> str:
    """Canonical printable name of a block: singletons keep the member name."""
    members = sorted(block)
    if len(members) == 1:
        return members[0]
    return "{" + ",".join(members) + "}"


def _merge_events(parts: Sequence[Automaton]) -> tuple[Event, ...]:
    merged: dict[str, Event] = {}
    for part in parts:
        for ev in part.events:
            known = merged.get(ev.name)
            if known is None:
                merged[ev.name] = ev
            elif known != ev:
                raise InvalidAutomaton(
                    f"event {ev.name!r} declared with conflicting flags in {part.name!r}"
                )
    return tuple(sorted(merged.values(), key=lambda ev: ev.name))


def pair_name(left: str, right: str) -> str:
    return f"({left},{right})"


def sync_compose(a: Automaton, b: Automaton, name: str | None = None) -> Automaton:
    """Synchronous composition: shared events move in lock step, private events
    and tau interleave.  A composite state is initial/marked iff both components
    are and secret iff either component is.  Only the reachable part is kept.
    """
    events = _merge_events((a, b))
    shared = {ev.name for ev in a.events} & {ev.name for ev in b.events}
    a_events = {ev.name for ev in a.events}
    b_events = {ev.name for ev in b.events}

    start_pairs = [(x, y) for x in a.initial_states for y in b.initial_states]
    seen: dict[tuple[str, str], str] = {}
    order: list[tuple[str, str]] = []
    transitions: list[Transition] = []
    queue = deque()
    for pair in start_pairs:
        if pair not in seen:
            seen[pair] = pair_name(*pair)
            order.append(pair)
            queue.append(pair)
    while queue:
        x, y = queue.popleft()
        src = seen[(x, y)]
        moves: list[tuple[str, tuple[str, str]]] = []
        for label, dst in a.outgoing(x):
            if label == TAU or (label in a_events and label not in shared):
                moves.append((label, (dst, y)))
            elif label in shared:
                for other in b.successors(y, label):
                    moves.append((label, (dst, other)))
        for label, dst in b.outgoing(y):
            if label == TAU or (label in b_events and label not in shared):
                moves.append((label, (x, dst)))
        for label, pair in moves:
            if pair not in seen:
                seen[pair] = pair_name(*pair)
                order.append(pair)
                queue.append(pair)
            transitions.append((src, label, seen[pair]))

    states = []
    for x, y in order:
        sa, sb = a.state_map[x], b.state_map[y]
        states.append(
            State(
                name=seen[(x, y)],
                initial=sa.initial and sb.initial,
                marked=sa.marked and sb.marked,
                secret=sa.secret or sb.secret,
            )
        )
    return Automaton(
        name=name or f"{a.name}||{b.name}",
        events=events,
        states=tuple(states),
        transitions=tuple(transitions),
    )


def compose_all(parts: Sequence[Automaton], name: str | None = None) -> Automaton:
    """Left fold of sync_compose over two or more automata."""
    if not parts:
        raise InvalidAutomaton("cannot compose an empty list of automata")
    result = parts[0]
    for part in parts[1:]:
        result = sync_compose(result, part)
    if name is not None:
        result = rename_automaton(result, name)
    return result


def rename_automaton(a: Automaton, name: str) -> Automaton:
    return Automaton(name=name, events=a.events, states=a.states, transitions=a.transitions)


def restrict(a: Automaton, keep: Iterable[str], name: str | None = None) -> Automaton:
    """State subautomaton induced by ``keep``: drops all other states and any
    transition touching them."""
    keep = set(keep)
    states = tuple(st for st in a.states if st.name in keep)
    transitions = tuple(t for t in a.transitions if t[0] in keep and t[2] in keep)
    return Automaton(name=name or a.name, events=a.events, states=states, transitions=transitions)


def quotient(a: Automaton, partition: Partition, name: str | None = None) -> Automaton:
    """Quotient automaton over the given partition.  A block is initial, marked
    or secret iff some member is; transitions are lifted blockwise."""
    covered = set(partition.block_index)
    names = {st.name for st in a.states}
    if covered != names:
        missing = sorted(names - covered) + sorted(covered - names)
        raise InvalidAutomaton(f"partition does not cover the state set exactly: {missing[:4]}")
    labels = [block_name(block) for block in partition.blocks]
    states = []
    for i, block in enumerate(partition.blocks):
        members = [a.state_map[m] for m in block]
        states.append(
            State(
                name=labels[i],
                initial=any(m.initial for m in members),
                marked=any(m.marked for m in members),
                secret=any(m.secret for m in members),
            )
        )
    transitions = set()
    for src, label, dst in a.transitions:
        transitions.add((labels[partition.block_index[src]], label, labels[partition.block_index[dst]]))
    return Automaton(
        name=name or f"{a.name}/~",
        events=a.events,
        states=tuple(states),
        transitions=tuple(sorted(transitions)),
    )


def is_subautomaton(a: Automaton, b: Automaton) -> bool:
    """True iff ``a`` is contained in ``b``: same alphabet, and a's states,
    transitions, initial and marked sets are subsets of b's."""
    if set(a.events) != set(b.events):
        raise InvalidAutomaton("subautomaton comparison requires identical alphabets")
    b_states = {st.name for st in b.states}
    if not {st.name for st in a.states} <= b_states:
        return False
    for st in a.states:
        other = b.state_map[st.name]
        if st.initial and not other.initial:
            return False
        if st.marked and not other.marked:
            return False
        if st.secret != other.secret:
            return False
    return set(a.transitions) <= set(b.transitions)


def project(string: Sequence[str], keep: Iterable[str]) -> tuple[str, ...]:
    """Natural projection of an event string onto the event subset ``keep``."""
    keep = {ev.name if isinstance(ev, Event) else ev for ev in keep}
    return tuple(symbol for symbol in string if symbol in keep)


def language_upto(a: Automaton, depth: int) -> set[tuple[str, ...]]:
    """All observable strings of length at most ``depth`` generated by ``a``.

    Enumerates raw paths directly (tau moves emit nothing), so it is usable as
    an independent oracle for the subset construction.
    """
    language: set[tuple[str, ...]] = set()
    seen: set[tuple[str, tuple[str, ...]]] = set()
    queue: deque[tuple[str, tuple[str, ...]]] = deque()
    for init in a.initial_states:
        pair = (init, ())
        if pair not in seen:
            seen.add(pair)
            queue.append(pair)
            language.add(())
    while queue:
        state, string = queue.popleft()
        for label, dst in a.outgoing(state):
            if label == TAU:
                nxt = (dst, string)
            elif a.event_map[label].observable:
                if len(string) == depth:
                    continue
                nxt = (dst, string + (label,))
            else:
                nxt = (dst, string)
            if nxt not in seen:
                seen.add(nxt)
                language.add(nxt[1])
                queue.append(nxt)
    return language


def canonical_table(
    initial: str | None,
    edges: Mapping[str, Sequence[tuple[object, str]]],
    flags: Mapping[str, tuple[bool, ...]],
) -> tuple:
    """Canonical form of a deterministic labeled graph, up to state renaming.

    Performs a breadth-first traversal from ``initial`` taking outgoing edges
    in sorted label order, numbering states in discovery order.  Two graphs
    are isomorphic iff their canonical forms are equal.
    """
    if initial is None:
        return (0, (), ())
    index = {initial: 0}
    order = [initial]
    queue = deque([initial])
    table: list[tuple[int, object, int]] = []
    while queue:
        here = queue.popleft()
        out = sorted(edges.get(here, ()), key=lambda pair: repr(pair[0]))
        for label, dst in out:
            if dst not in index:
                index[dst] = len(index)
                order.append(dst)
                queue.append(dst)
            table.append((index[here], label, index[dst]))
    flag_rows = tuple(flags.get(name, ()) for name in order)
    return (len(order), tuple(table), flag_rows)


def deterministic_isomorphic(a: Automaton, b: Automaton) -> bool:
    """True iff two deterministic automata are isomorphic on their reachable
    parts (matching alphabets, transitions and state flags)."""
    for part in (a, b):
        if not part.is_deterministic:
            raise InvalidAutomaton(f"{part.name!r} is not deterministic")
    if set(a.events) != set(b.events):
        return False

    def form(part: Automaton) -> tuple:
        initial = part.initial_states[0] if part.initial_states else None
        edges = {
            st.name: [(label, dst) for label, dst in part.outgoing(st.name)] for st in part.states
        }
        flags = {st.name: (st.initial, st.marked, st.secret) for st in part.states}
        return canonical_table(initial, edges, flags)

    return form(a) == form(b)


def iter_strings(alphabet: Sequence[str], depth: int) -> Iterator[tuple[str, ...]]:
    """All strings over ``alphabet`` of length at most ``depth``, shortest first."""
    level: list[tuple[str, ...]] = [()]
    yield ()
    for _ in range(depth):
        nxt = []
        for string in level:
            for symbol in alphabet:
                extended = string + (symbol,)
                nxt.append(extended)
                yield extended
        level = nxt
