"""State estimation under partial observation.

The observer of a nondeterministic automaton is the usual subset construction
over observable events, with the unobservable reach folded in.  Each observer
state carries the estimate (the set of possible underlying states); an
estimate that contains only secret states reveals the secret.  The desired
observer removes those revealing estimates and keeps the accessible part; its
language is exactly the set of safe observations.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .automata import TAU, Automaton, Event, State, Transition


@dataclass(frozen=True)
class Estimate:
    """A set of possible underlying states, with its canonical name."""

    name: str
    members: frozenset[str]
    secret_only: bool


def estimate_name(members: Iterable[str]) -> str:
    return "{" + ",".join(sorted(members)) + "}"


@dataclass(frozen=True)
class Observer:
    """A deterministic tau-free automaton whose states carry estimates."""

    automaton: Automaton
    estimates: Mapping[str, Estimate]

    @property
    def initial(self) -> str | None:
        starts = self.automaton.initial_states
        return starts[0] if starts else None

    def is_empty(self) -> bool:
        return not self.automaton.states


def unobservable_reach(a: Automaton, states: Iterable[str]) -> frozenset[str]:
    """Closure of ``states`` under tau moves and unobservable events."""
    silent = {ev.name for ev in a.events if not ev.observable} | {TAU}
    seen = set(states)
    queue = deque(seen)
    while queue:
        here = queue.popleft()
        for label, dst in a.outgoing(here):
            if label in silent and dst not in seen:
                seen.add(dst)
                queue.append(dst)
    return frozenset(seen)


def determinize(a: Automaton, name: str | None = None) -> Observer:
    """Observer automaton of ``a`` via subset construction.

    Estimates are named canonically from their sorted members.  An observer
    state is flagged secret iff its estimate contains secret states only.
    """
    observable = sorted(ev.name for ev in a.events if ev.observable)
    events = tuple(ev for ev in sorted(a.events, key=lambda ev: ev.name) if ev.observable)
    secret = a.secret_states

    estimates: dict[str, Estimate] = {}
    states: list[State] = []
    transitions: list[Transition] = []
    seen: dict[frozenset[str], str] = {}

    def admit(members: frozenset[str], initial: bool) -> str:
        label = estimate_name(members)
        if members not in seen:
            seen[members] = label
            secret_only = bool(members) and members <= secret
            estimates[label] = Estimate(name=label, members=members, secret_only=secret_only)
            states.append(State(name=label, initial=initial, marked=False, secret=secret_only))
        return seen[members]

    queue: deque[frozenset[str]] = deque()
    if a.initial_states:
        start = unobservable_reach(a, a.initial_states)
        admit(start, initial=True)
        queue.append(start)
    while queue:
        members = queue.popleft()
        src = seen[members]
        for event in observable:
            stepped = {dst for member in members for dst in a.successors(member, event)}
            if not stepped:
                continue
            closed = unobservable_reach(a, stepped)
            if closed not in seen:
                admit(closed, initial=False)
                queue.append(closed)
            transitions.append((src, event, seen[closed]))

    automaton = Automaton(
        name=name or f"det({a.name})",
        events=events,
        states=tuple(states),
        transitions=tuple(transitions),
    )
    return Observer(automaton=automaton, estimates=estimates)


def desired_observer(o: Observer, name: str | None = None) -> Observer:
    """Remove secret-only estimates and keep the accessible part.

    The result may be empty (no states) when the initial estimate itself is
    secret-only; callers decide whether that is fatal.
    """
    keep = {label for label, est in o.estimates.items() if not est.secret_only}
    base = o.automaton
    states = tuple(st for st in base.states if st.name in keep)
    transitions = tuple(t for t in base.transitions if t[0] in keep and t[2] in keep)
    trimmed = Automaton(
        name=name or f"{base.name}_d",
        events=base.events,
        states=states,
        transitions=transitions,
    ).trim_reachable()
    kept = {st.name for st in trimmed.states}
    return Observer(
        automaton=trimmed,
        estimates={label: est for label, est in o.estimates.items() if label in kept},
    )


@dataclass(frozen=True)
class OpacityReport:
    opaque: bool
    witnesses: tuple[tuple[tuple[str, ...], Estimate], ...]


def check_current_state_opacity(a: Automaton) -> OpacityReport:
    """Current-state opacity: no observation may pin the system inside the
    secret set.  Equivalently, the observer has no reachable secret-only
    estimate.  For each violating estimate the report carries one shortest
    witness observation (ties broken by lexicographic event order).
    """
    observer = determinize(a)
    base = observer.automaton
    witnesses: list[tuple[tuple[str, ...], Estimate]] = []
    if observer.initial is None:
        return OpacityReport(opaque=True, witnesses=())
    paths: dict[str, tuple[str, ...]] = {observer.initial: ()}
    queue = deque([observer.initial])
    order: list[str] = [observer.initial]
    while queue:
        here = queue.popleft()
        for label, dst in sorted(base.outgoing(here)):
            if dst not in paths:
                paths[dst] = paths[here] + (label,)
                order.append(dst)
                queue.append(dst)
    for label in order:
        est = observer.estimates[label]
        if est.secret_only:
            witnesses.append((paths[label], est))
    return OpacityReport(opaque=not witnesses, witnesses=tuple(witnesses))
