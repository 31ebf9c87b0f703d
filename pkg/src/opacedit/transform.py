"""Encoding TPOs as plant automata for supervisory control.

Each TPO transition class becomes a decorated event: the pending event is the
context, so identical decisions taken under different pending events stay
distinguishable.  System arrivals and deliveries are uncontrollable; insert,
stop and erase decisions are controllable.  Y states are marked; the result
is deterministic by construction.

Serialized decorated-event names:

    system e        ->  e
    insert theta    ->  ins:theta@context
    stop            ->  stop@context
    erase e         ->  erz:e@e
    deliver e       ->  out:e@e
    deliver erased  ->  drop:e@e

In the modular encoding each component additionally self-loops, at Y states,
on the plain system events that are local to other components, and enlarges
its alphabet with the decorated shared events contextualized by foreign-local
events; those decorated events get no transitions, so in a synchronous product
nobody can take such a decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .automata import (
    EPSILON,
    Automaton,
    Event,
    InvalidAutomaton,
    State,
    Transition,
    erasure_symbol,
)
from .tpo import Tpo, TpoTransition, W, Y, YZ, Z, ZW1, ZW2, ZZ, WY1, WY2

SYSTEM = "system"
INSERT = "insert"
STOP = "stop"
ERASE = "erase"
DELIVER = "deliver"
DELIVER_ERASED = "deliver-erased"

_CONTROLLABLE = {INSERT: True, STOP: True, ERASE: True, SYSTEM: False, DELIVER: False, DELIVER_ERASED: False}
_CLASS_OF = {SYSTEM: YZ, INSERT: ZZ, STOP: ZW1, ERASE: ZW2, DELIVER: WY1, DELIVER_ERASED: WY2}


@dataclass(frozen=True)
class DecoratedEvent:
    """An edit decision or system move, tagged with its pending-event context."""

    kind: str
    base: str
    context: str | None = None

    @property
    def name(self) -> str:
        if self.kind == SYSTEM:
            return self.base
        if self.kind == INSERT:
            return f"ins:{self.base}@{self.context}"
        if self.kind == STOP:
            return f"stop@{self.context}"
        if self.kind == ERASE:
            return f"erz:{self.base}@{self.context}"
        if self.kind == DELIVER:
            return f"out:{self.base}@{self.context}"
        if self.kind == DELIVER_ERASED:
            return f"drop:{self.base}@{self.context}"
        raise ValueError(f"unknown decoration kind {self.kind!r}")

    @property
    def controllable(self) -> bool:
        return _CONTROLLABLE[self.kind]

    @property
    def transition_class(self) -> str:
        return _CLASS_OF[self.kind]

    def event(self) -> Event:
        return Event(name=self.name, observable=True, controllable=self.controllable)


_PREFIX_KIND = {"ins": INSERT, "erz": ERASE, "out": DELIVER, "drop": DELIVER_ERASED}


def parse_decorated(name: str) -> DecoratedEvent:
    """Inverse of ``DecoratedEvent.name``; malformed decorations are errors
    rather than being read back as plain system events."""
    prefix, sep, rest = name.partition(":")
    if sep and prefix in _PREFIX_KIND:
        base, at, context = rest.partition("@")
        if not at or not base or not context:
            raise ValueError(f"malformed decorated event {name!r}")
        return DecoratedEvent(kind=_PREFIX_KIND[prefix], base=base, context=context)
    if name.startswith("stop@"):
        context = name[5:]
        if not context:
            raise ValueError(f"malformed decorated event {name!r}")
        return DecoratedEvent(kind=STOP, base=EPSILON, context=context)
    if "@" in name:
        raise ValueError(f"malformed decorated event {name!r}")
    return DecoratedEvent(kind=SYSTEM, base=name)


def rename(d: DecoratedEvent) -> str | None:
    """Strip the decoration back to the edit symbol it denotes: inserted and
    delivered events keep their base name, a stop maps to the empty string
    (returned as None) and an erasure maps to its erasure symbol."""
    if d.kind == STOP:
        return None
    if d.kind == ERASE:
        return erasure_symbol(d.base)
    return d.base


def run_label(d: DecoratedEvent) -> tuple[str, str]:
    """(transition class, renamed label) pair used to align plant traces with
    TPO runs."""
    renamed = rename(d)
    return (d.transition_class, EPSILON if renamed is None else renamed)


@dataclass(frozen=True)
class TransformedAutomaton:
    """A TPO encoded as a plant automaton plus its bookkeeping: the origin
    kind (Y/Z/W) of every state and the decoration of every event."""

    automaton: Automaton
    origins: Mapping[str, str]
    decorations: Mapping[str, DecoratedEvent]

    def decision_events(self) -> tuple[str, ...]:
        return tuple(
            sorted(
                name
                for name, dec in self.decorations.items()
                if dec.kind in (INSERT, STOP, ERASE)
            )
        )


_TPO_KIND = {YZ: SYSTEM, ZZ: INSERT, ZW1: STOP, ZW2: ERASE, WY1: DELIVER, WY2: DELIVER_ERASED}


def _decorate(tr: TpoTransition, pending: str) -> DecoratedEvent:
    kind = _TPO_KIND[tr.cls]
    if kind == SYSTEM:
        return DecoratedEvent(kind=SYSTEM, base=tr.label)
    if kind == INSERT:
        return DecoratedEvent(kind=INSERT, base=tr.label, context=pending)
    if kind == STOP:
        return DecoratedEvent(kind=STOP, base=EPSILON, context=pending)
    if kind == ERASE:
        return DecoratedEvent(kind=ERASE, base=pending, context=pending)
    if kind == DELIVER:
        return DecoratedEvent(kind=DELIVER, base=tr.label, context=tr.label)
    return DecoratedEvent(kind=DELIVER_ERASED, base=tr.label, context=tr.label)


def transform_monolithic(t: Tpo, name: str | None = None) -> TransformedAutomaton:
    """Encode one TPO as a plant automaton.

    The alphabet contains, besides the actual transitions' events, every
    decorated decision that is possible in principle for this TPO: inserts of
    any alphabet event and stops/erasures at every pending context, plus the
    deliveries that occur.  Carrying these alphabet-only decisions matters in
    products: a decision shared with another component must synchronize, so a
    component that cannot take it blocks it.
    """
    state_map = t.state_map()
    contexts = sorted({st.event for st in t.states if st.kind == Z})
    alphabet = sorted(ev.name for ev in t.events if ev.observable)
    events: dict[str, Event] = {}
    for base in alphabet:
        events[base] = DecoratedEvent(kind=SYSTEM, base=base).event()
    for context in contexts:
        for base in alphabet:
            dec = DecoratedEvent(kind=INSERT, base=base, context=context)
            events[dec.name] = dec.event()
        for dec in (
            DecoratedEvent(kind=STOP, base=EPSILON, context=context),
            DecoratedEvent(kind=ERASE, base=context, context=context),
        ):
            events[dec.name] = dec.event()
    transitions: list[Transition] = []
    decorations: dict[str, DecoratedEvent] = {}
    for tr in t.transitions:
        pending = state_map[tr.source].event if state_map[tr.source].kind == Z else None
        dec = _decorate(tr, pending)
        if dec.name not in events:
            events[dec.name] = dec.event()
        decorations[dec.name] = dec
        transitions.append((tr.source, dec.name, tr.target))
    for ev_name in events:
        decorations.setdefault(ev_name, parse_decorated(ev_name))
    states = tuple(
        State(name=st.name, initial=(st.name == t.initial), marked=(st.kind == Y), secret=False)
        for st in t.states
    )
    automaton = Automaton(
        name=name or f"{t.name}^T",
        events=tuple(sorted(events.values(), key=lambda ev: ev.name)),
        states=states,
        transitions=tuple(transitions),
    )
    if not automaton.is_deterministic:
        raise InvalidAutomaton("transformed TPO is not deterministic")
    origins = {st.name: st.kind for st in t.states}
    return TransformedAutomaton(automaton=automaton, origins=origins, decorations=decorations)


def transform_modular(
    ts: Sequence[Tpo],
    alphabets: Sequence[Iterable[Event]],
    names: Sequence[str] | None = None,
) -> tuple[TransformedAutomaton, ...]:
    """Encode each component TPO for modular composition.

    Per component ``i``: plain system events local to other components
    self-loop at every Y state (so foreign activity cannot block it), and the
    shared events contextualized by foreign-local events enter the alphabet as
    insert/deliver/deliver-erased decorations with no transitions (so such
    decisions are disabled in the product rather than taken unilaterally).
    """
    sigma: list[dict[str, Event]] = []
    for i, alphabet in enumerate(alphabets):
        table = {ev.name: ev for ev in alphabet}
        tpo_events = {ev.name for ev in ts[i].events}
        if not tpo_events <= set(table):
            raise InvalidAutomaton(f"component {i}: TPO alphabet not covered by declared alphabet")
        sigma.append(table)
    results = []
    for i, t in enumerate(ts):
        name = names[i] if names else f"{t.name}^T"
        mono = transform_monolithic(t, name=name)
        events = {ev.name: ev for ev in mono.automaton.events}
        decorations = dict(mono.decorations)
        transitions = list(mono.automaton.transitions)
        local = set(sigma[i])
        foreign: set[str] = set()
        for j, table in enumerate(sigma):
            if j != i:
                foreign |= set(table) - local
        for alpha in sorted(foreign):
            dec = DecoratedEvent(kind=SYSTEM, base=alpha)
            events.setdefault(alpha, dec.event())
            decorations.setdefault(alpha, dec)
            for st in mono.automaton.states:
                if mono.origins[st.name] == Y:
                    transitions.append((st.name, alpha, st.name))
        for j, table in enumerate(sigma):
            if j == i:
                continue
            shared = sorted(local & set(table))
            for alpha in sorted(set(table) - local):
                for base in shared:
                    for dec in (
                        DecoratedEvent(kind=INSERT, base=base, context=alpha),
                        DecoratedEvent(kind=DELIVER, base=base, context=alpha),
                        DecoratedEvent(kind=DELIVER_ERASED, base=base, context=alpha),
                    ):
                        events.setdefault(dec.name, dec.event())
                        decorations.setdefault(dec.name, dec)
        automaton = Automaton(
            name=name,
            events=tuple(sorted(events.values(), key=lambda ev: ev.name)),
            states=mono.automaton.states,
            transitions=tuple(transitions),
        )
        results.append(
            TransformedAutomaton(automaton=automaton, origins=mono.origins, decorations=decorations)
        )
    return tuple(results)


def augment_missing_insertions(
    product: Automaton,
    tuple_map: Mapping[str, tuple[str, ...]],
    components: Sequence[TransformedAutomaton],
    bundles: Sequence["object"],
    name: str | None = None,
) -> Automaton:
    """Recover insertions the product loses because a component sits at a Y
    state while others hold a pending event.

    For a product state whose components are all at Y or Z origins with a
    pending context available, an event ``sigma`` may be inserted when every
    component knowing ``sigma`` is at a Y state whose intruder estimate can
    advance on ``sigma`` in its desired observer; those components advance
    their estimate, all others stay put.  The added edge is labeled with the
    insert decoration in the pending context.
    """
    observers = [bundle.h_obd.automaton for bundle in bundles]
    knows = [{ev.name for ev in bundle.component.events} for bundle in bundles]
    parsed: list[dict[str, str]] = [dict(comp.origins) for comp in components]

    def split_y(comp_idx: int, state_name: str) -> tuple[str, str]:
        # Y state names have the shape (x_d,x_f) with balanced braces.
        inner = state_name[1:-1]
        depth = 0
        for pos, ch in enumerate(inner):
            if ch in "({":
                depth += 1
            elif ch in ")}":
                depth -= 1
            elif ch == "," and depth == 0:
                return inner[:pos], inner[pos + 1 :]
        raise ValueError(f"cannot split state name {state_name!r}")

    name_index = {st.name: st for st in product.states}
    events = {ev.name: ev for ev in product.events}
    added: list[Transition] = []
    existing = set(product.transitions)
    for prod_state, parts in tuple_map.items():
        comp_states = parts[: len(components)]
        kinds = [parsed[i][comp_states[i]] for i in range(len(components))]
        if any(kind == W for kind in kinds):
            continue
        pending = None
        for i, kind in enumerate(kinds):
            if kind == Z:
                ctx = comp_states[i].rsplit(",", 1)[1][:-1]
                pending = ctx
                break
        if pending is None:
            continue
        all_events = sorted(set().union(*knows))
        for sigma in all_events:
            movers = [i for i in range(len(components)) if sigma in knows[i]]
            if not movers:
                continue
            targets = list(comp_states)
            ok = True
            moved_any = False
            for i in movers:
                if kinds[i] != Y:
                    ok = False
                    break
                x_d, x_f = split_y(i, comp_states[i])
                nxt = observers[i].successors(x_d, sigma)
                if not nxt:
                    ok = False
                    break
                targets[i] = f"({nxt[0]},{x_f})"
                moved_any = True
            if not ok or not moved_any:
                continue
            target_tuple = tuple(targets) + tuple(parts[len(components) :])
            target_name = None
            for cand, cand_parts in tuple_map.items():
                if cand_parts == target_tuple:
                    target_name = cand
                    break
            if target_name is None:
                continue
            dec = DecoratedEvent(kind=INSERT, base=sigma, context=pending)
            if dec.name not in events:
                events[dec.name] = dec.event()
            edge = (prod_state, dec.name, target_name)
            if edge not in existing:
                added.append(edge)
                existing.add(edge)
    return Automaton(
        name=name or f"{product.name}+ins",
        events=tuple(sorted(events.values(), key=lambda ev: ev.name)),
        states=product.states,
        transitions=tuple(list(product.transitions) + added),
    )
