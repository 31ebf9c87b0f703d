"""Supervisor synthesis over the transformed components and the constraint.

The plant is the synchronous product of the encoded components and the
constraint specification, with tuple states retaining which component state
and which constraint state they stand for.  The supremal controllable and
nonblocking supervisor is computed by the standard iterated fixpoint: remove
states that cannot reach a marked state, then states that lose an
uncontrollable event into removed territory, re-trim, repeat.  What remains is
the modular edit structure whose paths are exactly the decision sequences the
runtime may execute.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from .abstraction import AbstractionBundle, abstract_component
from .automata import Automaton, Event, InvalidAutomaton, State, Transition
from .constraint import build_constraint_automaton
from .tpo import Tpo, Y, build_largest_tpo
from .transform import TransformedAutomaton, transform_modular


def _tuple_name(parts: Sequence[str]) -> str:
    return "(" + "|".join(parts[:-1]) + "|K:" + parts[-1] + ")"


@dataclass(frozen=True)
class ProductPlant:
    automaton: Automaton
    tuple_map: Mapping[str, tuple[str, ...]]


def product_plant(
    components: Sequence[TransformedAutomaton],
    spec: Automaton,
    name: str = "plant",
) -> ProductPlant:
    """Synchronous product of the component encodings and the constraint.

    Events move exactly the participants that declare them; the constraint
    participates in every insert and erase decision.  Tuple states are named
    ``(c1|c2|...|K:xj)`` and the reachable part is kept.
    """
    parts = [comp.automaton for comp in components] + [spec]
    alphabets = [{ev.name for ev in part.events} for part in parts]
    merged: dict[str, Event] = {}
    for part in parts:
        for ev in part.events:
            known = merged.get(ev.name)
            if known is None:
                merged[ev.name] = ev
            elif known != ev:
                raise InvalidAutomaton(f"event {ev.name!r} has conflicting flags across components")
    events = tuple(sorted(merged.values(), key=lambda ev: ev.name))

    initials = []
    for part in parts:
        if not part.initial_states:
            return ProductPlant(
                automaton=Automaton(name=name, events=events, states=(), transitions=()),
                tuple_map={},
            )
        initials.append(part.initial_states[0])
    start = tuple(initials)
    tuple_map: dict[str, tuple[str, ...]] = {}
    index: dict[tuple[str, ...], str] = {}
    order: list[tuple[str, ...]] = []
    transitions: list[Transition] = []

    def admit(parts_tuple: tuple[str, ...]) -> str:
        if parts_tuple not in index:
            label = _tuple_name(parts_tuple)
            index[parts_tuple] = label
            tuple_map[label] = parts_tuple
            order.append(parts_tuple)
        return index[parts_tuple]

    admit(start)
    queue = deque([start])
    seen = {start}
    while queue:
        here = queue.popleft()
        src = index[here]
        for ev in events:
            targets = []
            stuck = False
            for i, part in enumerate(parts):
                if ev.name in alphabets[i]:
                    nxt = part.successors(here[i], ev.name)
                    if not nxt:
                        stuck = True
                        break
                    targets.append(nxt[0] if len(nxt) == 1 else None)
                    if targets[-1] is None:
                        raise InvalidAutomaton(
                            f"component {i} is nondeterministic on {ev.name!r}"
                        )
                else:
                    targets.append(here[i])
            if stuck:
                continue
            nxt_tuple = tuple(targets)
            dst = admit(nxt_tuple)
            if nxt_tuple not in seen:
                seen.add(nxt_tuple)
                queue.append(nxt_tuple)
            transitions.append((src, ev.name, dst))

    states = []
    for parts_tuple in order:
        label = index[parts_tuple]
        marked = all(
            part.state_map[parts_tuple[i]].marked for i, part in enumerate(parts)
        )
        states.append(
            State(name=label, initial=(parts_tuple == start), marked=marked, secret=False)
        )
    automaton = Automaton(name=name, events=events, states=tuple(states), transitions=tuple(transitions))
    return ProductPlant(automaton=automaton, tuple_map=tuple_map)


def supremal_controllable_nonblocking(
    plant: Automaton,
    log: Callable[[str], None] | None = None,
    name: str | None = None,
) -> Automaton:
    """Supremal controllable nonblocking state-subautomaton of ``plant``.

    Iterates coreachability pruning (drop states that cannot reach a marked
    state) before controllability pruning (drop states with an uncontrollable
    transition into dropped territory) until stable, re-trimming reachability
    each round.  The empty automaton is a legal result.
    """
    uncontrollable = {ev.name for ev in plant.events if not ev.controllable}
    alive = set(st.name for st in plant.states if st.name in plant.reachable_states())
    marked = plant.marked_states
    iteration = 0
    while True:
        iteration += 1
        changed = False
        # Coreachability: backward reachability from marked states inside alive.
        incoming: dict[str, list[str]] = {s: [] for s in alive}
        for src, _, dst in plant.transitions:
            if src in alive and dst in alive:
                incoming[dst].append(src)
        coreach = set(m for m in marked if m in alive)
        queue = deque(coreach)
        while queue:
            here = queue.popleft()
            for prev in incoming[here]:
                if prev not in coreach:
                    coreach.add(prev)
                    queue.append(prev)
        blocking = alive - coreach
        if blocking:
            changed = True
            if log:
                log(f"pass {iteration}: removed {len(blocking)} blocking")
            alive = coreach
        # Controllability: a kept state must keep all its uncontrollable moves.
        bad = set()
        for src, label, dst in plant.transitions:
            if src in alive and label in uncontrollable and dst not in alive:
                bad.add(src)
        while True:
            if not bad:
                break
            changed = True
            if log:
                log(f"pass {iteration}: removed {len(bad)} uncontrollable")
            alive -= bad
            bad = set()
            for src, label, dst in plant.transitions:
                if src in alive and label in uncontrollable and dst not in alive:
                    bad.add(src)
        # Reachability trim.
        adjacency: dict[str, list[str]] = {s: [] for s in alive}
        for src, _, dst in plant.transitions:
            if src in alive and dst in alive:
                adjacency[src].append(dst)
        reach = set(s for s in plant.initial_states if s in alive)
        queue = deque(reach)
        while queue:
            here = queue.popleft()
            for nxt in adjacency[here]:
                if nxt not in reach:
                    reach.add(nxt)
                    queue.append(nxt)
        if reach != alive:
            changed = True
            if log:
                log(f"pass {iteration}: removed {len(alive - reach)} unreachable")
            alive = reach
        if not changed:
            break
    states = tuple(st for st in plant.states if st.name in alive)
    transitions = tuple(t for t in plant.transitions if t[0] in alive and t[2] in alive)
    return Automaton(
        name=name or f"sup({plant.name})",
        events=plant.events,
        states=states,
        transitions=transitions,
    )


@dataclass(frozen=True)
class ModularEditStructure:
    """Everything synthesis produces: the abstractions, the encoded
    components, the constraint, the plant product and the supervisor."""

    bundles: tuple[AbstractionBundle, ...]
    components: tuple[TransformedAutomaton, ...]
    constraint: Automaton
    plant: Automaton
    tuple_map: Mapping[str, tuple[str, ...]]
    supervisor: Automaton
    max_erasures: int
    diagnostics: tuple[str, ...] = ()

    @property
    def removed_states(self) -> int:
        return len(self.plant.states) - len(self.supervisor.states)

    def is_empty(self) -> bool:
        return not self.supervisor.states

    def all_y(self, state_name: str) -> bool:
        parts = self.tuple_map[state_name]
        return all(
            self.components[i].origins[parts[i]] == Y for i in range(len(self.components))
        )


def synthesize_modular_edit_structure(
    systems: Sequence[Automaton],
    max_erasures: int,
    log: Callable[[str], None] | None = None,
) -> ModularEditStructure:
    """Full pipeline: abstract each component, build its TPO, encode, compose
    with the erasure constraint and synthesize the supervisor.

    An empty supervisor (or an empty desired observer for some component)
    does not raise; it is reported through ``diagnostics`` so callers can
    distinguish "no edit function exists" from bad input.
    """
    diagnostics: list[str] = []
    bundles = tuple(abstract_component(g) for g in systems)
    for i, bundle in enumerate(bundles):
        if bundle.h_obd.is_empty():
            diagnostics.append(
                f"opacity unenforceable for component {i}: empty desired observer"
            )
    tpos = [
        build_largest_tpo(bundle.h_obd, bundle.h_b, name=f"tpo{i}")
        for i, bundle in enumerate(bundles)
    ]
    components = transform_modular(
        tpos,
        [bundle.abstracted.events for bundle in bundles],
        names=[f"{g.name}^T" for g in systems],
    )
    constraint = build_constraint_automaton(max_erasures, components)
    plant = product_plant(components, constraint)
    supervisor = supremal_controllable_nonblocking(plant.automaton, log=log, name="supervisor")
    if not supervisor.states:
        diagnostics.append("no constrained edit function exists: empty supervisor")
    return ModularEditStructure(
        bundles=bundles,
        components=components,
        constraint=constraint,
        plant=plant.automaton,
        tuple_map=plant.tuple_map,
        supervisor=supervisor,
        max_erasures=max_erasures,
        diagnostics=tuple(diagnostics),
    )
