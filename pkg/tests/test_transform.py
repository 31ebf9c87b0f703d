"""Encoding TPOs as plants: decorated events, origins, modular alphabets."""

import pytest

from opacedit import (
    DecoratedEvent,
    abstract_component,
    build_largest_tpo,
    parse_decorated,
    transform_modular,
    transform_monolithic,
)
from opacedit.transform import run_label


def test_decorated_name_round_trip(structure):
    for comp in structure.components:
        for name, dec in comp.decorations.items():
            assert dec.name == name
            assert parse_decorated(name) == dec


def test_decoration_controllability(structure):
    for comp in structure.components:
        for dec in comp.decorations.values():
            if dec.kind in ("insert", "stop", "erase"):
                assert dec.controllable
            else:
                assert not dec.controllable


def test_parse_decorated_rejects_garbage():
    with pytest.raises(ValueError):
        parse_decorated("ins:a")  # missing context
    with pytest.raises(ValueError):
        parse_decorated("stop@")
    with pytest.raises(ValueError):
        parse_decorated("frob:a@b")  # unknown prefix with decoration syntax
    # plain names without decoration syntax stay system events
    assert parse_decorated("frobnicate").kind == "system"


def test_monolithic_encoding_mirrors_tpo(mono_tpo):
    enc = transform_monolithic(mono_tpo)
    assert set(enc.origins) == set(mono_tpo.state_map())
    # marked states are exactly the Y layer
    for st in enc.automaton.states:
        assert st.marked == (enc.origins[st.name] == "Y")
    # every plant edge carries the run label of the matching TPO edge
    tpo_edges = {
        (tr.source, run_label_of(tr), tr.target) for tr in mono_tpo.transitions
    }
    for src, label, dst in enc.automaton.transitions:
        dec = enc.decorations[label]
        assert (src, run_label(dec), dst) in tpo_edges


def run_label_of(tr):
    from opacedit.automata import EPSILON

    label = EPSILON if tr.cls == "zw1" else tr.label
    return (tr.cls, label)


def test_monolithic_encoding_is_deterministic(mono_tpo):
    enc = transform_monolithic(mono_tpo)
    seen = set()
    for src, label, dst in enc.automaton.transitions:
        assert (src, label) not in seen
        seen.add((src, label))


def test_modular_alphabet_blocks_foreign_context_shared_decisions(structure):
    # a shared event decided under a context the component cannot observe is
    # declared but never enabled, so the product blocks it
    comp = structure.components[0]
    events = {ev.name for ev in comp.automaton.events}
    labelled = {label for _, label, _ in comp.automaton.transitions}
    assert "ins:alpha@beta" in events
    assert "ins:alpha@beta" not in labelled


def test_modular_foreign_private_events_self_loop(structure):
    comp = structure.components[0]  # alphabet gamma/alpha; beta is foreign
    loops = [
        (src, dst) for src, label, dst in comp.automaton.transitions if label == "beta"
    ]
    assert loops
    assert all(src == dst for src, dst in loops)
    for src, _ in loops:
        assert comp.origins[src] == "Y"
    assert not comp.automaton.event_map["beta"].controllable


def test_modular_own_decisions_present(structure):
    comp0, comp1 = structure.components
    labels0 = {label for _, label, _ in comp0.automaton.transitions}
    labels1 = {label for _, label, _ in comp1.automaton.transitions}
    assert "erz:gamma@gamma" in labels0
    assert "stop@beta" in labels1
    # shared-event decisions appear in both components
    assert "erz:alpha@alpha" in labels0 and "erz:alpha@alpha" in labels1


def test_augment_adds_only_insertion_edges(pair):
    from opacedit import augment_missing_insertions, build_constraint_automaton, product_plant

    bundles = [abstract_component(g) for g in pair]
    tpos = [build_largest_tpo(b.h_obd, b.h_b) for b in bundles]
    components = transform_modular(
        tpos, [b.abstracted.events for b in bundles], names=["L", "R"]
    )
    spec = build_constraint_automaton(0, components, name="K0")
    plant = product_plant(components, spec, name="product")
    augmented = augment_missing_insertions(
        plant.automaton, plant.tuple_map, components, bundles
    )
    old_edges = set(plant.automaton.transitions)
    new_edges = set(augmented.transitions)
    assert old_edges <= new_edges
    assert augmented.states == plant.automaton.states
    for _, label, _ in new_edges - old_edges:
        assert parse_decorated(label).kind == "insert"
