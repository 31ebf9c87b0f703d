"""Plant composition and the supremal controllable nonblocking supervisor."""

from opacedit import (
    Automaton,
    Event,
    State,
    supremal_controllable_nonblocking,
    synthesize_modular_edit_structure,
)


def test_structure_is_nonempty(structure):
    assert not structure.is_empty()
    assert structure.removed_states == len(structure.plant.states) - len(
        structure.supervisor.states
    )
    assert structure.removed_states > 0
    assert not structure.diagnostics


def test_supervisor_is_subautomaton_of_plant(structure):
    plant_states = {st.name for st in structure.plant.states}
    plant_edges = set(structure.plant.transitions)
    assert {st.name for st in structure.supervisor.states} <= plant_states
    assert set(structure.supervisor.transitions) <= plant_edges


def test_supervisor_is_controllable(structure):
    # no kept state may lose an uncontrollable plant edge
    kept = {st.name for st in structure.supervisor.states}
    kept_edges = set(structure.supervisor.transitions)
    uncontrollable = {
        ev.name for ev in structure.plant.events if not ev.controllable
    }
    for src, label, dst in structure.plant.transitions:
        if src in kept and label in uncontrollable:
            assert (src, label, dst) in kept_edges


def test_supervisor_is_nonblocking(structure):
    sup = structure.supervisor
    marked = {st.name for st in sup.states if st.marked}
    assert marked
    incoming = {}
    for src, _, dst in sup.transitions:
        incoming.setdefault(dst, set()).add(src)
    coaccessible = set(marked)
    frontier = list(marked)
    while frontier:
        here = frontier.pop()
        for src in incoming.get(here, ()):
            if src not in coaccessible:
                coaccessible.add(src)
                frontier.append(src)
    assert {st.name for st in sup.states} == coaccessible


def test_marked_states_are_all_y_tuples(structure):
    for st in structure.supervisor.states:
        assert st.marked == structure.all_y(st.name)


def test_uncontrollable_branch_to_blocking_state_is_cut():
    # u is uncontrollable and leads somewhere that can never reach a marked
    # state, so the controllable entry c into that region must be disabled
    plant = Automaton(
        name="plant",
        events=(Event("c", controllable=True), Event("u", controllable=False)),
        states=(
            State("p0", initial=True, marked=True),
            State("p1"),
            State("p2"),
        ),
        transitions=(("p0", "c", "p1"), ("p1", "u", "p2")),
    )
    sup = supremal_controllable_nonblocking(plant)
    names = {st.name for st in sup.states}
    assert names == {"p0"}


def test_synthesis_logs_passes(pair):
    lines = []
    synthesize_modular_edit_structure(pair, max_erasures=1, log=lines.append)
    assert lines
    assert all("pass" in line for line in lines)


def test_unenforceable_component_reports_diagnostics():
    exposed = Automaton(
        name="exposed",
        events=(Event("a"),),
        states=(State("s0", initial=True, secret=True), State("s1")),
        transitions=(("s0", "a", "s1"),),
    )
    m = synthesize_modular_edit_structure([exposed], max_erasures=1)
    assert m.is_empty()
    assert any("unenforceable" in d for d in m.diagnostics)
    assert any("empty supervisor" in d for d in m.diagnostics)


def test_product_tuple_map_tracks_components(structure):
    width = len(structure.components) + 1  # components plus the constraint
    for name, parts in structure.tuple_map.items():
        assert len(parts) == width
        assert name.startswith("(") and name.endswith(")")


def test_monolithic_supervisor_matches_fixture_aes():
    from opacedit import demo_composed
    from opacedit.oracle import check_supervisor_equals_aes

    assert check_supervisor_equals_aes(demo_composed(), max_erasures=1)


def test_plant_blocks_foreign_context_shared_decisions(structure):
    # decisions declared but never enabled stay impossible in the product
    labelled = {label for _, label, _ in structure.plant.transitions}
    assert "ins:alpha@beta" not in labelled
    plant_events = {ev.name for ev in structure.plant.events}
    assert "ins:alpha@beta" in plant_events
