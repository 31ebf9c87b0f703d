"""Shared fixtures: the two-component reference system and its synthesis."""

import pytest

from opacedit import (
    build_largest_tpo,
    demo_composed,
    demo_g1,
    demo_g2,
    demo_pair,
    desired_observer,
    determinize,
    synthesize_modular_edit_structure,
)


@pytest.fixture
def g1():
    return demo_g1()


@pytest.fixture
def g2():
    return demo_g2()


@pytest.fixture
def pair():
    return list(demo_pair())


@pytest.fixture
def composed():
    return demo_composed()


@pytest.fixture(scope="session")
def structure():
    """Modular edit structure for the reference pair with k=1."""
    return synthesize_modular_edit_structure(list(demo_pair()), max_erasures=1)


@pytest.fixture(scope="session")
def mono_tpo():
    """Largest TPO of the composed reference system."""
    g = demo_composed()
    obs = determinize(g)
    return build_largest_tpo(desired_observer(obs), obs)
