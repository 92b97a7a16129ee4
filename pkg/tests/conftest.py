from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from momentgraph.coxeter import (
    build_root_system,
    bruhat_graph,
    right_matching,
    weyl_fibration,
    weyl_monodromy,
)


@pytest.fixture(scope="session")
def a1():
    return build_root_system("A", 1)


@pytest.fixture(scope="session")
def a2():
    return build_root_system("A", 2)


@pytest.fixture(scope="session")
def a3():
    return build_root_system("A", 3)


@pytest.fixture(scope="session")
def b2():
    return build_root_system("B", 2)


@pytest.fixture(scope="session")
def a1_bundle(a1):
    b = weyl_fibration(a1, [1])
    b.require_valid()
    return b


@pytest.fixture(scope="session")
def a2_bundle(a2):
    b = weyl_fibration(a2, [1])
    b.require_valid()
    return b


@pytest.fixture(scope="session")
def rr_bundles(a1, a2, a3, b2):
    """The verification matrix: (label, bundle) pairs."""
    bundles = [
        ("A1 t=1", weyl_fibration(a1, [1])),
        ("A2 t=1", weyl_fibration(a2, [1])),
        ("B2 t=1", weyl_fibration(b2, [1])),
        ("B2 t=2", weyl_fibration(b2, [2])),
        ("A3 t=12", weyl_fibration(a3, [1, 2])),
    ]
    for _, b in bundles:
        b.require_valid()
        assert b.compatibility().ok and b.regularity().ok
    return bundles


@pytest.fixture(scope="session")
def a2_graph(a2):
    return bruhat_graph(a2)


@pytest.fixture(scope="session")
def a2_monodromy(a2, a2_graph):
    return weyl_monodromy(a2, a2_graph)


@pytest.fixture(scope="session")
def a2_matchings(a2, a2_graph):
    return [right_matching(a2, a2_graph, 1), right_matching(a2, a2_graph, 2)]
