from pathlib import Path

import pytest

from dmorse import corpus

DATA = Path(__file__).parent / "data"

SMALL = ["edge", "triangle_graph", "filled_triangle", "hexagon_chord", "tetrahedron_boundary"]


@pytest.fixture(scope="session")
def complexes():
    return {name: corpus.load(name) for name in corpus.CORPUS}


@pytest.fixture(scope="session")
def hexagon_chord():
    K = corpus.load("hexagon_chord")
    V1, V2 = corpus.hexagon_chord_fields(K)
    return K, V1, V2
