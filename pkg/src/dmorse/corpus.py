"""Small fixture complexes used by the test and acceptance suites."""

from __future__ import annotations

from .complex import SimplicialComplex
from .gradient import GradientVectorField

EDGE = "0 1\n"
TRIANGLE_GRAPH = "0 1\n1 2\n0 2\n"
FILLED_TRIANGLE = "0 1 2\n"
# hexagon 1..6 with chord 1-5 and the filled triangle 1 5 6
HEXAGON_CHORD = "1 2\n2 3\n3 4\n4 5\n1 5 6\n"
TETRAHEDRON_BOUNDARY = "0 1 2\n0 1 3\n0 2 3\n1 2 3\n"
# 3x3 lattice points, row-major, each unit square cut along its main diagonal
GRID_2X2 = "".join(
    f"{v} {v + 1} {v + 4}\n{v} {v + 3} {v + 4}\n" for v in (0, 1, 3, 4)
)

CORPUS = {
    "edge": EDGE,
    "triangle_graph": TRIANGLE_GRAPH,
    "filled_triangle": FILLED_TRIANGLE,
    "hexagon_chord": HEXAGON_CHORD,
    "tetrahedron_boundary": TETRAHEDRON_BOUNDARY,
    "grid_2x2": GRID_2X2,
}


def load(name: str) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(
        [int(v) for v in line.split()] for line in CORPUS[name].splitlines() if line.strip()
    )


def hexagon_chord_fields(K: SimplicialComplex) -> tuple[GradientVectorField, GradientVectorField]:
    """The two gradient fields of the birth-death example on :data:`HEXAGON_CHORD`.

    The first pairs vertex 1 with edge 1 5; the second leaves both critical.
    """
    shared = [((2,), (1, 2)), ((6,), (5, 6)), ((3,), (3, 4)), ((5,), (4, 5))]
    return (
        GradientVectorField.on(K, shared + [((1,), (1, 5))]),
        GradientVectorField.on(K, shared),
    )
