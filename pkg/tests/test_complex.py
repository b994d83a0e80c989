import itertools

import pytest

from dmorse.complex import (
    SimplicialComplex,
    boundary_matrix_simplicial,
    euler_characteristic,
    incidence,
    make_simplex,
    parse_complex,
    serialize_complex,
)
from dmorse.errors import ParseError
from dmorse.linalg import is_zero, rank


def test_parse_edge():
    K = parse_complex("0 1")
    assert set(K.simplices()) == {(0,), (1,), (0, 1)}


def test_parse_filled_triangle():
    assert parse_complex("0 1 2").f_vector == (3, 3, 1)


def test_parse_triangle_graph():
    K = parse_complex("0 1\n1 2\n0 2\n")
    assert K.f_vector == (3, 3)
    assert K.dim == 1


def test_parse_ignores_comments_and_blank_lines():
    K = parse_complex("# header\n\n2 0   # trailing\n")
    assert K.maximal_simplices() == [(0, 2)]


def test_parse_keeps_original_labels():
    K = parse_complex("10 3\n")
    assert K.vertices == (3, 10)


@pytest.mark.parametrize("text", ["", "# only a comment\n", "0 x\n", "0 0 1\n", "-1 2\n"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_complex(text)


def test_face_closure_is_checked():
    with pytest.raises(ValueError):
        SimplicialComplex([(0, 1)])


def test_make_simplex_rejects_bad_input():
    with pytest.raises(ValueError):
        make_simplex([])
    with pytest.raises(ValueError):
        make_simplex([1, 1])


@pytest.mark.parametrize(
    "sigma, alpha, sign",
    [((0, 1), (1,), 1), ((0, 1), (0,), -1), ((0, 1, 2), (0, 2), -1), ((0, 1, 2), (1, 2), 1), ((0, 1, 2), (0, 1), 1)],
)
def test_incidence(sigma, alpha, sign):
    assert incidence(sigma, alpha) == sign


def test_incidence_requires_facet():
    with pytest.raises(ValueError):
        incidence((0, 1, 2), (0,))


def test_edge_boundary_column():
    K = parse_complex("0 1")
    d = boundary_matrix_simplicial(K, 1)
    assert [int(x) for x in d[:, 0]] == [-1, 1]


def test_degree_zero_boundary_is_zero(complexes):
    for K in complexes.values():
        d = boundary_matrix_simplicial(K, 0)
        assert d.shape == (0, K.f_vector[0])


def test_boundary_out_of_range():
    K = parse_complex("0 1")
    with pytest.raises(ValueError):
        boundary_matrix_simplicial(K, 2)


def test_triangle_graph_rank():
    K = parse_complex("0 1\n1 2\n0 2\n")
    assert rank(boundary_matrix_simplicial(K, 1)) == 2


def test_boundary_squares_to_zero(complexes):
    for K in complexes.values():
        for q in range(1, K.dim):
            assert is_zero(boundary_matrix_simplicial(K, q) @ boundary_matrix_simplicial(K, q + 1))


def test_incidence_alternation(complexes):
    # the two routes sigma -> alpha -> omega through a codim-2 face cancel
    for K in complexes.values():
        for s in K.simplices():
            if len(s) < 3:
                continue
            for omega in itertools.combinations(s, len(s) - 2):
                routes = [a for a in K.facets(s) if set(omega) <= set(a)]
                assert len(routes) == 2
                a, b = routes
                assert incidence(s, a) * incidence(a, omega) == -incidence(s, b) * incidence(b, omega)


@pytest.mark.parametrize("name, chi", [("edge", 1), ("triangle_graph", 0), ("hexagon_chord", 0), ("tetrahedron_boundary", 2)])
def test_euler_characteristic(complexes, name, chi):
    assert euler_characteristic(complexes[name]) == chi


def test_hexagon_chord_counts(complexes):
    assert complexes["hexagon_chord"].f_vector == (6, 7, 1)


def test_hasse_edges_per_simplex(complexes):
    for K in complexes.values():
        for s in K.simplices():
            if len(s) > 1:
                edges = [e for e in K.hasse.edges if e.sigma == s]
                assert len(edges) == len(s)
                assert all(len(e.alpha) == len(s) - 1 and e.sign == incidence(s, e.alpha) for e in edges)


def test_serialize_round_trip(complexes):
    for K in complexes.values():
        text = serialize_complex(K)
        assert parse_complex(text) == K
        lines = text.splitlines()
        assert lines == sorted(lines, key=lambda l: [int(v) for v in l.split()])
