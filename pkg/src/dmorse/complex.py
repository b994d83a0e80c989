"""Finite abstract simplicial complexes with sorted-vertex orientation.

A simplex is a strictly increasing tuple of non-negative vertex labels.
Simplices are oriented by that vertex order, so the incidence number of a
facet is ``(-1)**i`` where ``i`` is the position of the dropped vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import ParseError
from .linalg import zeros

Simplex = tuple[int, ...]


def make_simplex(vertices: Iterable[int]) -> Simplex:
    vs = list(vertices)
    if not vs:
        raise ValueError("a simplex needs at least one vertex")
    if any((not isinstance(v, int)) or v < 0 for v in vs):
        raise ValueError(f"vertex labels must be non-negative integers: {vs}")
    s = tuple(sorted(vs))
    if len(set(s)) != len(s):
        raise ValueError(f"duplicate vertex in simplex {vs}")
    return s


def dim(s: Simplex) -> int:
    return len(s) - 1


def simplex_key(s: Simplex) -> tuple[int, Simplex]:
    """Sort key: dimension first, then lexicographic vertices."""
    return (len(s), s)


def facets_of(s: Simplex) -> list[Simplex]:
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def incidence(sigma: Simplex, alpha: Simplex) -> int:
    """Incidence number [sigma : alpha] for a facet alpha of sigma."""
    if len(alpha) != len(sigma) - 1 or not set(alpha) <= set(sigma):
        raise ValueError(f"{alpha} is not a facet of {sigma}")
    for i, v in enumerate(sigma):
        if i == len(alpha) or alpha[i] != v:
            return -1 if i % 2 else 1
    raise AssertionError("unreachable")


def fmt_simplex(s: Simplex) -> str:
    return " ".join(map(str, s))


@dataclass(frozen=True)
class HasseEdge:
    alpha: Simplex
    sigma: Simplex
    sign: int


@dataclass(frozen=True)
class HasseDiagram:
    nodes: tuple[Simplex, ...]
    edges: tuple[HasseEdge, ...]


class SimplicialComplex:
    """Immutable face-closed family of simplices."""

    def __init__(self, simplices: Iterable[Iterable[int]]):
        found = {make_simplex(s) for s in simplices}
        if not found:
            raise ValueError("empty simplicial complex")
        for s in found:
            for f in facets_of(s):
                if f not in found:
                    raise ValueError(f"not face-closed: {f} missing below {s}")
        top = max(len(s) for s in found) - 1
        by_dim: list[list[Simplex]] = [[] for _ in range(top + 1)]
        for s in found:
            by_dim[len(s) - 1].append(s)
        self._by_dim = tuple(tuple(sorted(layer)) for layer in by_dim)
        self._all = frozenset(found)

    @classmethod
    def from_maximal(cls, simplices: Iterable[Iterable[int]]) -> SimplicialComplex:
        """Face closure of the given simplices."""
        closure: set[Simplex] = set()
        for s in simplices:
            s = make_simplex(s)
            for k in range(1, len(s) + 1):
                closure.update(combinations(s, k))
        return cls(closure)

    @property
    def dim(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, q: int | None = None) -> tuple[Simplex, ...]:
        if q is None:
            return tuple(s for layer in self._by_dim for s in layer)
        if 0 <= q <= self.dim:
            return self._by_dim[q]
        return ()

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self._by_dim[0])

    def __len__(self) -> int:
        return len(self._all)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._all

    def __iter__(self):
        return iter(self.simplices())

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and self._all == other._all

    def __hash__(self) -> int:
        return hash(self._all)

    def __repr__(self) -> str:
        return f"SimplicialComplex(f_vector={self.f_vector})"

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self._by_dim)

    def facets(self, s: Simplex) -> list[Simplex]:
        return facets_of(s)

    @cached_property
    def _cofacets(self) -> dict[Simplex, tuple[Simplex, ...]]:
        co: dict[Simplex, list[Simplex]] = {s: [] for s in self._all}
        for s in self._all:
            for f in facets_of(s):
                co[f].append(s)
        return {s: tuple(sorted(v)) for s, v in co.items()}

    def cofacets(self, s: Simplex) -> tuple[Simplex, ...]:
        return self._cofacets[s]

    @cached_property
    def index(self) -> dict[Simplex, int]:
        """Position of each simplex within its dimension layer."""
        return {s: i for layer in self._by_dim for i, s in enumerate(layer)}

    @cached_property
    def hasse(self) -> HasseDiagram:
        edges = [
            HasseEdge(a, s, incidence(s, a))
            for s in self.simplices()
            for a in sorted(facets_of(s))
        ]
        return HasseDiagram(self.simplices(), tuple(edges))

    def maximal_simplices(self) -> list[Simplex]:
        return sorted(s for s in self._all if not self._cofacets[s])

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * n for q, n in enumerate(self.f_vector))

    def boundary_matrix(self, q: int) -> np.ndarray:
        return boundary_matrix_simplicial(self, q)


def euler_characteristic(K: SimplicialComplex) -> int:
    return K.euler_characteristic()


def boundary_matrix_simplicial(K: SimplicialComplex, q: int) -> np.ndarray:
    """Simplicial boundary C_q -> C_{q-1}; rows K_{q-1}, columns K_q.

    In degree 0 the boundary is the zero map onto the trivial group.
    """
    if not 0 <= q <= K.dim:
        raise ValueError(f"degree {q} outside 0..{K.dim}")
    cols = K.simplices(q)
    if q == 0:
        return zeros(0, len(cols))
    rows = K.simplices(q - 1)
    row_of = {s: i for i, s in enumerate(rows)}
    d = zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        for a in facets_of(s):
            d[row_of[a], j] = incidence(s, a)
    return d


def parse_complex(text: str) -> SimplicialComplex:
    """Parse the maximal-simplex text format into its face closure."""
    tops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vs = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: expected integers, got {raw!r}") from None
        if any(v < 0 for v in vs):
            raise ParseError(f"line {lineno}: negative vertex label")
        if len(set(vs)) != len(vs):
            raise ParseError(f"line {lineno}: duplicate vertex in {raw!r}")
        tops.append(vs)
    if not tops:
        raise ParseError("no simplices in input")
    return SimplicialComplex.from_maximal(tops)


def serialize_complex(K: SimplicialComplex) -> str:
    return "".join(fmt_simplex(s) + "\n" for s in K.maximal_simplices())


def load_complex(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())
