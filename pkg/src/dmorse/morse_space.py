"""The complex of discrete Morse functions and its augmentation by the empty face."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from .complex import SimplicialComplex, fmt_simplex
from .errors import GuardExceeded
from .gradient import GradientVectorField, Pair, closes_cycle, is_acyclic
from .morse_chain import simplicial_betti

DEFAULT_MAX_MATCHINGS = 10**5

EMPTY = "∅̃"  # the augmenting face of dimension -1


def primitive_vector_fields(K: SimplicialComplex) -> list[Pair]:
    return [(e.alpha, e.sigma) for e in K.hasse.edges]


def _gvf_key(V: GradientVectorField):
    return (len(V), V.sorted_pairs())


def enumerate_matchings(K: SimplicialComplex, max_count: int = DEFAULT_MAX_MATCHINGS) -> list[GradientVectorField]:
    """All acyclic matchings of the Hasse diagram, the empty one included."""
    edges = primitive_vector_fields(K)
    out: list[GradientVectorField] = []
    up: dict = {}
    used: set = set()
    chosen: list[Pair] = []

    def rec(idx: int):
        if idx == len(edges):
            out.append(GradientVectorField(frozenset(chosen)))
            if len(out) > max_count:
                raise GuardExceeded(f"more than {max_count} acyclic matchings")
            return
        rec(idx + 1)
        a, s = edges[idx]
        if a in used or s in used or closes_cycle(K, up, a, s):
            return
        used.update((a, s))
        up[a] = s
        chosen.append((a, s))
        rec(idx + 1)
        chosen.pop()
        del up[a]
        used.difference_update((a, s))

    rec(0)
    out.sort(key=_gvf_key)
    return out


def random_matching(K: SimplicialComplex, rng: random.Random, p: float = 0.5) -> GradientVectorField:
    """Greedy random acyclic matching: scan shuffled Hasse edges, keep each admissible one with probability p."""
    edges = primitive_vector_fields(K)
    rng.shuffle(edges)
    up: dict = {}
    used: set = set()
    for a, s in edges:
        if a in used or s in used or rng.random() >= p:
            continue
        if closes_cycle(K, up, a, s):
            continue
        up[a] = s
        used.update((a, s))
    return GradientVectorField(frozenset(up.items()))


@dataclass(frozen=True, eq=False)
class MorseFunctionComplex:
    complex: SimplicialComplex
    faces: tuple[GradientVectorField, ...]  # nonempty acyclic matchings
    augmented: bool

    @property
    def vertices(self) -> list[GradientVectorField]:
        return [F for F in self.faces if len(F) == 1]

    @property
    def f_vector(self) -> list[int]:
        top = max((len(F) for F in self.faces), default=0)
        counts = [0] * top
        for F in self.faces:
            counts[len(F) - 1] += 1
        return counts

    @property
    def num_matchings(self) -> int:
        return len(self.faces) + 1  # the empty matching

    def covering_relations(self) -> list[tuple[GradientVectorField, GradientVectorField]]:
        """(smaller, larger) pairs differing by one primitive field.

        The empty field appears as the lower end only when augmented.
        """
        rels = []
        for F in self.faces:
            if len(F) == 1 and not self.augmented:
                continue
            for p in sorted(F.pairs):
                rels.append((F - [p], F))
        return rels

    @cached_property
    def graph(self) -> nx.Graph:
        G = nx.Graph()
        for F in self.faces:
            G.add_node(F)
        if self.augmented:
            G.add_node(EMPTY)
        for lo, hi in self.covering_relations():
            G.add_edge(EMPTY if not lo.pairs else lo, hi)
        return G

    def as_simplicial_complex(self) -> SimplicialComplex:
        """The faces as a simplicial complex on primitive-field indices."""
        index = {p: i for i, p in enumerate(primitive_vector_fields(self.complex))}
        return SimplicialComplex.from_maximal([index[p] for p in F.pairs] for F in self.faces)


def build_morse_function_complex(
    K: SimplicialComplex, augmented: bool = False, max_count: int = DEFAULT_MAX_MATCHINGS
) -> MorseFunctionComplex:
    matchings = enumerate_matchings(K, max_count)
    faces = tuple(F for F in matchings if F.pairs)
    present = set(faces)
    for F in faces:
        for p in F.pairs:
            G = F - [p]
            if G.pairs and G not in present:
                raise AssertionError(f"subset of an acyclic matching missing: {sorted(G.pairs)}")
        assert is_acyclic(K, F.pairs)[0]
    return MorseFunctionComplex(K, faces, augmented)


def connectivity_report(mfc: MorseFunctionComplex, with_betti: bool = False) -> dict:
    report = {
        "num_matchings": mfc.num_matchings,
        "num_vertices": len(mfc.vertices),
        "f_vector": mfc.f_vector,
        "augmented": mfc.augmented,
        "covering_relations": len(mfc.covering_relations()),
        "components": nx.number_connected_components(mfc.graph) if mfc.graph.number_of_nodes() else 0,
    }
    if with_betti:
        report["betti"] = list(simplicial_betti(mfc.as_simplicial_complex())) if mfc.faces else []
    return report


def to_dot(mfc: MorseFunctionComplex) -> str:
    def name(F):
        if F == EMPTY:
            return EMPTY
        return " ".join(f"({fmt_simplex(a)}|{fmt_simplex(s)})" for a, s in F.sorted_pairs())

    lines = ["graph morse_function_complex {"]
    nodes = sorted(mfc.graph.nodes, key=lambda F: (-1, []) if F == EMPTY else _gvf_key(F))
    for F in nodes:
        lines.append(f'  "{name(F)}";')
    for lo, hi in mfc.covering_relations():
        style = " [style=dashed]" if not lo.pairs else ""
        lines.append(f'  "{name(lo if lo.pairs else EMPTY)}" -- "{name(hi)}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"
