"""Discrete Morse chain complexes and exact rational homology."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .complex import Simplex, SimplicialComplex, boundary_matrix_simplicial, fmt_simplex, incidence, simplex_key
from .errors import BoundarySquareError
from .gradient import (
    DEFAULT_MAX_PATHS,
    GradientVectorField,
    PathCounter,
    critical_set,
    enumerate_paths,
)
from .linalg import format_entry, is_zero, rank, zeros


@dataclass(frozen=True, eq=False)
class MorseChainComplex:
    complex: SimplicialComplex
    field: GradientVectorField
    bases: tuple[tuple[Simplex, ...], ...]
    boundaries: tuple[np.ndarray, ...]  # boundaries[q]: C_q -> C_{q-1}

    @property
    def top(self) -> int:
        return len(self.bases) - 1

    def basis(self, q: int) -> tuple[Simplex, ...]:
        return self.bases[q] if 0 <= q <= self.top else ()

    def rank_of(self, q: int) -> int:
        return len(self.basis(q))

    def boundary(self, q: int) -> np.ndarray:
        if 0 <= q <= self.top:
            return self.boundaries[q]
        return zeros(self.rank_of(q - 1), self.rank_of(q))

    @property
    def critical_counts(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    def position(self, q: int, s: Simplex) -> int:
        return self.bases[q].index(s)

    def betti(self) -> tuple[int, ...]:
        return betti(self.boundaries)


def connectedness_coefficient(
    K: SimplicialComplex,
    V: GradientVectorField,
    sigma: Simplex,
    alpha: Simplex,
    mode: str = "boundary",
    max_paths: int = DEFAULT_MAX_PATHS,
) -> int:
    """Signed V-path count between two simplices, by explicit enumeration.

    ``boundary``: dim alpha = dim sigma - 1; sums [sigma:nu] times the lower
    paths nu -> alpha over the facets nu of sigma. ``upper`` and ``lower``:
    same-dimension path sums of that type, trivial path included.
    """
    if mode == "boundary":
        if len(alpha) != len(sigma) - 1:
            raise ValueError("boundary mode needs dim alpha = dim sigma - 1")
        total = 0
        for nu in K.facets(sigma):
            paths = enumerate_paths(K, V, nu, alpha, "lower", max_paths)
            total += incidence(sigma, nu) * sum(p.weight for p in paths)
        return total
    if mode in ("upper", "lower"):
        return sum(p.weight for p in enumerate_paths(K, V, sigma, alpha, mode, max_paths))
    raise ValueError(f"unknown mode {mode!r}")


def build_morse_complex(
    K: SimplicialComplex,
    V: GradientVectorField,
    max_paths: int = DEFAULT_MAX_PATHS,
    counter: PathCounter | None = None,
) -> MorseChainComplex:
    """Morse complex on the critical simplices of V; checks that D.D = 0."""
    counter = counter or PathCounter(K, V, max_paths)
    bases = tuple(tuple(sorted(c, key=simplex_key)) for c in critical_set(K, V))
    mats = [zeros(0, len(bases[0]))]
    for q in range(1, K.dim + 1):
        rows = {s: i for i, s in enumerate(bases[q - 1])}
        d = zeros(len(bases[q - 1]), len(bases[q]))
        for j, sigma in enumerate(bases[q]):
            for x, c in counter.boundary(sigma).items():
                i = rows.get(x)
                if i is not None:
                    d[i, j] = c
        mats.append(d)
    for q in range(1, K.dim):
        if not is_zero(mats[q] @ mats[q + 1]):
            raise BoundarySquareError(f"Morse boundary does not square to zero in degree {q + 1}")
    return MorseChainComplex(K, V, bases, tuple(mats))


def simplicial_boundaries(K: SimplicialComplex) -> list[np.ndarray]:
    return [boundary_matrix_simplicial(K, q) for q in range(K.dim + 1)]


def betti(boundaries: Sequence[np.ndarray]) -> tuple[int, ...]:
    """Rational Betti numbers from boundary matrices D_0, D_1, ..., D_n.

    ``boundaries[q]`` maps C_q to C_{q-1}; degrees above n are zero.
    """
    n = len(boundaries)
    for q in range(n - 1):
        if boundaries[q].shape[1] != boundaries[q + 1].shape[0]:
            raise ValueError(f"boundary matrices in degrees {q}, {q + 1} do not compose")
    ranks = [rank(d) for d in boundaries] + [0]
    return tuple(boundaries[q].shape[1] - ranks[q] - ranks[q + 1] for q in range(n))


def simplicial_betti(K: SimplicialComplex) -> tuple[int, ...]:
    return betti(simplicial_boundaries(K))


def morse_equality_report(K: SimplicialComplex, V: GradientVectorField, mc: MorseChainComplex | None = None) -> dict:
    counts = [len(c) for c in critical_set(K, V)]
    b = list(simplicial_betti(K))
    chi = K.euler_characteristic()
    crit_sum = sum((-1) ** q * c for q, c in enumerate(counts))
    betti_sum = sum((-1) ** q * x for q, x in enumerate(b))
    return {
        "betti": b,
        "critical_counts": counts,
        "euler": chi,
        "critical_alternating_sum": crit_sum,
        "betti_alternating_sum": betti_sum,
        "pass": crit_sum == chi == betti_sum,
    }


def format_matrices(boundaries: Sequence[np.ndarray], bases=None) -> str:
    """Text dump: a ``dim q: rows=.., cols=..`` header, then dense rows."""
    out = []
    for q, d in enumerate(boundaries):
        out.append(f"dim {q}: rows={d.shape[0]}, cols={d.shape[1]}")
        if bases is not None:
            out.append("# cols: " + ", ".join(fmt_simplex(s) for s in bases[q]))
        for row in d:
            out.append(" ".join(format_entry(x) for x in row))
    return "\n".join(out) + "\n"
