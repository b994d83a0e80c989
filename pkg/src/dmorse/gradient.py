"""Discrete Morse functions, gradient vector fields and gradient paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping

from .complex import Simplex, SimplicialComplex, fmt_simplex, incidence, make_simplex, simplex_key
from .errors import GuardExceeded, InvalidMatching, InvalidMorseFunction, ParseError

DEFAULT_MAX_PATHS = 10**6

Pair = tuple[Simplex, Simplex]


def _pair_key(p: Pair):
    return (simplex_key(p[1]), simplex_key(p[0]))


@dataclass(frozen=True)
class GradientVectorField:
    """A set of facet pairs (alpha, sigma); build with :meth:`on` to validate."""

    pairs: frozenset[Pair] = field(default_factory=frozenset)

    @classmethod
    def on(cls, K: SimplicialComplex, pairs: Iterable[Pair] = (), check_acyclic: bool = True):
        V = cls(frozenset((tuple(a), tuple(s)) for a, s in pairs))
        check_matching(K, V.pairs)
        if check_acyclic:
            ok, cycle = is_acyclic(K, V.pairs)
            if not ok:
                raise InvalidMatching("closed V-path: " + " -> ".join(fmt_simplex(s) for s in cycle))
        return V

    @cached_property
    def up(self) -> dict[Simplex, Simplex]:
        return {a: s for a, s in self.pairs}

    @cached_property
    def down(self) -> dict[Simplex, Simplex]:
        return {s: a for a, s in self.pairs}

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs, key=_pair_key)

    def is_matched(self, s: Simplex) -> bool:
        return s in self.up or s in self.down

    def __len__(self) -> int:
        return len(self.pairs)

    def __or__(self, other: Iterable[Pair]) -> GradientVectorField:
        return GradientVectorField(self.pairs | frozenset(other))

    def __sub__(self, other: Iterable[Pair]) -> GradientVectorField:
        return GradientVectorField(self.pairs - frozenset(other))


def check_matching(K: SimplicialComplex, pairs: Iterable[Pair]) -> None:
    seen: set[Simplex] = set()
    for a, s in pairs:
        if a not in K or s not in K:
            raise InvalidMatching(f"pair ({fmt_simplex(a)} | {fmt_simplex(s)}) not in complex")
        if len(a) != len(s) - 1 or not set(a) <= set(s):
            raise InvalidMatching(f"{fmt_simplex(a)} is not a facet of {fmt_simplex(s)}")
        for x in (a, s):
            if x in seen:
                raise InvalidMatching(f"simplex {fmt_simplex(x)} occurs in two pairs")
            seen.add(x)


def is_acyclic(K: SimplicialComplex, pairs: Iterable[Pair]) -> tuple[bool, list[Simplex] | None]:
    """Check the modified Hasse digraph for directed cycles.

    Matched pairs point upward, every other covering relation points down.
    On failure the second item is a closed V-path ``a0, b0, a1, ..., a0``.
    """
    pairs = list(pairs)
    check_matching(K, pairs)
    up = dict(pairs)
    preds: dict[Simplex, list[Simplex]] = {s: [] for s in K.simplices()}
    for e in K.hasse.edges:
        if up.get(e.alpha) == e.sigma:
            preds[e.sigma].append(e.alpha)
        else:
            preds[e.alpha].append(e.sigma)
    try:
        tuple(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        cycle = list(exc.args[1])
        # graphlib may report the cycle against arc direction
        if not all(a in preds[b] for a, b in zip(cycle, cycle[1:])):
            cycle.reverse()
        cycle = cycle[:-1]
        n = len(cycle)
        start = next(i for i in range(n) if up.get(cycle[i]) == cycle[(i + 1) % n])
        cycle = cycle[start:] + cycle[:start]
        return False, cycle + [cycle[0]]
    return True, None


def closes_cycle(K: SimplicialComplex, up: Mapping[Simplex, Simplex], alpha: Simplex, sigma: Simplex) -> bool:
    """Would adding the free pair (alpha, sigma) to an acyclic matching close a V-path?"""
    stack = [sigma]
    seen = {sigma}
    while stack:
        b = stack.pop()
        for nu in K.facets(b):
            if b == sigma and nu == alpha:
                continue
            if nu == alpha:
                return True
            nb = up.get(nu)
            if nb is not None and nb != b and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return False


def critical_set(K: SimplicialComplex, V: GradientVectorField) -> tuple[tuple[Simplex, ...], ...]:
    return tuple(
        tuple(s for s in K.simplices(q) if not V.is_matched(s)) for q in range(K.dim + 1)
    )


def critical_counts(K: SimplicialComplex, V: GradientVectorField) -> tuple[int, ...]:
    return tuple(len(c) for c in critical_set(K, V))


# -- discrete Morse functions ------------------------------------------------

DiscreteMorseFunction = dict  # Simplex -> Fraction


@dataclass
class Violation:
    simplex: Simplex
    condition: str  # "cofacets" (condition 1) or "facets" (condition 2)
    witnesses: tuple[Simplex, ...]


@dataclass
class DMFReport:
    ok: bool
    violations: list[Violation]


def validate_dmf(K: SimplicialComplex, f: Mapping[Simplex, Fraction]) -> DMFReport:
    missing = [s for s in K.simplices() if s not in f]
    if missing:
        raise InvalidMorseFunction(f"no value for simplex {fmt_simplex(missing[0])}")
    violations = []
    both = []
    for s in K.simplices():
        hi = tuple(t for t in K.cofacets(s) if f[t] <= f[s])
        lo = tuple(v for v in K.facets(s) if f[s] <= f[v])
        if len(hi) > 1:
            violations.append(Violation(s, "cofacets", hi))
        if len(lo) > 1:
            violations.append(Violation(s, "facets", lo))
        if hi and lo:
            both.append(s)
    if not violations and both:
        raise AssertionError(f"exclusion fails at {fmt_simplex(both[0])} for a valid discrete Morse function")
    return DMFReport(not violations, violations)


def dmf_to_gvf(K: SimplicialComplex, f: Mapping[Simplex, Fraction]) -> GradientVectorField:
    report = validate_dmf(K, f)
    if not report.ok:
        v = report.violations[0]
        raise InvalidMorseFunction(f"condition on {v.condition} fails at {fmt_simplex(v.simplex)}")
    pairs = [(e.alpha, e.sigma) for e in K.hasse.edges if f[e.alpha] >= f[e.sigma]]
    check_matching(K, pairs)
    ok, cycle = is_acyclic(K, pairs)
    if not ok:
        raise AssertionError(f"discrete Morse function induced a closed V-path {cycle}")
    return GradientVectorField(frozenset(pairs))


def gvf_to_dmf(K: SimplicialComplex, V: GradientVectorField) -> dict[Simplex, Fraction]:
    """Integer-valued discrete Morse function whose gradient is exactly V.

    Matched pairs are contracted and the contracted digraph is topologically
    sorted; a pair shares one value, every unmatched cover strictly increases.
    """
    check_matching(K, V.pairs)

    def rep(s):
        return V.up.get(s, s)

    ts: TopologicalSorter = TopologicalSorter()
    for s in sorted(K.simplices(), key=simplex_key):
        ts.add(rep(s))
    for e in K.hasse.edges:
        if V.up.get(e.alpha) != e.sigma:
            ts.add(rep(e.sigma), rep(e.alpha))
    try:
        order = list(ts.static_order())
    except CycleError:
        raise InvalidMatching("gradient vector field is not acyclic") from None
    value = {node: Fraction(i) for i, node in enumerate(order)}
    return {s: value[rep(s)] for s in K.simplices()}


# -- gradient paths -----------------------------------------------------------

@dataclass(frozen=True)
class GradientPath:
    simplices: tuple[Simplex, ...]
    weight: int
    mode: str

    @property
    def length(self) -> int:
        return (len(self.simplices) - 1) // 2


def lower_step(beta: Simplex, a: Simplex, nu: Simplex) -> int:
    return -incidence(beta, a) * incidence(beta, nu)


def upper_step(b: Simplex, a: Simplex, nb: Simplex) -> int:
    return -incidence(b, a) * incidence(nb, a)


def enumerate_paths(
    K: SimplicialComplex,
    V: GradientVectorField,
    start: Simplex,
    end: Simplex,
    mode: str = "lower",
    max_paths: int = DEFAULT_MAX_PATHS,
) -> list[GradientPath]:
    """All V-paths from ``start`` to ``end`` by exhaustive search.

    ``lower`` paths run a0, b0, a1, ... through pairs (a_i, b_i) one dimension
    up; ``upper`` paths run b0, a1, b1, ... ending on the top of a pair. The
    trivial path is included when ``start == end``.
    """
    if len(start) != len(end):
        raise ValueError("paths join simplices of equal dimension")
    if mode not in ("lower", "upper"):
        raise ValueError(f"unknown path mode {mode!r}")
    found: list[GradientPath] = []
    visited = 0
    stack = [((start,), 1)]
    while stack:
        path, w = stack.pop()
        visited += 1
        if visited > max_paths:
            raise GuardExceeded(f"more than {max_paths} partial V-paths from {fmt_simplex(start)}")
        if len(path) > 2 * len(K) + 1:
            raise AssertionError("V-path longer than the complex; matching is cyclic")
        here = path[-1]
        if here == end:
            found.append(GradientPath(path, w, mode))
            continue
        if mode == "lower":
            b = V.up.get(here)
            if b is None:
                continue
            for nu in K.facets(b):
                if nu != here:
                    stack.append((path + (b, nu), w * lower_step(b, here, nu)))
        else:
            for a in K.facets(here):
                if V.down.get(here) == a:
                    continue
                nb = V.up.get(a)
                if nb is None or nb == here:
                    continue
                stack.append((path + (a, nb), w * upper_step(here, a, nb)))
    found.sort(key=lambda p: p.simplices)
    return found


class PathCounter:
    """Memoized weighted V-path sums for one gradient vector field.

    ``lower(a)`` maps every simplex reachable from ``a`` by a lower V-path to
    the signed number of such paths (trivial path included); ``upper`` is the
    same for upper paths. Counts are guarded like :func:`enumerate_paths`.
    """

    def __init__(self, K: SimplicialComplex, V: GradientVectorField, max_paths: int = DEFAULT_MAX_PATHS):
        self.K = K
        self.V = V
        self.max_paths = max_paths
        self._lower: dict[Simplex, tuple[dict, int]] = {}
        self._upper: dict[Simplex, tuple[dict, int]] = {}

    def _check(self, start, n):
        if n > self.max_paths:
            raise GuardExceeded(f"more than {self.max_paths} V-paths from {fmt_simplex(start)}")

    def _lower_entry(self, a: Simplex) -> tuple[dict, int]:
        if a in self._lower:
            return self._lower[a]
        self._lower[a] = None  # in-progress marker
        acc = {a: 1}
        count = 1
        b = self.V.up.get(a)
        if b is not None:
            for nu in self.K.facets(b):
                if nu == a:
                    continue
                sub = self._lower_entry(nu)
                if sub is None:
                    raise AssertionError("cyclic V-path")
                w = lower_step(b, a, nu)
                for x, c in sub[0].items():
                    acc[x] = acc.get(x, 0) + w * c
                count += sub[1]
        self._check(a, count)
        res = ({x: c for x, c in acc.items() if c}, count)
        self._lower[a] = res
        return res

    def _upper_entry(self, b: Simplex) -> tuple[dict, int]:
        if b in self._upper:
            return self._upper[b]
        self._upper[b] = None
        acc = {b: 1}
        count = 1
        for a in self.K.facets(b):
            if self.V.down.get(b) == a:
                continue
            nb = self.V.up.get(a)
            if nb is None or nb == b:
                continue
            sub = self._upper_entry(nb)
            if sub is None:
                raise AssertionError("cyclic V-path")
            w = upper_step(b, a, nb)
            for x, c in sub[0].items():
                acc[x] = acc.get(x, 0) + w * c
            count += sub[1]
        self._check(b, count)
        res = ({x: c for x, c in acc.items() if c}, count)
        self._upper[b] = res
        return res

    def lower(self, a: Simplex) -> dict[Simplex, int]:
        return self._lower_entry(a)[0]

    def upper(self, b: Simplex) -> dict[Simplex, int]:
        return self._upper_entry(b)[0]

    def boundary(self, sigma: Simplex) -> dict[Simplex, int]:
        """Sum over facets nu of [sigma:nu] times the lower flow out of nu."""
        acc: dict[Simplex, int] = {}
        for nu in self.K.facets(sigma):
            s = incidence(sigma, nu)
            for x, c in self.lower(nu).items():
                acc[x] = acc.get(x, 0) + s * c
        return {x: c for x, c in acc.items() if c}


# -- file formats -------------------------------------------------------------

def _parse_vertices(tok: str, lineno: int) -> Simplex:
    try:
        return make_simplex(int(t) for t in tok.split())
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_gvf(text: str, K: SimplicialComplex | None = None, check_acyclic: bool = True) -> GradientVectorField:
    """One pair per line, ``alpha_vertices | sigma_vertices``."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("|") != 1:
            raise ParseError(f"line {lineno}: expected 'alpha | sigma', got {raw!r}")
        left, right = line.split("|")
        pairs.append((_parse_vertices(left, lineno), _parse_vertices(right, lineno)))
    if K is None:
        return GradientVectorField(frozenset(pairs))
    return GradientVectorField.on(K, pairs, check_acyclic=check_acyclic)


def serialize_gvf(V: GradientVectorField) -> str:
    return "".join(f"{fmt_simplex(a)} | {fmt_simplex(s)}\n" for a, s in V.sorted_pairs())


def parse_dmf(text: str) -> dict[Simplex, Fraction]:
    """One simplex per line, ``vertices : value`` with value ``p/q`` or integer."""
    f: dict[Simplex, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count(":") != 1:
            raise ParseError(f"line {lineno}: expected 'vertices : value', got {raw!r}")
        left, right = line.split(":")
        s = _parse_vertices(left, lineno)
        try:
            val = Fraction(right.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {lineno}: bad value {right.strip()!r}") from None
        if s in f:
            raise ParseError(f"line {lineno}: duplicate simplex {fmt_simplex(s)}")
        f[s] = val
    return f


def serialize_dmf(f: Mapping[Simplex, Fraction]) -> str:
    return "".join(f"{fmt_simplex(s)} : {f[s]}\n" for s in sorted(f, key=simplex_key))
