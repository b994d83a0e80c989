"""Connectedness homomorphisms and birth-death transitions.

Naming follows the transition framing: of two gradient vector fields that
differ by one critical pair, ``field1`` has fewer critical simplices and
``field2`` has the extra pair (alpha~, sigma~). The birth map goes
C(field1) -> C(field2) and the death map goes back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import Simplex, SimplicialComplex, fmt_simplex
from .gradient import DEFAULT_MAX_PATHS, GradientVectorField, Pair, PathCounter, critical_set, is_acyclic
from .linalg import equal, hstack, identity, is_integral, nullspace, rank, to_jsonable, zeros
from .morse_chain import MorseChainComplex, build_morse_complex, connectedness_coefficient

TAGS = ("identity", "birth", "death", "composite", "generic")


class MorseCache:
    """Morse complexes and path counters keyed by gradient vector field."""

    def __init__(self, K: SimplicialComplex, max_paths: int = DEFAULT_MAX_PATHS):
        self.K = K
        self.max_paths = max_paths
        self._counters: dict[GradientVectorField, PathCounter] = {}
        self._complexes: dict[GradientVectorField, MorseChainComplex] = {}

    def counter(self, V: GradientVectorField) -> PathCounter:
        if V not in self._counters:
            self._counters[V] = PathCounter(self.K, V, self.max_paths)
        return self._counters[V]

    def morse(self, V: GradientVectorField) -> MorseChainComplex:
        if V not in self._complexes:
            self._complexes[V] = build_morse_complex(self.K, V, counter=self.counter(V))
        return self._complexes[V]


def _cache(K, ctx, max_paths=DEFAULT_MAX_PATHS) -> MorseCache:
    if ctx is None:
        return MorseCache(K, max_paths)
    if ctx.K is not K and ctx.K != K:
        raise ValueError("cache belongs to a different complex")
    return ctx


@dataclass(frozen=True, eq=False)
class TransitionPair:
    alpha_tilde: Simplex
    sigma_tilde: Simplex
    k: int
    direction: str  # of the map C(V1) -> C(V2) as passed to detect_transition
    field1: GradientVectorField  # fewer critical simplices
    field2: GradientVectorField  # carries the extra critical pair
    adjacent: bool  # field1 == field2 plus the single pair (alpha~, sigma~)

    @property
    def dim(self) -> int:
        """Dimension i of sigma~."""
        return len(self.sigma_tilde) - 1

    def as_dict(self) -> dict:
        return {
            "alpha_tilde": list(self.alpha_tilde),
            "sigma_tilde": list(self.sigma_tilde),
            "k": self.k,
            "direction": self.direction,
            "adjacent": self.adjacent,
        }


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: MorseChainComplex
    target: MorseChainComplex
    matrices: tuple[np.ndarray, ...]
    tag: str = "generic"
    transition: TransitionPair | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown chain map tag {self.tag!r}")
        for q, m in enumerate(self.matrices):
            if m.shape != (self.target.rank_of(q), self.source.rank_of(q)):
                raise ValueError(f"matrix in degree {q} has shape {m.shape}")

    def matrix(self, q: int) -> np.ndarray:
        if 0 <= q < len(self.matrices):
            return self.matrices[q]
        return zeros(self.target.rank_of(q), self.source.rank_of(q))

    def image(self, s: Simplex) -> dict[Simplex, Fraction]:
        q = len(s) - 1
        col = self.matrix(q)[:, self.source.position(q, s)]
        return {t: Fraction(c) for t, c in zip(self.target.basis(q), col) if c != 0}

    def is_identity(self) -> bool:
        return all(
            self.source.basis(q) == self.target.basis(q) and equal(m, identity(m.shape[0]))
            for q, m in enumerate(self.matrices)
        )


def identity_map(mc: MorseChainComplex) -> ChainMap:
    return ChainMap(mc, mc, tuple(identity(len(b)) for b in mc.bases), "identity")


def compose(outer: ChainMap, inner: ChainMap, tag: str = "composite") -> ChainMap:
    """outer after inner."""
    if inner.target.field != outer.source.field:
        raise ValueError("chain maps do not compose")
    mats = tuple(outer.matrix(q) @ inner.matrix(q) for q in range(len(inner.matrices)))
    return ChainMap(inner.source, outer.target, mats, tag)


# -- connectedness homomorphisms ---------------------------------------------

def connectedness_map(
    K: SimplicialComplex,
    V1: GradientVectorField,
    V2: GradientVectorField,
    direction: str = "h",
    rule: str = "literal",
    ctx: MorseCache | None = None,
) -> ChainMap:
    """Connectedness homomorphism h: C(V1) -> C(V2) or g: C(V2) -> C(V1).

    ``literal``: in degrees q >= 1 the coefficient of a target critical
    simplex is the upper path count in the source field; in degree 0 it is
    the lower path count in the target field. These maps are generally not
    chain maps.

    ``flow``: upper paths in the source field followed by lower paths in the
    target field, in every degree. Agrees with ``literal`` in degree 0 and is
    always a chain map; this is the form used for transitions.
    """
    if direction not in ("h", "g"):
        raise ValueError("direction is 'h' or 'g'")
    if rule not in ("literal", "flow"):
        raise ValueError("rule is 'literal' or 'flow'")
    ctx = _cache(K, ctx)
    src, tgt = (V1, V2) if direction == "h" else (V2, V1)
    c_src, c_tgt = ctx.morse(src), ctx.morse(tgt)
    up, down = ctx.counter(src), ctx.counter(tgt)
    mats = []
    for q in range(K.dim + 1):
        rows = {s: i for i, s in enumerate(c_tgt.basis(q))}
        m = zeros(len(rows), c_src.rank_of(q))
        for j, delta in enumerate(c_src.basis(q)):
            if q == 0:
                col = down.lower(delta)
            elif rule == "literal":
                col = up.upper(delta)
            else:
                col = {}
                for x, a in up.upper(delta).items():
                    for y, b in down.lower(x).items():
                        col[y] = col.get(y, 0) + a * b
            for y, c in col.items():
                i = rows.get(y)
                if i is not None:
                    m[i, j] += c
        mats.append(m)
    return ChainMap(c_src, c_tgt, tuple(mats), "generic")


def detect_transition(
    K: SimplicialComplex,
    V1: GradientVectorField,
    V2: GradientVectorField,
    ctx: MorseCache | None = None,
) -> TransitionPair | None:
    """Classify C(V1) -> C(V2) as a birth or death transition, or None.

    The critical sets must differ by exactly one extra pair in consecutive
    dimensions on one side, with a nonzero coefficient k between them.
    """
    ctx = _cache(K, ctx)
    cr1 = {s for layer in critical_set(K, V1) for s in layer}
    cr2 = {s for layer in critical_set(K, V2) for s in layer}
    if cr1 < cr2:
        direction, f1, f2, extra = "birth", V1, V2, cr2 - cr1
    elif cr2 < cr1:
        direction, f1, f2, extra = "death", V2, V1, cr1 - cr2
    else:
        return None
    if len(extra) != 2:
        return None
    alpha, sigma = sorted(extra, key=len)
    if len(sigma) != len(alpha) + 1:
        return None
    k = ctx.counter(f2).boundary(sigma).get(alpha, 0)
    if k == 0:
        return None
    adjacent = f1.pairs == f2.pairs | {(alpha, sigma)}
    return TransitionPair(alpha, sigma, k, direction, f1, f2, adjacent)


def birth_death_maps(
    K: SimplicialComplex,
    V1: GradientVectorField,
    V2: GradientVectorField,
    ctx: MorseCache | None = None,
) -> tuple[TransitionPair, ChainMap, ChainMap] | None:
    """The transition between V1 and V2 with its birth map h and death map g."""
    ctx = _cache(K, ctx)
    t = detect_transition(K, V1, V2, ctx)
    if t is None:
        return None
    h = connectedness_map(K, t.field1, t.field2, "h", "flow", ctx)
    g = connectedness_map(K, t.field1, t.field2, "g", "flow", ctx)
    h = ChainMap(h.source, h.target, h.matrices, "birth", t)
    g = ChainMap(g.source, g.target, g.matrices, "death", t)
    return t, h, g


def transition_map(K, V1, V2, ctx=None) -> ChainMap:
    """The birth or death map C(V1) -> C(V2); raises if V1, V2 are not a transition."""
    res = birth_death_maps(K, V1, V2, ctx)
    if res is None:
        raise ValueError("gradient vector fields do not differ by a birth-death transition")
    t, h, g = res
    return h if t.direction == "birth" else g


# -- verification -------------------------------------------------------------

@dataclass
class ChainMapCheck:
    ok: bool
    failures: list[tuple[int, Simplex]] = field(default_factory=list)


def verify_chain_map(m: ChainMap) -> ChainMapCheck:
    """Check D_tgt(q) M(q) = M(q-1) D_src(q) column by column."""
    failures = []
    for q in range(1, len(m.matrices)):
        lhs = m.target.boundary(q) @ m.matrix(q)
        rhs = m.matrix(q - 1) @ m.source.boundary(q)
        for j, s in enumerate(m.source.basis(q)):
            if not all(a == b for a, b in zip(lhs[:, j], rhs[:, j])):
                failures.append((q, s))
    return ChainMapCheck(not failures, failures)


def _vec(basis, entries) -> list[Fraction]:
    pos = {s: i for i, s in enumerate(basis)}
    v = [Fraction(0)] * len(basis)
    for s, c in entries.items():
        if c:
            v[pos[s]] += c
    return v


def _col(mc_map_or_matrix, j) -> list[Fraction]:
    return [Fraction(x) for x in mc_map_or_matrix[:, j]]


def closed_form_check(K: SimplicialComplex, t: TransitionPair, h: ChainMap, g: ChainMap, max_paths=DEFAULT_MAX_PATHS) -> dict:
    """Compare h and g entrywise with their closed forms.

    h(d) = d off degree i and d + n1(d, sigma~) sigma~ in degree i, with n1
    the upper path count in field1; g(d) = d except g(sigma~) = 0 and
    g(alpha~) = sum n(alpha~, a) a, where n is the lower path count in field1
    (the only field in which alpha~ has outgoing paths). Path counts come
    from explicit enumeration, independent of how the maps were built.
    """
    f1 = t.field1
    i = t.dim
    branches = {"h_off_degree_i": True, "h_degree_i": True, "g_identity": True,
                "g_sigma_zero": True, "g_alpha_flow": True}
    for q in range(K.dim + 1):
        for j, d in enumerate(h.source.basis(q)):
            expect = {d: 1}
            if q == i:
                expect[t.sigma_tilde] = connectedness_coefficient(K, f1, d, t.sigma_tilde, "upper", max_paths)
            ok = _col(h.matrix(q), j) == _vec(h.target.basis(q), expect)
            key = "h_degree_i" if q == i else "h_off_degree_i"
            branches[key] &= ok
        for j, d in enumerate(g.source.basis(q)):
            if d == t.sigma_tilde:
                expect, key = {}, "g_sigma_zero"
            elif d == t.alpha_tilde:
                expect = {a: connectedness_coefficient(K, f1, d, a, "lower", max_paths) for a in g.target.basis(q)}
                key = "g_alpha_flow"
            else:
                expect, key = {d: 1}, "g_identity"
            branches[key] &= _col(g.matrix(q), j) == _vec(g.target.basis(q), expect)
    lit_h = connectedness_map(K, t.field1, t.field2, "h", "literal")
    lit_g = connectedness_map(K, t.field1, t.field2, "g", "literal")
    literal_agrees = all(equal(a, b) for a, b in zip(lit_h.matrices, h.matrices)) and all(
        equal(a, b) for a, b in zip(lit_g.matrices, g.matrices)
    )
    return {"branches": branches, "ok": all(branches.values()), "literal_maps_agree": literal_agrees}


def boundary_relations_check(K: SimplicialComplex, t: TransitionPair, ctx: MorseCache | None = None, max_paths=DEFAULT_MAX_PATHS) -> dict:
    """Evaluate the five boundary relations between C(field1) and C(field2).

    Relations: ``off_band`` (degrees other than i, i+1), ``upper_band``
    (critical (i+1)-simplices), ``other_sigma`` (critical i-simplices other
    than sigma~), ``sigma_tilde`` and ``alpha_tilde``. Each entry carries
    ``holds`` for the form forced by the chain map property and
    ``variant_holds`` for a common variant: a plus sign on the alpha~ flow
    term in ``other_sigma`` and ``sigma_tilde``, and the trivial path from
    alpha~ to itself counted in ``alpha_tilde``.
    """
    ctx = _cache(K, ctx, max_paths)
    f1 = t.field1
    c1, c2 = ctx.morse(t.field1), ctx.morse(t.field2)
    i, k = t.dim, t.k
    at, st = t.alpha_tilde, t.sigma_tilde

    def n_bd(s, a):
        return connectedness_coefficient(K, f1, s, a, "boundary", max_paths)

    def n_up(s, a):
        return connectedness_coefficient(K, f1, s, a, "upper", max_paths)

    def n_flow(a):
        return connectedness_coefficient(K, f1, at, a, "lower", max_paths)

    def d1(q, s):
        return dict(zip(c1.basis(q - 1), c1.boundary(q)[:, c1.position(q, s)]))

    def d2(q, s):
        return _col(c2.boundary(q), c2.position(q, s))

    def eq(q_rows, lhs, rhs):
        return lhs == _vec(c2.basis(q_rows), rhs)

    res = {}
    # (1) degrees away from i, i+1
    ok = True
    for q in range(1, K.dim + 1):
        if q in (i, i + 1):
            continue
        for s in c2.basis(q):
            if s != at:
                ok &= eq(q - 1, d2(q, s), d1(q, s))
    res["off_band"] = {"holds": ok, "variant_holds": ok}

    # (2) critical (i+1)-simplices
    ok = True
    for tau in c2.basis(i + 1):
        rhs = d1(i + 1, tau)
        rhs[st] = rhs.get(st, 0) + sum(n_bd(tau, s) * n_up(s, st) for s in c1.basis(i))
        ok &= eq(i, d2(i + 1, tau), rhs)
    res["upper_band"] = {"holds": ok, "variant_holds": ok}

    flow = {a: n_flow(a) for a in c1.basis(i - 1)}

    def tilde_term(sign):
        v = {at: k}
        for a, c in flow.items():
            v[a] = v.get(a, 0) + sign * k * c
        return v

    # (3) other critical i-simplices
    variant = consistent = True
    for s in c2.basis(i):
        if s == st:
            continue
        c = n_up(s, st)
        base = d1(i, s)
        rp = dict(base)
        for x, y in tilde_term(+1).items():
            rp[x] = rp.get(x, 0) + c * y
        rc = dict(base)
        for x, y in tilde_term(-1).items():
            rc[x] = rc.get(x, 0) - c * y
        lhs = d2(i, s)
        variant &= eq(i - 1, lhs, rp)
        consistent &= eq(i - 1, lhs, rc)
    res["other_sigma"] = {"holds": consistent, "variant_holds": variant}

    # (4) the boundary of sigma~
    lhs = d2(i, st)
    res["sigma_tilde"] = {"holds": eq(i - 1, lhs, tilde_term(-1)), "variant_holds": eq(i - 1, lhs, tilde_term(+1))}

    # (5) the boundary of alpha~
    if i - 1 >= 1:
        lhs = d2(i - 1, at)

        def rhs5(self_term):
            v: dict = {}
            coeffs = dict(flow)
            if self_term:
                coeffs[at] = 1
            for a, c in coeffs.items():
                for w in c1.basis(i - 2):
                    v[w] = v.get(w, 0) + c * n_bd(a, w)
            return v

        res["alpha_tilde"] = {"holds": eq(i - 2, lhs, rhs5(False)), "variant_holds": eq(i - 2, lhs, rhs5(True))}
    else:
        res["alpha_tilde"] = {"holds": True, "variant_holds": True}
    relations = list(res.values())
    res["ok"] = all(v["holds"] for v in relations)
    res["variant_ok"] = all(v["variant_holds"] for v in relations)
    return res


@dataclass(frozen=True, eq=False)
class ChainHomotopy:
    matrices: tuple[np.ndarray, ...]  # s(q): C2(q) -> C2(q+1)
    g_after_h_is_identity: bool
    homotopy_identity_holds: bool
    integral: bool
    unit_k: bool

    @property
    def ok(self) -> bool:
        return self.g_after_h_is_identity and self.homotopy_identity_holds and (self.integral or not self.unit_k)


def chain_homotopy(t: TransitionPair, h: ChainMap, g: ChainMap) -> ChainHomotopy:
    """Build s with s(alpha~) = -(1/k) sigma~ and check both homotopy identities.

    g.h = id on C(field1) and h.g - id = D s + s D on C(field2), exactly.
    """
    if t.k == 0:
        raise ValueError("transition coefficient k is zero")
    c2 = h.target
    top = len(c2.bases) - 1
    s = [zeros(c2.rank_of(q + 1), c2.rank_of(q)) for q in range(top + 1)]
    i = t.dim
    s[i - 1][c2.position(i, t.sigma_tilde), c2.position(i - 1, t.alpha_tilde)] = Fraction(-1, t.k)

    def s_at(q):
        return s[q] if 0 <= q <= top else zeros(c2.rank_of(q + 1), c2.rank_of(q))

    gh_ok = all(
        equal(g.matrix(q) @ h.matrix(q), identity(h.source.rank_of(q))) for q in range(top + 1)
    )
    hg_ok = True
    for q in range(top + 1):
        lhs = h.matrix(q) @ g.matrix(q) - identity(c2.rank_of(q))
        rhs = c2.boundary(q + 1) @ s_at(q)
        if q > 0:
            rhs = rhs + s_at(q - 1) @ c2.boundary(q)
        hg_ok &= equal(lhs, rhs)
    integral = all(is_integral(m) for m in (*h.matrices, *g.matrices, *s))
    return ChainHomotopy(tuple(s), gh_ok, hg_ok, integral, abs(t.k) == 1)


# -- sequences ----------------------------------------------------------------

def pair_order(p: Pair):
    """Descending dimension of sigma, then lexicographic on (alpha, sigma)."""
    return (-len(p[1]), p[0], p[1])


@dataclass(frozen=True, eq=False)
class TransitionSequence:
    complex: SimplicialComplex
    gvfs: tuple[GradientVectorField, ...]
    steps: tuple[ChainMap, ...]
    composite: ChainMap
    policy: str

    def __len__(self) -> int:
        return len(self.steps)

    def critical_profile(self) -> list[list[int]]:
        return [list(critical_count(self.complex, W)) for W in self.gvfs]

    def report(self) -> dict:
        steps = []
        for m, (a, b) in zip(self.steps, zip(self.gvfs, self.gvfs[1:])):
            (pair,) = a.pairs ^ b.pairs
            steps.append({
                "pair": [list(pair[0]), list(pair[1])],
                "direction": m.tag,
                "k": m.transition.k,
                "chain_map_ok": verify_chain_map(m).ok,
            })
        iso = certify_iso(self)
        return {
            "length": len(self.steps),
            "policy": self.policy,
            "steps": steps,
            "composite_iso": iso["iso"],
            "induced_ranks": iso["induced_ranks"],
            "betti": iso["betti_source"],
            "critical_profile_per_step": self.critical_profile(),
        }


def critical_count(K, W):
    return tuple(len(c) for c in critical_set(K, W))


def connect(
    K: SimplicialComplex,
    V1: GradientVectorField,
    V2: GradientVectorField,
    policy: str = "full",
    ctx: MorseCache | None = None,
) -> TransitionSequence:
    """Birth-death sequence from V1 to V2.

    ``full`` removes every pair of V1 down to the empty field and then inserts
    every pair of V2; ``shortcut`` keeps the pairs they share.
    """
    if policy not in ("full", "shortcut"):
        raise ValueError("policy is 'full' or 'shortcut'")
    ctx = _cache(K, ctx)
    if policy == "full":
        drop, add = V1.pairs, V2.pairs
    else:
        drop, add = V1.pairs - V2.pairs, V2.pairs - V1.pairs
    gvfs = [V1]
    W = V1
    for p in sorted(drop, key=pair_order):
        W = W - [p]
        gvfs.append(W)
    for p in sorted(add, key=pair_order):
        W = W | [p]
        gvfs.append(W)
    assert W == V2
    steps = []
    composite = identity_map(ctx.morse(V1))
    for a, b in zip(gvfs, gvfs[1:]):
        ok, cycle = is_acyclic(K, b.pairs)
        if not ok:
            raise AssertionError(f"intermediate matching has a closed V-path {cycle}")
        m = transition_map(K, a, b, ctx)
        steps.append(m)
        composite = compose(m, composite)
    return TransitionSequence(K, tuple(gvfs), tuple(steps), composite, policy)


def concatenate(first: TransitionSequence, second: TransitionSequence) -> TransitionSequence:
    if first.gvfs[-1] != second.gvfs[0]:
        raise ValueError("sequences do not meet")
    composite = first.composite if not second.steps else compose(second.composite, first.composite)
    return TransitionSequence(
        first.complex, first.gvfs + second.gvfs[1:], first.steps + second.steps, composite, "concatenated"
    )


def induced_homology_ranks(m: ChainMap) -> list[int]:
    """Rank of the map induced on rational homology, per degree."""
    out = []
    for q in range(len(m.matrices)):
        z = nullspace(m.source.boundary(q))
        b = m.target.boundary(q + 1)
        out.append(rank(hstack(m.matrix(q) @ z, b)) - rank(b))
    return out


def certify_iso(seq: TransitionSequence) -> dict:
    m = seq.composite
    b_src = list(m.source.betti())
    b_tgt = list(m.target.betti())
    ranks = induced_homology_ranks(m)
    chain_ok = verify_chain_map(m).ok
    return {
        "betti_source": b_src,
        "betti_target": b_tgt,
        "induced_ranks": ranks,
        "chain_map_ok": chain_ok,
        "iso": chain_ok and b_src == b_tgt == ranks,
    }


def describe_pair(p: Pair) -> str:
    return f"({fmt_simplex(p[0])} | {fmt_simplex(p[1])})"


def chain_map_to_json(m: ChainMap) -> dict:
    return {"tag": m.tag, "matrices": [to_jsonable(x) for x in m.matrices]}
