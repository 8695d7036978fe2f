"""Separating subgroups: embedding a subgroup graph in a finite cover.

Given ``H`` (through its subgroup graph) and ``g`` not in ``H``, the graph
is grown in three stages, each a gluing of precovers along ``A``-orbits
with equal stabilizers (so no folding ever happens):

* ``glue_stem`` makes ``g`` readable, ending away from the basepoint;
* ``saturate`` makes every vertex carry edges of the colour ``beta``;
* one of the cover constructions (central, malnormal, cyclic edge
  subgroup) adds the missing ``alpha`` components until the graph is a
  cover, i.e. the coset graph of a finite-index subgroup ``K``.

The ``A``-action on a vertex ``v`` of a colour-``i`` component is
``v . a = v . phi_i(a)``; stabilizers are sets of A-indices so they can be
compared across colours.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .amalgam import Amalgam, lcm
from .graph import (
    LabelledGraph,
    basepoint_component,
    classify,
    disjoint_union,
    is_morphism,
    pushout,
    read_path,
)
from .normal_forms import normal_form, syllable_words
from .pipeline import SubgroupGraph, _read_normal, verify_precover
from .words import Word


class SeparationError(ValueError):
    """The excluded element lies in the subgroup."""


class UnsupportedCase(RuntimeError):
    """The edge subgroup is neither cyclic, central nor malnormal in a factor."""


class EmbeddingError(AssertionError):
    """A gluing that should be fold-free was not (internal consistency check)."""


# -- orbits --------------------------------------------------------------


@dataclass(frozen=True)
class OrbitData:
    colour: int
    stabilizer: dict  # vertex -> frozenset of A-indices
    orbit: dict  # vertex -> tuple (v . a_0, v . a_1, ...)
    representatives: tuple  # least vertex of each orbit, ascending

    def length(self, v):
        return len(set(self.orbit[v]))

    def lengths(self):
        """The multiset ``n(Gamma)`` as a Counter ``n -> number of orbits``."""
        return Counter(self.length(v) for v in self.representatives)

    def classes(self, n=None):
        """``{stabilizer: [representatives]}`` for orbits of length ``n`` (or all)."""
        out = {}
        for v in self.representatives:
            if n is None or self.length(v) == n:
                out.setdefault(self.stabilizer[v], []).append(v)
        return out


def orbit_analysis(g: LabelledGraph, amalgam: Amalgam, colour: int, vertices=None) -> OrbitData:
    """A-orbits of ``vertices`` (default: the colour-monochromatic ones)."""
    if vertices is None:
        vertices = classify(g, amalgam.colour).vm(colour)
    stab, orbit = {}, {}
    reps = []
    done = set()
    for v in sorted(vertices):
        images = tuple(read_path(g, v, amalgam.a_word(colour, k)) for k in range(amalgam.a_order))
        if any(t is None for t in images):
            raise ValueError(f"vertex v{v} is not saturated in factor {colour}")
        orbit[v] = images
        stab[v] = frozenset(k for k, t in enumerate(images) if t == v)
        if v not in done:
            reps.append(v)
            done.update(images)
    return OrbitData(colour, stab, orbit, tuple(reps))


def check_orbit_arithmetic(data: OrbitData, a_order: int) -> bool:
    return all(data.length(v) * len(data.stabilizer[v]) == a_order for v in data.orbit)


def _stab_key(stab):
    return (len(stab), tuple(sorted(stab)))


# -- fold-free gluing ----------------------------------------------------


@dataclass
class _Piece:
    graph: LabelledGraph
    colour: int  # colour whose monochromatic orbits are offered
    accept: object = None  # predicate (length, stabilizer) -> bool


def _side(pieces, amalgam):
    """Disjoint union of the pieces and their offered orbits.

    Returns ``(graph, offsets, [(stabilizer, vertex, colour), ...])``.
    """
    union, offsets = disjoint_union([p.graph for p in pieces])
    offered = []
    for p, off in zip(pieces, offsets):
        data = orbit_analysis(p.graph, amalgam, p.colour)
        for v in data.representatives:
            st = data.stabilizer[v]
            if p.accept is None or p.accept(data.length(v), st):
                offered.append((st, v + off, p.colour))
    return union, offsets, offered


def glue_orbits(g1, offered1, g2, offered2, amalgam: Amalgam):
    """Pair orbits with equal stabilizers positionally and glue along them.

    ``offeredN`` lists ``(stabilizer, vertex, colour)``.  Both sides must
    offer the same number of orbits per stabilizer.  Returns
    ``(graph, map1, map2)``; raises :class:`EmbeddingError` if the gluing
    folded anything.
    """
    by1, by2 = {}, {}
    for st, v, c in offered1:
        by1.setdefault(st, []).append((v, c))
    for st, v, c in offered2:
        by2.setdefault(st, []).append((v, c))
    if {k: len(v) for k, v in by1.items()} != {k: len(v) for k, v in by2.items()}:
        raise EmbeddingError("orbit counts do not match across the gluing")
    pairs = []
    for st in sorted(by1, key=_stab_key):
        for (v, c1), (u, c2) in zip(by1[st], by2[st]):
            for k in range(amalgam.a_order):
                a = read_path(g1, v, amalgam.a_word(c1, k))
                b = read_path(g2, u, amalgam.a_word(c2, k))
                pairs.append((a, b))
    out, m1, m2 = pushout(g1, g2, pairs)
    if len(set(m1)) != len(m1) or len(set(m2)) != len(m2):
        raise EmbeddingError("gluing along matched orbits caused a fold")
    return out, m1, m2


def _copies(g, count):
    union, _ = disjoint_union([g] * count)
    return union


def _stab_elements(amalgam, colour, stab):
    return frozenset(amalgam.a_elements[colour][k] for k in stab)


# -- saturation ----------------------------------------------------------


def saturate(g: LabelledGraph, amalgam: Amalgam, beta: int):
    """Glue ``Cayley(G_beta, A_v)`` along every orbit lacking colour ``beta``.

    Returns ``(graph, embedding)``.  Every orbit is handled at once; each
    contributes its own Cayley graph, so the result is the same as doing
    one orbit at a time.
    """
    alpha = amalgam.other(beta)
    data = orbit_analysis(g, amalgam, alpha)
    if not data.representatives:
        return g, list(range(g.num_vertices))
    pieces = []
    offered2 = []
    for v in data.representatives:
        st = data.stabilizer[v]
        cov, _ = amalgam.cover(beta, _stab_elements(amalgam, beta, st))
        pieces.append(cov)
    union, offsets = disjoint_union(pieces)
    for v, off in zip(data.representatives, offsets):
        offered2.append((data.stabilizer[v], off, beta))
    offered1 = [(data.stabilizer[v], v, alpha) for v in data.representatives]
    out, m1, _ = glue_orbits(g, offered1, union, offered2, amalgam)
    return out, m1


# -- cover constructions ---------------------------------------------------


def _beta_orbits(g, amalgam, beta):
    return orbit_analysis(g, amalgam, beta)


def embed_in_cover_central(g: LabelledGraph, amalgam: Amalgam, alpha: int):
    """Cover construction when ``A`` is central in ``G_alpha``.

    ``g`` must be a precover saturated in the other colour.  Returns
    ``(cover, embedding)``.
    """
    beta = amalgam.other(alpha)
    emb = list(range(g.num_vertices))
    t = amalgam.models[alpha].order // amalgam.a_order
    while True:
        data = _beta_orbits(g, amalgam, beta)
        lengths = data.lengths()
        if not lengths:
            return g, emb
        n = min(lengths)
        classes = data.classes(n)
        side1 = [_Piece(g, beta, lambda ln, st, n=n: ln == n)] * t
        side2 = []
        for st in sorted(classes, key=_stab_key):
            cov, _ = amalgam.cover(alpha, _stab_elements(amalgam, alpha, st))
            side2 += [_Piece(cov, alpha)] * len(classes[st])
        g, emb = _glue_sides(side1, side2, amalgam, emb)


def embed_in_cover_malnormal(g: LabelledGraph, amalgam: Amalgam, alpha: int):
    """Cover construction when ``A`` is malnormal in ``G_alpha``."""
    beta = amalgam.other(alpha)
    emb = list(range(g.num_vertices))
    order_a = amalgam.a_order
    d = amalgam.models[beta].order // order_a
    g_alpha = amalgam.models[alpha].order
    cay_beta, _ = amalgam.cayley(beta)
    while True:
        data = _beta_orbits(g, amalgam, beta)
        lengths = data.lengths()
        if not lengths:
            return g, emb
        n = min(lengths)
        classes = data.classes(n)
        extra = 0
        side2 = []
        for st in sorted(classes, key=_stab_key):
            m_j = len(classes[st])
            c_j = (g_alpha // len(st) - n) // order_a
            extra += m_j * c_j
            cov, _ = amalgam.cover(alpha, _stab_elements(amalgam, alpha, st))
            side2 += [_Piece(cov, alpha)] * (m_j * d)
        side1 = [_Piece(g, beta, lambda ln, st, n=n: ln == n)] * d + [_Piece(cay_beta, beta)] * extra
        g, emb = _glue_sides(side1, side2, amalgam, emb)


def _glue_sides(side1, side2, amalgam, emb):
    g1, _, off1 = _side(side1, amalgam)
    g2, _, off2 = _side(side2, amalgam)
    out, m1, _ = glue_orbits(g1, off1, g2, off2, amalgam)
    return out, [m1[v] for v in emb]


def cyclic_claim(amalgam: Amalgam, colour: int, stab: frozenset, _memo=None):
    """Embed ``Cayley(G_colour, S)`` in a precover saturated in ``colour``.

    The monochromatic vertices of the result form orbits that all have
    stabilizer ``S`` (given as A-indices).  Returns ``(graph, N)`` with
    ``N`` the number of those orbits.  Requires ``A`` cyclic.
    """
    memo = {} if _memo is None else _memo
    key = (colour, stab)
    if key in memo:
        return memo[key]
    other = amalgam.other(colour)
    cov, _ = amalgam.cover(colour, _stab_elements(amalgam, colour, stab))
    if len(stab) == 1:
        result = (cov, amalgam.models[colour].order // amalgam.a_order)
        memo[key] = result
        return result
    data = orbit_analysis(cov, amalgam, colour)
    counts = Counter(data.stabilizer[v] for v in data.representatives)
    smaller = sorted((st for st in counts if st != stab), key=_stab_key)
    sub = {st: cyclic_claim(amalgam, other, st, memo) for st in smaller}
    l = lcm(*(k for _, k in sub.values())) if sub else 1
    side1 = [_Piece(cov, colour, lambda ln, st: st != stab)] * l
    side2 = []
    for st in smaller:
        c_i, k_i = sub[st]
        side2 += [_Piece(c_i, other)] * (counts[st] * l // k_i)
    if side2:
        g1, _, off1 = _side(side1, amalgam)
        g2, _, off2 = _side(side2, amalgam)
        out, _, _ = glue_orbits(g1, off1, g2, off2, amalgam)
    else:
        out = _copies(cov, l)
    result = (out, counts[stab] * l)
    memo[key] = result
    return result


def embed_in_cover_cyclic(g: LabelledGraph, amalgam: Amalgam, alpha: int):
    """Cover construction when ``A`` is cyclic."""
    beta = amalgam.other(alpha)
    emb = list(range(g.num_vertices))
    memo = {}
    while True:
        data = _beta_orbits(g, amalgam, beta)
        lengths = data.lengths()
        if not lengths:
            return g, emb
        n = min(lengths)
        classes = data.classes(n)
        (stab,) = classes  # A cyclic: one subgroup per order
        m = len(classes[stab])
        c, big_n = cyclic_claim(amalgam, alpha, stab, memo)
        side1 = [_Piece(g, beta, lambda ln, st, n=n: ln == n)] * big_n
        side2 = [_Piece(c, alpha)] * m
        g, emb = _glue_sides(side1, side2, amalgam, emb)


# -- stems ---------------------------------------------------------------


def glue_stem(g: LabelledGraph, amalgam: Amalgam, word: Word):
    """Grow ``g`` until the normal form of ``word`` is readable from the basepoint.

    At each syllable that cannot be read, ``Cayley(G_f, A_v)`` is glued along
    the orbit of the current vertex (or ``Cayley(G_f)`` at an isolated
    vertex).  Returns ``(graph, end vertex, embedding)``.
    """
    emb = list(range(g.num_vertices))
    nf = normal_form(amalgam, word)
    if not nf.syllables:
        steps = []
        if nf.prefix:
            colours = {amalgam.colour[name] for name, _ in g.out(g.basepoint)}
            f = 2 if colours == {2} else 1
            steps = [(f, amalgam.a_word(f, nf.prefix))]
    else:
        steps = syllable_words(amalgam, nf)
    v = g.basepoint
    for f, w in steps:
        if not any(amalgam.colour[name] == f for name, _ in g.out(v)):
            g, m = _attach_factor(g, amalgam, v, f)
            emb = [m[x] for x in emb]
            v = m[v]
        v = read_path(g, v, w)
        if v is None:
            raise EmbeddingError("syllable unreadable after gluing its factor")
    return g, v, emb


def _attach_factor(g, amalgam, v, f):
    other = amalgam.other(f)
    if not g.out(v):
        cay, _ = amalgam.cayley(f)
        out, m1, _ = pushout(g, cay, [(v, cay.basepoint)])
        return out, m1
    data = orbit_analysis(g, amalgam, other, vertices=[v])
    st = data.stabilizer[v]
    cov, _ = amalgam.cover(f, _stab_elements(amalgam, f, st))
    out, m1, _ = glue_orbits(g, [(st, v, other)], cov, [(st, cov.basepoint, f)], amalgam)
    return out, m1


# -- the whole procedure ---------------------------------------------------

_CONSTRUCTIONS = {
    "central": embed_in_cover_central,
    "malnormal": embed_in_cover_malnormal,
    "cyclic": embed_in_cover_cyclic,
}


def choose_strategy(amalgam: Amalgam, strategy=None):
    """``(strategy, alpha)``; preference cyclic, then central, then malnormal."""
    tags = amalgam.classify_edge_subgroup()
    if strategy is None:
        if "cyclic" in tags:
            return "cyclic", 2
        for kind in ("central", "malnormal"):
            for i in (2, 1):
                if f"{kind}_in_{i}" in tags:
                    return kind, i
        raise UnsupportedCase(f"edge subgroup is not cyclic, central or malnormal in a factor ({sorted(tags)})")
    kind, _, where = strategy.partition("_in_")
    if kind not in _CONSTRUCTIONS:
        raise ValueError(f"unknown strategy {strategy!r}")
    if kind == "cyclic":
        if "cyclic" not in tags:
            raise UnsupportedCase("edge subgroup is not cyclic")
        return kind, int(where) if where else 2
    alphas = [int(where)] if where else [2, 1]
    for i in alphas:
        if f"{kind}_in_{i}" in tags:
            return kind, i
    raise UnsupportedCase(f"edge subgroup is not {kind} in factor {alphas}")


@dataclass
class SeparatingSubgroup:
    graph: LabelledGraph
    index: int
    embedding: list  # vertex of Gamma(H) -> vertex of the cover
    strategy: str
    alpha: int
    checks: dict = field(default_factory=dict)

    def subgroup_graph(self, amalgam, generators=()):
        return SubgroupGraph(amalgam, self.graph, tuple(generators))


def to_cover(g: LabelledGraph, amalgam: Amalgam, strategy=None):
    """Embed a finite precover in a finite cover: ``(cover, embedding, kind, alpha)``."""
    kind, alpha = choose_strategy(amalgam, strategy)
    beta = amalgam.other(alpha)
    sat, e1 = saturate(g, amalgam, beta)
    cov, e2 = _CONSTRUCTIONS[kind](sat, amalgam, alpha)
    return cov, [e2[e1[v]] for v in range(g.num_vertices)], kind, alpha


def separate(sg: SubgroupGraph, word: Word, strategy=None) -> SeparatingSubgroup:
    amalgam = sg.amalgam
    g = sg.graph
    if _read_normal(amalgam, g, g.basepoint, word) == g.basepoint:
        raise SeparationError("the element belongs to the subgroup")
    choose_strategy(amalgam, strategy)  # fail early on unsupported amalgams
    stemmed, _, e0 = glue_stem(g, amalgam, word)
    cov, e1, kind, alpha = to_cover(stemmed, amalgam, strategy)
    emb = [e1[e0[v]] for v in range(g.num_vertices)]
    cover, m = basepoint_component(cov)
    emb = [m[v] for v in emb]
    result = SeparatingSubgroup(cover, cover.num_vertices, emb, kind, alpha)
    result.checks = verify_separation(sg, word, result)
    failed = [k for k, ok in result.checks.items() if not ok]
    if failed:
        raise EmbeddingError(f"separating cover failed its checks: {failed}")
    return result


def verify_separation(sg: SubgroupGraph, word: Word, result: SeparatingSubgroup) -> dict:
    amalgam = sg.amalgam
    cover = result.graph
    v0 = cover.basepoint
    return {
        "saturated": cover.is_saturated(amalgam.alphabet),
        "precover": verify_precover(cover, amalgam)[0],
        "generators_loop": all(_read_normal(amalgam, cover, v0, w) == v0 for w in sg.generators),
        "excluded_does_not_loop": _read_normal(amalgam, cover, v0, word) != v0,
        "embedding_injective": len(set(result.embedding)) == len(result.embedding),
        "embedding_is_morphism": is_morphism(sg.graph, cover, result.embedding),
    }
