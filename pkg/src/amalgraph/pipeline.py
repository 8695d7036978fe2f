"""Stallings-type foldings for amalgams: from generator words to the subgroup graph.

``build_subgroup_graph`` runs six steps:

1. a bouquet of loops spelling the generators;
2. Stallings folding and hair cutting;
3. a Cayley graph of the factor glued on every monochromatic component;
4. compatibility: at bichromatic vertices the two readings of each element
   of ``A`` are made to end at the same vertex;
5. removal of redundant monochromatic components;
6. completion at the basepoint when it is monochromatic with a non-trivial
   ``A``-stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .amalgam import Amalgam
from .graph import (
    LabelledGraph,
    classify,
    component_graph,
    cut_hairs,
    fold_all,
    isomorphic,
    pushout,
    read_path,
    restrict,
    words_to_bouquet,
)
from .normal_forms import normal_form, syllable_words
from .words import Word, free_reduce


@dataclass(frozen=True)
class SubgroupGraph:
    amalgam: Amalgam
    graph: LabelledGraph
    generators: tuple
    trace: tuple = field(default=(), compare=False)  # ((step name, graph), ...)

    @property
    def basepoint(self):
        return self.graph.basepoint


def build_bouquet(generators) -> LabelledGraph:
    return words_to_bouquet([tuple(w) for w in generators])


def step2_fold_and_trim(g: LabelledGraph, rng=None) -> LabelledGraph:
    while True:
        folded, _ = fold_all(g, rng=rng)
        trimmed = cut_hairs(folded)
        if trimmed.num_vertices == g.num_vertices and len(trimmed.edges) == len(g.edges):
            return trimmed
        g = trimmed


def step3_glue_cayley(g: LabelledGraph, amalgam: Amalgam, rng=None) -> LabelledGraph:
    report = classify(g, amalgam.colour)
    if not report.components:
        return g
    copies = []
    pairs = []
    offset = g.num_vertices
    for comp in report.components:
        u, name, v = min(comp.edges)
        cay, _ = amalgam.cayley(comp.factor)
        gen_vertex = cay.step(cay.basepoint, (name, 1))
        pairs.append((u, offset + cay.basepoint))
        pairs.append((v, offset + gen_vertex))
        copies.append((offset, cay))
        offset += cay.num_vertices
    edges = list(g.edges)
    for off, cay in copies:
        edges.extend((a + off, n, b + off) for a, n, b in cay.edges)
    union = LabelledGraph(offset, edges, g.basepoint)
    folded, _ = fold_all(union, pairs, rng)
    return folded


def compatibility_defects(g: LabelledGraph, amalgam: Amalgam, report=None):
    """Pairs ``(v.phi1(a), v.phi2(a))`` that differ, over bichromatic ``v``."""
    report = report or classify(g, amalgam.colour)
    out = []
    for v in sorted(report.vb):
        for k in range(1, amalgam.a_order):
            t1 = read_path(g, v, amalgam.a_word(1, k))
            t2 = read_path(g, v, amalgam.a_word(2, k))
            if t1 is not None and t2 is not None and t1 != t2:
                out.append((t1, t2))
    return out


def step4_compatibility(g: LabelledGraph, amalgam: Amalgam, rng=None) -> LabelledGraph:
    while True:
        pairs = compatibility_defects(g, amalgam)
        if not pairs:
            return g
        g, _ = fold_all(g, pairs, rng)


def stabilizer(g: LabelledGraph, amalgam: Amalgam, factor, v):
    """Elements of factor ``factor`` whose reading from ``v`` loops (in its component)."""
    model = amalgam.models[factor]
    return frozenset(e for e in range(model.order) if read_path(g, v, model.words[e]) == v)


def _removable(g, amalgam, report, comp):
    i = comp.factor
    vb = [v for v in sorted(comp.vertices) if v in report.vb]
    if not vb:
        return False
    v0 = g.basepoint
    for theta in vb:
        K = stabilizer(g, amalgam, i, theta)
        if not K <= amalgam.a_sets[i]:
            continue
        if len(vb) * len(K) != amalgam.a_order:
            continue
        if len(K) == 1:
            if v0 in comp.vertices and v0 not in report.vb:
                continue
        elif v0 in comp.vertices:
            continue
        sub, _ = component_graph(g, comp, theta)
        if isomorphic(sub, amalgam.cover(i, K)[0]) is None:
            continue
        return True
    return False


def _drop_component(g, report, comp):
    gone = set(comp.edges)
    edges = [e for e in g.edges if e not in gone]
    keep = set(range(g.num_vertices)) - (comp.vertices - report.vb)
    keep.add(g.basepoint)
    sub, _ = restrict(g, keep, edges)
    return sub


def step5_remove_redundant(g: LabelledGraph, amalgam: Amalgam) -> LabelledGraph:
    changed = True
    while changed:
        changed = False
        report = classify(g, amalgam.colour)
        for comp in report.components:
            if _removable(g, amalgam, report, comp):
                g = _drop_component(g, report, comp)
                changed = True
                break
    report = classify(g, amalgam.colour)
    if not report.vb and len(report.components) == 1:
        i = report.components[0].factor
        if isomorphic(g, amalgam.cayley(i)[0]) is not None:
            return LabelledGraph.trivial()
    return g


def step6_basepoint_completion(g: LabelledGraph, amalgam: Amalgam) -> LabelledGraph:
    report = classify(g, amalgam.colour)
    v0 = g.basepoint
    for i in (1, 2):
        if v0 not in report.vm(i):
            continue
        K = stabilizer(g, amalgam, i, v0)
        L = K & amalgam.a_sets[i]
        if len(L) == 1:
            return g
        j = amalgam.other(i)
        Lj = frozenset(amalgam.a_elements[j][amalgam.a_index[i][e]] for e in L)
        D, coset_of = amalgam.cover(j, Lj)
        pairs = []
        for k in range(amalgam.a_order):
            pairs.append((read_path(g, v0, amalgam.a_word(i, k)), coset_of[amalgam.a_elements[j][k]]))
        out, _, _ = pushout(g, D, pairs)
        return out
    return g


def build_subgroup_graph(amalgam: Amalgam, generators, rng=None, trace=False) -> SubgroupGraph:
    gens = tuple(tuple(w) for w in generators)
    frames = []

    def snap(name, g):
        if trace:
            frames.append((name, g))
        return g

    g = snap("step1", build_bouquet([free_reduce(w) for w in gens]))
    g = snap("step2", step2_fold_and_trim(g, rng))
    g = snap("step3", step3_glue_cayley(g, amalgam, rng))
    g = snap("step4", step4_compatibility(g, amalgam, rng))
    g = snap("step5", step5_remove_redundant(g, amalgam))
    g = snap("step6", step6_basepoint_completion(g, amalgam))
    return SubgroupGraph(amalgam, g, gens, tuple(frames))


# -- verification -------------------------------------------------------


def is_cover_component(g: LabelledGraph, amalgam: Amalgam, comp) -> bool:
    """Saturated in its factor's letters and every relator loops everywhere."""
    pres = amalgam.spec.factor(comp.factor)
    letters = [(x, s) for x in pres.generators for s in (1, -1)]
    for v in comp.vertices:
        out = g.out(v)
        if any(len(out.get(l, ())) != 1 for l in letters):
            return False
        for r in pres.relators:
            if read_path(g, v, r) != v:
                return False
    return True


def verify_precover(g: LabelledGraph, amalgam: Amalgam):
    """Returns ``(ok, problems)`` where problems is a list of strings."""
    problems = []
    if not g.is_well_labelled():
        problems.append("not well-labelled")
        return False, problems
    report = classify(g, amalgam.colour)
    for k, comp in enumerate(report.components):
        if not is_cover_component(g, amalgam, comp):
            problems.append(f"component {k} (factor {comp.factor}) is not a cover")
    if not problems:
        for t1, t2 in compatibility_defects(g, amalgam, report):
            problems.append(f"incompatible: v{t1} and v{t2} should coincide")
            break
    return not problems, problems


def is_member(sg: SubgroupGraph, word: Word) -> bool:
    return _read_normal(sg.amalgam, sg.graph, sg.graph.basepoint, word) == sg.graph.basepoint


def _read_normal(amalgam, g, start, word):
    """Read the normal form of ``word`` from ``start``; None if it falls off."""
    nf = normal_form(amalgam, word)
    if not nf.syllables:
        if nf.prefix == 0:
            return start
        for i in (1, 2):
            t = read_path(g, start, amalgam.a_word(i, nf.prefix))
            if t is not None:
                return t
        return None
    v = start
    for _, w in syllable_words(amalgam, nf):
        v = read_path(g, v, w)
        if v is None:
            return None
    return v


def read_element(sg: SubgroupGraph, word: Word, start=None):
    g = sg.graph
    return _read_normal(sg.amalgam, g, g.basepoint if start is None else start, word)
