"""Subgroup presentations read off a subgroup graph (Reidemeister-Schreier).

Generators are the positive edges outside a breadth-first spanning tree;
relators are the rewritten relator loops of the ambient group at every
vertex.  ``tietze_simplify`` then removes generators that occur exactly
once in some relator.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import LabelledGraph, _letter_key
from .pipeline import SubgroupGraph
from .words import Word, cyclic_reduce, format_word, free_reduce, inverse


@dataclass(frozen=True)
class SpanningTree:
    tree_edges: frozenset  # positive edges (u, name, v)
    approach: dict  # vertex -> word t_v read from the basepoint
    order: tuple  # vertices in BFS order


def _half_edges(g: LabelledGraph, u):
    """Outgoing half-edges at ``u`` in fixed letter order: (letter, target, positive edge)."""
    out = []
    for letter in sorted(g.out(u), key=_letter_key):
        for t in g.out(u)[letter]:
            name, sign = letter
            edge = (u, name, t) if sign == 1 else (t, name, u)
            out.append((letter, t, edge))
    return out


def spanning_tree(sg) -> SpanningTree:
    g = sg.graph if isinstance(sg, SubgroupGraph) else sg
    v0 = g.basepoint
    approach = {v0: ()}
    order = [v0]
    tree = set()
    queue = deque([v0])
    while queue:
        u = queue.popleft()
        for letter, t, edge in _half_edges(g, u):
            if t not in approach:
                approach[t] = approach[u] + (letter,)
                tree.add(edge)
                order.append(t)
                queue.append(t)
    return SpanningTree(frozenset(tree), approach, tuple(order))


@dataclass(frozen=True)
class SubgroupPresentation:
    generators: tuple  # ((name, defining word over X), ...)
    relators: tuple  # words over the generator names

    @property
    def names(self):
        return tuple(n for n, _ in self.generators)

    def defining_word(self, name):
        return dict(self.generators)[name]

    def __str__(self):
        rels = ", ".join(format_word(r) for r in self.relators)
        return f"gp< {', '.join(self.names)} | {rels} >"

    def table(self):
        return "\n".join(f"{n} = {format_word(w)}" for n, w in self.generators)

    def expand(self, word):
        """Substitute defining words for generator names."""
        defs = dict(self.generators)
        out = []
        for name, sign in word:
            out.extend(defs[name] if sign == 1 else inverse(defs[name]))
        return tuple(out)


def compute_xh(sg, tree: SpanningTree, prefix="h"):
    """``[(name, defining word, edge), ...]`` for each non-tree positive edge."""
    g = sg.graph if isinstance(sg, SubgroupGraph) else sg
    named = {}
    out = []
    for u in tree.order:
        for _, _, edge in _half_edges(g, u):
            if edge in tree.tree_edges or edge in named:
                continue
            a, name, b = edge
            word = free_reduce(tree.approach[a] + ((name, 1),) + inverse(tree.approach[b]))
            named[edge] = f"{prefix}{len(out) + 1}"
            out.append((named[edge], word, edge))
    return out


def ambient_relators(amalgam):
    spec = amalgam.spec
    rels = list(spec.factor1.relators) + list(spec.factor2.relators)
    rels += [r for r in spec.amalgamation_relators() if r]
    return rels


def compute_qv(sg: SubgroupGraph):
    """``[(vertex, relator, edge path), ...]`` for every relator loop in the graph."""
    g = sg.graph
    out = []
    for v in range(g.num_vertices):
        for r in ambient_relators(sg.amalgam):
            path = _trace(g, v, r)
            if path is not None and path[1] == v:
                out.append((v, r, path[0]))
    return out


def _trace(g, v, word):
    steps = []
    for letter in word:
        t = g.step(v, letter)
        if t is None:
            return None
        name, sign = letter
        steps.append(((v, name, t) if sign == 1 else (t, name, v), sign))
        v = t
    return steps, v


def rewrite_phi(names: dict, path) -> Word:
    """Rewrite an edge path: tree edges vanish, others become generator letters.

    ``names`` maps positive non-tree edges to generator names; ``path`` is a
    sequence of ``(positive edge, sign)``.
    """
    out = []
    for edge, sign in path:
        if edge in names:
            out.append((names[edge], sign))
    return free_reduce(out)


def rewrite_word(sg, tree, names, start, word):
    """Rewrite the path labelled ``word`` from ``start`` (must be readable)."""
    traced = _trace(sg.graph if isinstance(sg, SubgroupGraph) else sg, start, word)
    if traced is None:
        raise ValueError("word is not readable from the given vertex")
    return rewrite_phi(names, traced[0])


def compute_presentation(sg: SubgroupGraph) -> SubgroupPresentation:
    tree = spanning_tree(sg)
    xh = compute_xh(sg, tree)
    names = {edge: name for name, _, edge in xh}
    rels = []
    seen = set()
    for _, _, path in compute_qv(sg):
        w = rewrite_phi(names, path)
        if w and w not in seen:
            seen.add(w)
            rels.append(w)
    return SubgroupPresentation(tuple((n, w) for n, w, _ in xh), tuple(rels))


def _canonical_relator(w):
    """Least rotation of ``w`` or its inverse (positive letters first)."""
    w = cyclic_reduce(w)
    if not w:
        return w
    candidates = []
    for v in (w, inverse(w)):
        for k in range(len(v)):
            candidates.append(v[k:] + v[:k])
    return min(candidates, key=lambda v: [(n, -s) for n, s in v])


def _dedupe(relators):
    out = []
    seen = set()
    for r in relators:
        c = _canonical_relator(r)
        if c and c not in seen:
            seen.add(c)
            out.append(c)
    return out


def tietze_simplify(p: SubgroupPresentation) -> SubgroupPresentation:
    """Eliminate generators occurring exactly once in some relator.

    At each round the shortest such relator is used; ties go to the
    generator listed last.  Surviving generators keep their names and
    defining words.
    """
    gens = list(p.generators)
    rels = _dedupe(p.relators)
    while True:
        best = None
        for ri, r in enumerate(rels):
            counts = {}
            for name, _ in r:
                counts[name] = counts.get(name, 0) + 1
            for gi in range(len(gens) - 1, -1, -1):
                name = gens[gi][0]
                if counts.get(name) == 1:
                    key = (len(r), -gi)
                    if best is None or key < best[0]:
                        best = (key, ri, gi)
                    break
        if best is None:
            break
        _, ri, gi = best
        name = gens[gi][0]
        r = rels[ri]
        k = next(i for i, (n, _) in enumerate(r) if n == name)
        # r = u h^s v  =>  h^s = u^-1 v^-1, rotate so h leads: h^s w = 1
        rotated = r[k:] + r[:k]
        sign = rotated[0][1]
        rest = rotated[1:]
        value = inverse(rest) if sign == 1 else rest  # h = value
        new = []
        for j, other in enumerate(rels):
            if j == ri:
                continue
            out = []
            for n, s in other:
                if n == name:
                    out.extend(value if s == 1 else inverse(value))
                else:
                    out.append((n, s))
            new.append(free_reduce(out))
        del gens[gi]
        rels = _dedupe(new)
    rels.sort(key=lambda w: (len(w), w))
    return SubgroupPresentation(tuple(gens), tuple(rels))


def presentation_of(sg: SubgroupGraph, simplify=True) -> SubgroupPresentation:
    p = compute_presentation(sg)
    return tietze_simplify(p) if simplify else p
