"""Pointed labelled graphs and the operations on them.

Only positively labelled edges ``(u, generator, v)`` are stored; the inverse
edge ``(v, generator^-1, u)`` is implied.  Graphs are immutable: every
operation returns a new graph, usually together with a map from the old
vertex numbering to the new one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import Letter, Word


class LabelledGraph:
    """A finite graph with edges labelled by generator names.

    ``edges`` holds positive edges only.  ``out(v)`` gives the outgoing
    half-edges at ``v`` (including the inverse half-edges) as a dict
    ``letter -> list of targets``.
    """

    __slots__ = ("num_vertices", "edges", "basepoint", "_out")

    def __init__(self, num_vertices: int, edges: Iterable[tuple] = (), basepoint: int = 0):
        if num_vertices < 1:
            raise ValueError("a graph needs at least its basepoint")
        if not 0 <= basepoint < num_vertices:
            raise ValueError("basepoint out of range")
        edges = tuple(edges)
        for u, _, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge endpoint out of range: {(u, v)}")
        self.num_vertices = num_vertices
        self.edges = edges
        self.basepoint = basepoint
        out = [dict() for _ in range(num_vertices)]
        for u, g, v in edges:
            out[u].setdefault((g, 1), []).append(v)
            out[v].setdefault((g, -1), []).append(u)
        self._out = out

    @classmethod
    def trivial(cls):
        return cls(1, (), 0)

    def __repr__(self):
        return f"LabelledGraph(|V|={self.num_vertices}, |E+|={len(self.edges)}, v0={self.basepoint})"

    def __eq__(self, other):
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return (
            self.num_vertices == other.num_vertices
            and self.basepoint == other.basepoint
            and sorted(self.edges) == sorted(other.edges)
        )

    def __hash__(self):
        return hash((self.num_vertices, self.basepoint, tuple(sorted(self.edges))))

    @property
    def vertices(self):
        return range(self.num_vertices)

    def out(self, v):
        return self._out[v]

    def step(self, v, letter):
        """Target of the ``letter`` edge at ``v``, or None."""
        targets = self._out[v].get(letter)
        return targets[0] if targets else None

    def degree(self, v):
        return sum(len(t) for t in self._out[v].values())

    def labels(self):
        return sorted({g for _, g, _ in self.edges})

    def is_well_labelled(self):
        return all(len(t) == 1 for out in self._out for t in out.values())

    def is_trivial(self):
        return self.num_vertices == 1 and not self.edges

    def is_saturated(self, generators):
        return self.unsaturated_vertex(generators) is None

    def unsaturated_vertex(self, generators):
        """First ``(vertex, letter)`` with no outgoing edge, or None."""
        for v in range(self.num_vertices):
            out = self._out[v]
            for g in generators:
                for s in (1, -1):
                    if (g, s) not in out:
                        return v, (g, s)
        return None

    def rebased(self, basepoint):
        return LabelledGraph(self.num_vertices, self.edges, basepoint)

    # -- text formats ---------------------------------------------------

    def to_text(self):
        """Vertex count, then one ``u v label`` line per positive edge.

        The graph is canonically renumbered first (basepoint 0), so equal
        pointed graphs give identical text.
        """
        g = canonical(self)
        lines = [str(g.num_vertices)]
        lines += [f"{u} {v} {label}" for u, label, v in g.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 1:
            raise ValueError("graph text must start with the vertex count")
        n = int(rows[0][0])
        edges = []
        for row in rows[1:]:
            if len(row) != 3:
                raise ValueError(f"bad edge line {' '.join(row)!r}")
            edges.append((int(row[0]), row[2], int(row[1])))
        return cls(n, edges, 0)

    def to_dot(self, name="G", dashed=()):
        """DOT source; edges whose label is in ``dashed`` are drawn dashed."""
        dashed = set(dashed)
        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == self.basepoint else "circle"
            lines.append(f'  v{v} [shape={shape}, label="{v}"];')
        for u, g, v in sorted(self.edges):
            style = ", style=dashed" if g in dashed else ""
            lines.append(f'  v{u} -> v{v} [label="{g}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- reading -------------------------------------------------------------


def read_prefix(g: LabelledGraph, start: int, word: Sequence[Letter]):
    """Read ``word`` from ``start`` as far as possible.

    Returns ``(vertex, k)``: the first ``k`` letters were read, ending at
    ``vertex``.  ``k == len(word)`` means the whole word was readable.
    """
    v = start
    for k, letter in enumerate(word):
        t = g.step(v, letter)
        if t is None:
            return v, k
        v = t
    return v, len(word)


def read_path(g: LabelledGraph, start: int, word: Sequence[Letter]):
    """Endpoint of the path labelled ``word`` from ``start``; None if unreadable."""
    v, k = read_prefix(g, start, word)
    return v if k == len(word) else None


# -- folding -------------------------------------------------------------


def fold_all(g: LabelledGraph, identifications: Iterable[tuple] = (), rng=None):
    """Identify the given vertex pairs, then fold until well-labelled.

    Returns ``(folded, vertex_map)``.  Vertices of the result are numbered
    by the smallest original vertex in each class, so the output does not
    depend on the order in which folds happen.  Passing a ``random.Random``
    as ``rng`` shuffles edge insertion and the merge worklist.
    """
    n = g.num_vertices
    parent = list(range(n))
    size = [1] * n
    nbr = [dict() for _ in range(n)]
    pending = []

    def find(v):
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def attach(u, letter, v):
        known = nbr[u].get(letter)
        if known is None:
            nbr[u][letter] = v
        else:
            pending.append((known, v))

    def drain():
        while pending:
            if rng is not None and len(pending) > 1:
                i = rng.randrange(len(pending))
                pending[i], pending[-1] = pending[-1], pending[i]
            a, b = pending.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
            moved, nbr[b] = nbr[b], {}
            for letter, t in moved.items():
                attach(a, letter, t)

    edges = list(g.edges)
    pairs = list(identifications)
    if rng is not None:
        rng.shuffle(edges)
        rng.shuffle(pairs)
    pending.extend(pairs)
    drain()
    for u, name, v in edges:
        attach(find(u), (name, 1), v)
        attach(find(v), (name, -1), u)
        drain()

    roots = sorted({find(v) for v in range(n)}, key=lambda r: r)
    # renumber each class by its least member
    least = {}
    for v in range(n):
        r = find(v)
        if r not in least:
            least[r] = v
    order = sorted(least, key=least.get)
    new = {r: i for i, r in enumerate(order)}
    vmap = [new[find(v)] for v in range(n)]
    out_edges = set()
    for r in roots:
        for (name, sign), t in nbr[r].items():
            if sign == 1:
                out_edges.add((new[r], name, new[find(t)]))
    folded = LabelledGraph(len(order), sorted(out_edges), vmap[g.basepoint])
    return folded, vmap


def restrict(g: LabelledGraph, keep: Iterable[int], edges=None):
    """Induced subgraph on ``keep`` (must contain the basepoint).

    Returns ``(subgraph, vertex_map)`` where ``vertex_map[v]`` is None for
    dropped vertices.  ``edges`` optionally replaces the edge set to filter.
    """
    keep = sorted(set(keep))
    index = {v: i for i, v in enumerate(keep)}
    if g.basepoint not in index:
        raise ValueError("restriction must keep the basepoint")
    source = g.edges if edges is None else edges
    kept = [(index[u], name, index[v]) for u, name, v in source if u in index and v in index]
    vmap = [index.get(v) for v in range(g.num_vertices)]
    return LabelledGraph(len(keep), kept, index[g.basepoint]), vmap


def cut_hairs(g: LabelledGraph) -> LabelledGraph:
    """Repeatedly delete degree-one vertices (and isolated ones) other than the basepoint."""
    deg = [g.degree(v) for v in range(g.num_vertices)]
    alive = [True] * g.num_vertices
    edge_alive = [True] * len(g.edges)
    incident = [[] for _ in range(g.num_vertices)]
    for k, (u, _, v) in enumerate(g.edges):
        incident[u].append(k)
        if v != u:
            incident[v].append(k)
    stack = [v for v in range(g.num_vertices) if deg[v] <= 1 and v != g.basepoint]
    while stack:
        v = stack.pop()
        if not alive[v] or v == g.basepoint or deg[v] > 1:
            continue
        alive[v] = False
        for k in incident[v]:
            if not edge_alive[k]:
                continue
            edge_alive[k] = False
            u, _, w = g.edges[k]
            other = w if u == v else u
            deg[other] -= 1
            deg[v] -= 1
            if deg[other] <= 1 and other != g.basepoint:
                stack.append(other)
    edges = [e for k, e in enumerate(g.edges) if edge_alive[k]]
    sub, _ = restrict(g, [v for v in range(g.num_vertices) if alive[v]], edges)
    return sub


def disjoint_union(graphs: Sequence[LabelledGraph]):
    """Disjoint union, based at the first graph's basepoint; returns (graph, offsets)."""
    offsets = []
    edges = []
    total = 0
    for h in graphs:
        offsets.append(total)
        edges.extend((u + total, name, v + total) for u, name, v in h.edges)
        total += h.num_vertices
    return LabelledGraph(total, edges, graphs[0].basepoint), offsets


def pushout(g1: LabelledGraph, g2: LabelledGraph, identifications: Iterable[tuple] = (), rng=None):
    """Glue ``g2`` to ``g1`` along vertex pairs ``(v in g1, w in g2)`` and fold.

    Returns ``(graph, map1, map2)`` sending vertices of the inputs to the
    result.  The basepoint is that of ``g1``.
    """
    union, (_, off) = disjoint_union([g1, g2])
    pairs = [(v, w + off) for v, w in identifications]
    folded, vmap = fold_all(union, pairs, rng)
    return folded, vmap[:off], vmap[off:]


def component_of(g: LabelledGraph, v: int):
    """Vertices of the connected component containing ``v``."""
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for targets in g.out(u).values():
            for t in targets:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return seen


def basepoint_component(g: LabelledGraph):
    """Restrict to the connected component of the basepoint."""
    return restrict(g, component_of(g, g.basepoint))


def _letter_key(letter):
    return (letter[0], -letter[1])


def canonical(g: LabelledGraph) -> LabelledGraph:
    """Renumber vertices in breadth-first order from the basepoint.

    Letters are tried in the order x, x^-1, y, y^-1, ... by generator name;
    unreachable vertices follow in their old order.
    """
    order = {g.basepoint: 0}
    queue = deque([g.basepoint])
    while True:
        while queue:
            u = queue.popleft()
            for letter in sorted(g.out(u), key=_letter_key):
                for t in g.out(u)[letter]:
                    if t not in order:
                        order[t] = len(order)
                        queue.append(t)
        rest = [v for v in range(g.num_vertices) if v not in order]
        if not rest:
            break
        order[rest[0]] = len(order)
        queue.append(rest[0])
    edges = sorted((order[u], name, order[v]) for u, name, v in g.edges)
    return LabelledGraph(g.num_vertices, edges, 0)


def isomorphic(g1: LabelledGraph, g2: LabelledGraph):
    """Basepoint-preserving label isomorphism between well-labelled graphs.

    Returns the vertex map as a list, or None.  Connected graphs only have
    one candidate map, found by reading both graphs in lockstep.
    """
    if g1.num_vertices != g2.num_vertices or len(g1.edges) != len(g2.edges):
        return None
    phi = {g1.basepoint: g2.basepoint}
    used = {g2.basepoint}
    queue = deque([g1.basepoint])
    pending = [v for v in range(g1.num_vertices)]
    while True:
        while queue:
            u = queue.popleft()
            out1, out2 = g1.out(u), g2.out(phi[u])
            if set(out1) != set(out2):
                return None
            for letter, targets in out1.items():
                t1, t2 = targets[0], out2[letter][0]
                if len(targets) != 1 or len(out2[letter]) != 1:
                    return None
                if t1 in phi:
                    if phi[t1] != t2:
                        return None
                elif t2 in used:
                    return None
                else:
                    phi[t1] = t2
                    used.add(t2)
                    queue.append(t1)
        # pointed graphs from the pipeline are connected; anything else is
        # only isomorphic here if it is edge-free outside the basepoint part
        while pending and pending[-1] in phi:
            pending.pop()
        if not pending:
            break
        u = pending.pop()
        if g1.out(u):
            return None
        free = [w for w in range(g2.num_vertices) if w not in used and not g2.out(w)]
        if not free:
            return None
        phi[u] = free[0]
        used.add(free[0])
    return [phi[v] for v in range(g1.num_vertices)]


def is_morphism(g1: LabelledGraph, g2: LabelledGraph, vmap, pointed=True) -> bool:
    """True iff ``vmap`` carries every labelled edge of g1 to one of g2."""
    if pointed and vmap[g1.basepoint] != g2.basepoint:
        return False
    for u, name, v in g1.edges:
        if g2.step(vmap[u], (name, 1)) != vmap[v]:
            return False
    return True


# -- colours -------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    factor: int
    vertices: frozenset
    edges: tuple  # positive edges (u, name, v)


@dataclass(frozen=True)
class ChromaticReport:
    vm1: frozenset = frozenset()
    vm2: frozenset = frozenset()
    vb: frozenset = frozenset()
    components: tuple = ()
    component_at: dict = field(default_factory=dict)  # (vertex, factor) -> index

    def vm(self, i):
        return self.vm1 if i == 1 else self.vm2

    def component(self, v, factor):
        k = self.component_at.get((v, factor))
        return None if k is None else self.components[k]


def classify(g: LabelledGraph, colour) -> ChromaticReport:
    """Split vertices by colour and find the monochromatic components.

    ``colour`` maps a generator name to 1 or 2 (a dict, or anything with
    ``__getitem__``, e.g. ``Amalgam.colour``).
    """
    parent = list(range(g.num_vertices))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    colours = [set() for _ in range(g.num_vertices)]
    by_colour = {1: [], 2: []}
    for e in g.edges:
        u, name, v = e
        c = colour[name]
        colours[u].add(c)
        colours[v].add(c)
        by_colour[c].append(e)

    components = []
    component_at = {}
    for c in (1, 2):
        parent[:] = range(g.num_vertices)
        for u, _, v in by_colour[c]:
            a, b = find(u), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups = {}
        for u, name, v in by_colour[c]:
            groups.setdefault(find(u), []).append((u, name, v))
        for root in sorted(groups):
            es = groups[root]
            vs = frozenset(x for e in es for x in (e[0], e[2]))
            k = len(components)
            components.append(Component(c, vs, tuple(es)))
            for x in vs:
                component_at[(x, c)] = k

    vm1 = frozenset(v for v in range(g.num_vertices) if colours[v] == {1})
    vm2 = frozenset(v for v in range(g.num_vertices) if colours[v] == {2})
    vb = frozenset(v for v in range(g.num_vertices) if len(colours[v]) == 2)
    return ChromaticReport(vm1, vm2, vb, tuple(components), component_at)


def component_graph(g: LabelledGraph, comp: Component, basepoint: int):
    """The component as a standalone pointed graph, with the vertex map."""
    return restrict(g.rebased(basepoint), comp.vertices, comp.edges)


def relabel(g: LabelledGraph, vmap, n=None) -> LabelledGraph:
    n = max(vmap) + 1 if n is None else n
    return LabelledGraph(n, [(vmap[u], name, vmap[v]) for u, name, v in g.edges], vmap[g.basepoint])


def words_to_bouquet(words: Sequence[Word]) -> LabelledGraph:
    """One subdivided loop at vertex 0 per word (empty words add nothing)."""
    n = 1
    edges = []
    for w in words:
        if not w:
            continue
        prev = 0
        for k, (name, sign) in enumerate(w):
            nxt = 0 if k == len(w) - 1 else n
            if nxt:
                n += 1
            edges.append((prev, name, nxt) if sign == 1 else (nxt, name, prev))
            prev = nxt
    return LabelledGraph(n, edges, 0)
