"""Finite factors realised concretely through coset enumeration.

Elements of a finite group are identified with vertices of its Cayley graph,
i.e. with cosets of the trivial subgroup, numbered in shortlex order of
their first discovery.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .words import GroupPresentation, Word, format_word, inverse

DEFAULT_COSET_CAP = 10**6


class CosetCapExceeded(RuntimeError):
    pass


def _columns(generators):
    letters = []
    for g in generators:
        letters.append((g, 1))
        letters.append((g, -1))
    return letters, {letter: j for j, letter in enumerate(letters)}


def todd_coxeter(presentation: GroupPresentation, subgroup_words: Sequence[Word] = (),
                 max_cosets: int = DEFAULT_COSET_CAP) -> "CosetTable":
    """HLT coset enumeration of the cosets of ``<subgroup_words>``.

    Raises :class:`CosetCapExceeded` once more than ``max_cosets`` cosets
    have been defined in total (live or dead).
    """
    letters, col = _columns(presentation.generators)
    ncols = len(letters)
    rels = [[col[l] for l in r] for r in presentation.relators]
    subs = [[col[l] for l in w] for w in subgroup_words]

    table = [[None] * ncols]
    parent = [0]

    def rep(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, j):
        if len(table) >= max_cosets:
            raise CosetCapExceeded(f"more than {max_cosets} cosets defined")
        n = len(table)
        table.append([None] * ncols)
        parent.append(n)
        table[c][j] = n
        table[n][j ^ 1] = c

    def coincidence(a, b):
        queue = []

        def merge(k, m):
            k, m = rep(k), rep(m)
            if k != m:
                lo, hi = min(k, m), max(k, m)
                parent[hi] = lo
                queue.append(hi)

        merge(a, b)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d is None:
                    continue
                table[d][x ^ 1] = None
                mu, nu = rep(g), rep(d)
                if table[mu][x] is not None:
                    merge(nu, table[mu][x])
                elif table[nu][x ^ 1] is not None:
                    merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(c, w):
        if not w:
            return
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] is not None:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    for w in subs:
        scan_and_fill(0, w)
    c = 0
    while c < len(table):
        if parent[c] == c:
            for r in rels:
                scan_and_fill(c, r)
                if parent[c] != c:
                    break
            if parent[c] == c:
                for x in range(ncols):
                    if table[c][x] is None:
                        define(c, x)
        c += 1

    live = {c: [rep(t) for t in table[c]] for c in range(len(table)) if parent[c] == c}
    return CosetTable._standardise(presentation, tuple(subgroup_words), letters, live, rep(0))


@dataclass(frozen=True)
class CosetTable:
    """A complete coset table: ``action[letter][c]`` is the coset ``c . letter``.

    Coset 0 is the subgroup itself; the others are numbered in shortlex
    order of their first discovery by breadth-first search.
    """

    presentation: GroupPresentation
    subgroup_generators: tuple
    letters: tuple
    action: dict

    @property
    def index(self):
        return len(next(iter(self.action.values()))) if self.action else 1

    def __len__(self):
        return self.index

    @classmethod
    def _standardise(cls, presentation, subgroup_words, letters, live, start):
        order = {start: 0}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for t in live[c]:
                if t not in order:
                    order[t] = len(order)
                    queue.append(t)
        action = {}
        for j, letter in enumerate(letters):
            row = [0] * len(order)
            for c, new in order.items():
                row[new] = order[live[c][j]]
            action[letter] = tuple(row)
        return cls(presentation, subgroup_words, tuple(letters), action)

    def step(self, coset, letter):
        return self.action[letter][coset]

    def read(self, coset, word):
        for letter in word:
            coset = self.action[letter][coset]
        return coset

    def to_graph(self):
        from .graph import LabelledGraph

        edges = []
        for c in range(self.index):
            for g in self.presentation.generators:
                edges.append((c, g, self.action[(g, 1)][c]))
        return LabelledGraph(self.index, edges, 0)

    def to_text(self):
        """Plain-text table: header of generators, then one row per coset."""
        gens = self.presentation.generators
        lines = ["coset " + " ".join(gens)]
        for c in range(self.index):
            lines.append(f"{c} " + " ".join(str(self.action[(g, 1)][c]) for g in gens))
        return "\n".join(lines) + "\n"

    def to_dot(self, name="G"):
        return self.to_graph().to_dot(name=name)


class CayleyModel:
    """A finite group as its Cayley graph, with element arithmetic.

    ``mult_table[e][letter]`` is ``e * letter``; ``mul(e, f)`` is the
    product of elements.  ``words[e]`` is the shortlex-least word over the
    positive generators reaching ``e``.
    """

    def __init__(self, table: CosetTable):
        self.table = table
        self.presentation = table.presentation
        self.generators = table.presentation.generators
        self.order = table.index
        self.identity = 0
        self.mult_table = [
            {letter: table.action[letter][e] for letter in table.letters} for e in range(self.order)
        ]
        self.words = self._positive_words()
        self._mul = None
        self._inv = None

    def _positive_words(self):
        words = [None] * self.order
        words[0] = ()
        queue = deque([0])
        while queue:
            e = queue.popleft()
            for g in self.generators:
                f = self.mult_table[e][(g, 1)]
                if words[f] is None:
                    words[f] = words[e] + ((g, 1),)
                    queue.append(f)
        return words

    def step(self, e, letter):
        return self.mult_table[e][letter]

    def eval_word(self, word, start=0):
        e = start
        for letter in word:
            e = self.mult_table[e][letter]
        return e

    @property
    def mul_table(self):
        if self._mul is None:
            n = self.order
            mul = [[0] * n for _ in range(n)]
            for e in range(n):
                row = mul[e]
                for f in range(n):
                    row[f] = self.eval_word(self.words[f], e)
            self._mul = mul
        return self._mul

    def mul(self, e, f):
        return self.mul_table[e][f]

    def inv(self, e):
        if self._inv is None:
            self._inv = [0] * self.order
            for a in range(self.order):
                self._inv[a] = self.eval_word(inverse(self.words[a]))
        return self._inv[e]

    def element_order(self, e):
        k, f = 1, e
        while f != self.identity:
            f = self.mul(f, e)
            k += 1
        return k

    def subgroup_closure(self, elements):
        """Smallest subgroup containing ``elements``."""
        group = {self.identity}
        frontier = [self.identity]
        gens = set(elements)
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    f = self.mul(e, g)
                    if f not in group:
                        group.add(f)
                        nxt.append(f)
            frontier = nxt
        return frozenset(group)

    def format_element(self, e):
        return format_word(self.words[e])

    def cayley_graph(self):
        return self.table.to_graph()


def enumerate_group(presentation: GroupPresentation, max_cosets: int = DEFAULT_COSET_CAP) -> CayleyModel:
    return CayleyModel(todd_coxeter(presentation, (), max_cosets))


def eval_word(model: CayleyModel, word: Word) -> int:
    return model.eval_word(word)


def relative_cayley(model: CayleyModel, subgroup_words: Sequence[Word]) -> CosetTable:
    """The coset table of ``<subgroup_words>`` in the model's group."""
    subgroup = model.subgroup_closure(model.eval_word(w) for w in subgroup_words)
    return coset_table_of(model, subgroup, tuple(subgroup_words))


def coset_table_of(model: CayleyModel, subgroup: frozenset, subgroup_words=()) -> CosetTable:
    coset_of = [None] * model.order
    reps = []
    for e in _bfs_elements(model):
        if coset_of[e] is None:
            c = len(reps)
            reps.append(e)
            for s in subgroup:
                coset_of[model.mul(s, e)] = c
    action = {}
    for letter in model.table.letters:
        action[letter] = tuple(coset_of[model.step(r, letter)] for r in reps)
    return CosetTable(model.presentation, tuple(subgroup_words), model.table.letters, action)


def _bfs_elements(model):
    """Elements in shortlex order of their positive-generator words."""
    seen = [False] * model.order
    seen[0] = True
    queue = deque([0])
    order = []
    while queue:
        e = queue.popleft()
        order.append(e)
        for g in model.generators:
            f = model.step(e, (g, 1))
            if not seen[f]:
                seen[f] = True
                queue.append(f)
    return order


def coset_transversal(model: CayleyModel, subgroup_elements) -> list:
    """One shortlex-least positive word per right coset ``S g``.

    The identity coset gets the empty word; the remaining representatives
    follow in the order their cosets are first met.
    """
    subgroup = frozenset(subgroup_elements)
    seen = set()
    reps = []
    for e in _bfs_elements(model):
        key = frozenset(model.mul(s, e) for s in subgroup)
        if key not in seen:
            seen.add(key)
            reps.append(model.words[e])
    return reps


def is_central(model: CayleyModel, elements) -> bool:
    return all(model.mul(a, g) == model.mul(g, a) for a in elements for g in range(model.order))


def is_malnormal(model: CayleyModel, subgroup) -> bool:
    sub = frozenset(subgroup)
    for g in range(model.order):
        if g in sub:
            continue
        gi = model.inv(g)
        conj = {model.mul(model.mul(gi, a), g) for a in sub}
        if len(conj & sub) > 1:
            return False
    return True
