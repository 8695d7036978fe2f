"""A validated amalgam: both factors enumerated, the edge subgroup located.

The edge subgroup ``A`` is enumerated abstractly as the subgroup of
``G1 x G2`` generated by the pairs ``(phi1(y), phi2(y))``.  Its elements are
numbered ``0 .. |A|-1`` (0 is the identity) and each carries its image in
both factors.  ``phi1`` and ``phi2`` are injective exactly when both
projections of that subgroup are one-to-one.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

from .finite_groups import DEFAULT_COSET_CAP, CayleyModel, coset_transversal, enumerate_group, is_central, is_malnormal
from .graph import LabelledGraph
from .words import AmalgamSpec, Word


class AmalgamError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeImage:
    """``phi_i(A)`` inside factor ``i``."""

    factor: int
    elements: tuple  # factor-element index of each A element, in A order
    y_images: dict  # edge generator -> factor element

    @property
    def order(self):
        return len(self.elements)

    def as_set(self):
        return frozenset(self.elements)


class Amalgam:
    """An :class:`AmalgamSpec` together with the finite data it determines."""

    def __init__(self, spec: AmalgamSpec, max_cosets: int = DEFAULT_COSET_CAP):
        self.spec = spec
        self.models = {i: enumerate_group(spec.factor(i), max_cosets) for i in (1, 2)}
        self.colour = {g: 1 for g in spec.factor1.generators}
        self.colour.update({g: 2 for g in spec.factor2.generators})
        self._enumerate_edge_subgroup()
        self._cover_cache = {}
        self._transversals = {}

    # -- edge subgroup ----------------------------------------------------

    def _enumerate_edge_subgroup(self):
        m1, m2 = self.models[1], self.models[2]
        ys = self.spec.edge_generators
        gens = [(m1.eval_word(self.spec.phi1[y]), m2.eval_word(self.spec.phi2[y])) for y in ys]
        self.y_images = {i: {y: gens[k][i - 1] for k, y in enumerate(ys)} for i in (1, 2)}
        pairs = [(0, 0)]
        seen = {(0, 0)}
        queue = deque(pairs)
        while queue:
            p, q = queue.popleft()
            for a, b in gens:
                nxt = (m1.mul(p, a), m2.mul(q, b))
                if nxt not in seen:
                    seen.add(nxt)
                    pairs.append(nxt)
                    queue.append(nxt)
        p1 = {p for p, _ in pairs}
        p2 = {q for _, q in pairs}
        for i, proj, model in ((1, p1, m1), (2, p2, m2)):
            if len(proj) != len(pairs):
                raise AmalgamError(
                    f"phi{i} is not injective: the edge subgroup has order {len(pairs)}"
                    f" but its image in factor {i} has order {len(proj)}"
                )
            if len(proj) == model.order:
                raise AmalgamError(f"the edge subgroup is all of factor {i}; it must be a proper subgroup")
        self.a_pairs = tuple(pairs)
        self.a_order = len(pairs)
        self.a_elements = {1: tuple(p for p, _ in pairs), 2: tuple(q for _, q in pairs)}
        self.a_index = {i: {e: k for k, e in enumerate(self.a_elements[i])} for i in (1, 2)}
        self.a_sets = {i: frozenset(self.a_elements[i]) for i in (1, 2)}

    def edge_image(self, i) -> EdgeImage:
        return EdgeImage(i, self.a_elements[i], dict(self.y_images[i]))

    def a_word(self, i, k) -> Word:
        """A word over factor ``i`` spelling the A-element ``k``."""
        return self.models[i].words[self.a_elements[i][k]]

    def a_mul(self, j, k):
        m = self.models[1]
        return self.a_index[1][m.mul(self.a_elements[1][j], self.a_elements[1][k])]

    def other(self, i):
        return 3 - i

    def generators(self, i):
        return self.spec.factor(i).generators

    @property
    def alphabet(self):
        return self.spec.alphabet

    # -- case predicates --------------------------------------------------

    def is_cyclic(self):
        m = self.models[1]
        return any(m.element_order(e) == self.a_order for e in self.a_elements[1])

    def is_central(self, i):
        return is_central(self.models[i], self.a_elements[i])

    def is_malnormal(self, i):
        return is_malnormal(self.models[i], self.a_elements[i])

    def classify_edge_subgroup(self):
        """All applicable case tags (see the separability module)."""
        tags = set()
        if self.is_cyclic():
            tags.add("cyclic")
        for i in (1, 2):
            if self.is_central(i):
                tags.add(f"central_in_{i}")
            if self.is_malnormal(i):
                tags.add(f"malnormal_in_{i}")
        if not tags:
            tags.add("none")
        return tags

    # -- transversals and covers ------------------------------------------

    def transversal(self, i):
        """Right cosets ``A e`` of factor ``i``: ``(coset_of, rep_elements, rep_words)``.

        Coset 0 is ``A`` itself with the empty representative.
        """
        if i not in self._transversals:
            model = self.models[i]
            words = coset_transversal(model, self.a_sets[i])
            reps = [model.eval_word(w) for w in words]
            coset_of = [None] * model.order
            for c, r in enumerate(reps):
                for a in self.a_elements[i]:
                    coset_of[model.mul(a, r)] = c
            self._transversals[i] = (tuple(coset_of), tuple(reps), tuple(words))
        return self._transversals[i]

    def cover(self, i, subgroup=frozenset({0})):
        """``Cayley(G_i, S)`` based at ``S.1``, plus the element -> vertex map.

        ``subgroup`` is a set of element indices of factor ``i`` closed
        under multiplication.  Vertices are right cosets ``S g``.
        """
        key = (i, frozenset(subgroup))
        if key not in self._cover_cache:
            self._cover_cache[key] = _build_cover(self.models[i], key[1])
        return self._cover_cache[key]

    def cayley(self, i):
        return self.cover(i, frozenset({0}))

    def a_subgroup(self, i, ks):
        """Factor-``i`` elements of the subgroup of A generated by A-indices ``ks``."""
        model = self.models[i]
        return model.subgroup_closure(self.a_elements[i][k] for k in ks)

    def a_indices(self, i, elements):
        return frozenset(self.a_index[i][e] for e in elements)

    def summary(self):
        tags = ", ".join(sorted(self.classify_edge_subgroup()))
        return (
            f"|G1| = {self.models[1].order}, |G2| = {self.models[2].order}, |A| = {self.a_order}; "
            f"edge subgroup: {tags}"
        )


def _build_cover(model: CayleyModel, subgroup):
    coset_of = [None] * model.order
    reps = []
    for e in range(model.order):
        if coset_of[e] is None:
            c = len(reps)
            reps.append(e)
            for s in subgroup:
                coset_of[model.mul(s, e)] = c
    edges = []
    for c, r in enumerate(reps):
        for g in model.generators:
            edges.append((c, g, coset_of[model.step(r, (g, 1))]))
    return LabelledGraph(len(reps), edges, coset_of[0]), tuple(coset_of)


def validate_amalgam(spec: AmalgamSpec, max_cosets: int = DEFAULT_COSET_CAP) -> Amalgam:
    """Enumerate the factors and check that ``spec`` defines an amalgam.

    Raises :class:`AmalgamError` (or ``CosetCapExceeded`` for a factor that
    does not enumerate).
    """
    return Amalgam(spec, max_cosets)


def edge_image(amalgam: Amalgam):
    return amalgam.edge_image(1), amalgam.edge_image(2)


def classify_edge_subgroup(amalgam: Amalgam):
    return amalgam.classify_edge_subgroup()


def lcm(*values):
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
