"""Properties of a subgroup read directly from its subgroup graph."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import classify
from .pipeline import SubgroupGraph

INFINITE = math.inf


@dataclass(frozen=True)
class DecisionReport:
    trivial: bool
    free: bool
    torsion_free: bool
    index: float  # int, or math.inf
    free_witness: object = None  # (factor, vertex) of a small component
    index_witness: object = None  # (vertex, missing letter)

    def as_dict(self):
        idx = "infinite" if self.index == INFINITE else int(self.index)
        return {
            "trivial": self.trivial,
            "free": self.free,
            "torsion_free": self.torsion_free,
            "index": idx,
        }


def is_trivial(sg: SubgroupGraph) -> bool:
    return sg.graph.is_trivial()


def free_witness(sg: SubgroupGraph):
    """A monochromatic component with fewer vertices than its factor, or None.

    Returned as ``(factor, least vertex)``.
    """
    am = sg.amalgam
    for comp in classify(sg.graph, am.colour).components:
        if len(comp.vertices) != am.models[comp.factor].order:
            return comp.factor, min(comp.vertices)
    return None


def is_free(sg: SubgroupGraph) -> bool:
    """Free iff every monochromatic component is a full Cayley graph of its factor."""
    return free_witness(sg) is None


def is_torsion_free(sg: SubgroupGraph) -> bool:
    # same criterion: a finite subgroup of a factor conjugate shows up as a
    # non-regular component, and conversely
    return free_witness(sg) is None


def index_witness(sg: SubgroupGraph):
    return sg.graph.unsaturated_vertex(sg.amalgam.alphabet)


def index(sg: SubgroupGraph):
    """``[G:H]`` as an int, or ``math.inf``."""
    if index_witness(sg) is not None:
        return INFINITE
    return sg.graph.num_vertices


def decide(sg: SubgroupGraph) -> DecisionReport:
    fw = free_witness(sg)
    iw = index_witness(sg)
    return DecisionReport(
        trivial=is_trivial(sg),
        free=fw is None,
        torsion_free=fw is None,
        index=INFINITE if iw is not None else sg.graph.num_vertices,
        free_witness=fw,
        index_witness=iw,
    )


def format_index(sg: SubgroupGraph) -> str:
    iw = index_witness(sg)
    if iw is None:
        return str(sg.graph.num_vertices)
    return f"infinite (witness: v{iw[0]})"
