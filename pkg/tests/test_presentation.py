import random

from amalgraph.finite_groups import enumerate_group
from amalgraph.graph import LabelledGraph
from amalgraph.normal_forms import equal_in_g
from amalgraph.pipeline import build_subgroup_graph, is_member
from amalgraph.presentation import (
    SubgroupPresentation,
    compute_presentation,
    compute_qv,
    compute_xh,
    rewrite_word,
    spanning_tree,
    tietze_simplify,
)
from amalgraph.words import GroupPresentation, format_word, parse_word
from helpers import load, random_generators, words

SL2Z = load("sl2z")


def sg_of(*texts, am=SL2Z):
    return build_subgroup_graph(am, words(*texts))


def xh_table(sg):
    return {name: format_word(w) for name, w, _ in compute_xh(sg, spanning_tree(sg))}


def test_spanning_tree():
    t = spanning_tree(sg_of())
    assert not t.tree_edges and t.approach == {0: ()}
    sg = sg_of("x y x^-1", "y x y^-1")
    t = spanning_tree(sg)
    assert len(t.tree_edges) == sg.graph.num_vertices - 1
    assert t.approach[sg.graph.basepoint] == ()
    loop2 = LabelledGraph(2, [(0, "x", 1), (1, "y", 0)])
    assert len(spanning_tree(loop2).tree_edges) == 1


def test_generators_of_conjugate_pair():
    sg = sg_of("x y x^-1", "y x y^-1")
    # four defining words; numbering follows our BFS tree
    assert sorted(xh_table(sg).values()) == sorted(["x y x^-1", "x^2", "y x y^-1", "y^3"])
    loop = LabelledGraph(1, [(0, "x", 0)])
    assert [(n, format_word(w)) for n, w, _ in compute_xh(loop, spanning_tree(loop))] == [("h1", "x")]
    # <x> also picks up y^3 (= x^2) from the completion at the basepoint
    assert xh_table(sg_of("x")) == {"h1": "x", "h2": "y^3"}
    assert xh_table(sg_of()) == {}


def test_qv():
    sg = sg_of("x y x^-1", "y x y^-1")
    at_v0 = {format_word(r) for v, r, _ in compute_qv(sg) if v == sg.graph.basepoint}
    assert {"x^4", "y^6", "x^2 y^-3"} <= at_v0
    assert compute_qv(sg_of()) == []
    # x^2 graph: vertices of the y-component carry no x-edges except v0
    sg = sg_of("x^2")
    for v, r, _ in compute_qv(sg):
        if not sg.graph.out(v).get(("x", 1)):
            assert r[0][0] != "x"


def test_rewrite():
    sg = sg_of("x y x^-1", "y x y^-1")
    tree = spanning_tree(sg)
    xh = compute_xh(sg, tree)
    names = {edge: name for name, _, edge in xh}
    inv = {format_word(w): n for n, w, _ in xh}
    h_x2 = inv["x^2"]
    assert rewrite_word(sg, tree, names, 0, parse_word("x^2")) == ((h_x2, 1),)
    assert rewrite_word(sg, tree, names, 0, parse_word("x x^4 x^-1")) == ((h_x2, 1), (h_x2, 1))
    assert rewrite_word(sg, tree, names, 0, parse_word("x x^-1")) == ()


def test_raw_relators_of_conjugate_pair():
    sg = sg_of("x y x^-1", "y x y^-1")
    p = compute_presentation(sg)
    inv = {format_word(w): n for n, w in p.generators}
    a, b, c, d = inv["x y x^-1"], inv["x^2"], inv["y x y^-1"], inv["y^3"]
    expected = {f"{b}^2", f"{d}^2", f"{b} {d}^-1", f"{a}^6", f"{b} {a}^-3", f"{c}^4", f"{c}^2 {d}^-1"}
    assert expected <= {format_word(r) for r in p.relators}


def test_simplified_conjugate_pair():
    sg = sg_of("x y x^-1", "y x y^-1")
    p = tietze_simplify(compute_presentation(sg))
    defs = {format_word(w): n for n, w in p.generators}
    assert set(defs) == {"x y x^-1", "y x y^-1"}
    a, c = defs["x y x^-1"], defs["y x y^-1"]
    assert {format_word(r) for r in p.relators} == {f"{a}^6", f"{c}^4", f"{a}^3 {c}^-2"}
    assert str(p).startswith("gp< ")


def test_finite_subgroup_order():
    p = tietze_simplify(compute_presentation(sg_of("x")))
    assert len(p.generators) == 1
    pres = GroupPresentation(p.names, p.relators)
    assert enumerate_group(pres).order == 4
    p = tietze_simplify(compute_presentation(sg_of("x y^2 x", "y x y x")))
    assert p.generators
    assert str(tietze_simplify(compute_presentation(sg_of()))) == "gp<  |  >"


def test_tietze_examples():
    p = SubgroupPresentation((("a", parse_word("x")), ("b", parse_word("y"))), (parse_word("b"),))
    q = tietze_simplify(p)
    assert q.names == ("a",) and q.relators == ()
    minimal = SubgroupPresentation((("a", parse_word("x")),), (parse_word("a^4"),))
    assert tietze_simplify(minimal) == minimal
    # free group: nothing to do
    h1 = tietze_simplify(compute_presentation(sg_of("x y")))
    assert [format_word(w) for _, w in h1.generators] == ["x y"] and h1.relators == ()


def test_presentation_invariants():
    rng = random.Random(9)
    for name in ("sl2z", "s3_z4", "klein", "z8_z4xs3"):
        am = load(name)
        for _ in range(15):
            sg = build_subgroup_graph(am, random_generators(rng, am.alphabet, 3, 6))
            p = compute_presentation(sg)
            g = sg.graph
            assert len(p.generators) == len(g.edges) - g.num_vertices + 1
            for _, w in p.generators:
                assert is_member(sg, w)
            for q in (p, tietze_simplify(p)):
                for r in q.relators:
                    assert equal_in_g(am, q.expand(r), ())
                for _, w in q.generators:
                    assert is_member(sg, w)
