import pytest

from amalgraph.finite_groups import (
    CosetCapExceeded,
    coset_transversal,
    enumerate_group,
    is_central,
    is_malnormal,
    relative_cayley,
    todd_coxeter,
)
from amalgraph.words import GroupPresentation, parse_word

Z4 = GroupPresentation.parse(["x"], ["x^4"])
Z6 = GroupPresentation.parse(["y"], ["y^6"])
S3 = GroupPresentation.parse(["s", "t"], ["s^2", "t^2", "s t s t s t"])


def test_orders():
    assert enumerate_group(Z4).order == 4
    assert enumerate_group(Z6).order == 6
    assert enumerate_group(S3).order == 6
    assert enumerate_group(GroupPresentation.parse(["a", "b"], ["a^3", "b^2", "a b a b"])).order == 6


def test_cap():
    with pytest.raises(CosetCapExceeded):
        todd_coxeter(GroupPresentation.parse(["x"], []), max_cosets=1000)


def test_relators_act_trivially_everywhere():
    for p in (Z4, Z6, S3):
        m = enumerate_group(p)
        for e in range(m.order):
            for r in p.relators:
                assert m.eval_word(r, e) == e
        for letter in m.table.letters:
            assert sorted(m.mult_table[e][letter] for e in range(m.order)) == list(range(m.order))


def test_eval_word():
    m = enumerate_group(Z4)
    assert m.eval_word(parse_word("x^4")) == m.identity
    assert m.eval_word(()) == m.identity
    m6 = enumerate_group(Z6)
    assert m6.eval_word(parse_word("y^3 y^3")) == m6.identity


def test_relative_cayley():
    z4, z6 = enumerate_group(Z4), enumerate_group(Z6)
    assert relative_cayley(z4, [parse_word("x^2")]).index == 2
    assert relative_cayley(z6, [parse_word("y^3")]).index == 3
    t = relative_cayley(z4, [])
    assert t.index == 4
    assert t.to_graph().is_saturated(["x"])
    s3 = enumerate_group(S3)
    for sub in ([], ["s"], ["s t"], ["s", "t"]):
        ws = [parse_word(w) for w in sub]
        table = relative_cayley(s3, ws)
        size = len(s3.subgroup_closure(s3.eval_word(w) for w in ws))
        assert table.index * size == 6
        for w in ws:
            assert table.read(0, w) == 0


def test_transversals():
    z4, z6 = enumerate_group(Z4), enumerate_group(Z6)
    sub = z4.subgroup_closure([z4.eval_word(parse_word("x^2"))])
    assert coset_transversal(z4, sub) == [(), parse_word("x")]
    sub6 = z6.subgroup_closure([z6.eval_word(parse_word("y^3"))])
    assert coset_transversal(z6, sub6) == [(), parse_word("y"), parse_word("y^2")]
    assert coset_transversal(z6, range(6)) == [()]
    s3 = enumerate_group(S3)
    sub = s3.subgroup_closure([s3.eval_word(parse_word("s"))])
    reps = coset_transversal(s3, sub)
    assert len(reps) == 3
    cosets = {frozenset(s3.mul(a, s3.eval_word(r)) for a in sub) for r in reps}
    assert len(cosets) == 3


def test_central_and_malnormal():
    s3 = enumerate_group(S3)
    sub = s3.subgroup_closure([s3.eval_word(parse_word("s"))])
    assert is_malnormal(s3, sub)
    assert not is_central(s3, sub)
    rot = s3.subgroup_closure([s3.eval_word(parse_word("s t"))])
    assert not is_malnormal(s3, rot)
    z4 = enumerate_group(Z4)
    assert is_central(z4, {0, z4.eval_word(parse_word("x^2"))})
    assert is_malnormal(z4, {0})


def test_table_exports():
    t = relative_cayley(enumerate_group(Z4), [parse_word("x^2")])
    assert t.to_text() == "coset x\n0 1\n1 0\n"
    assert 'label="x"' in t.to_dot()


def test_amalgam_enumeration_against_known_index():
    sl2z = GroupPresentation.parse(["x", "y"], ["x^4", "y^6", "x^2 y^-3"])
    assert todd_coxeter(sl2z, [parse_word("x"), parse_word("y^2")]).index == 1
    assert todd_coxeter(sl2z, [parse_word("x y^2 x"), parse_word("y x y x")]).index == 2
