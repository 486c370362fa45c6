import pytest
from hypothesis import given, settings, strategies as st

from graphical_kit.elementary import (ElementaryError, Step, apply_step, available_steps,
                                      codegeneracy, cosnip, inner_coface, merge_name,
                                      outer_coface)
from graphical_kit.gmap import check_graphical_map, equal_up_to_source_iso
from graphical_kit.graph import (EdgeClass, Graph, P, V, corolla, edge_unit, enumerate_graphs,
                                 isomorphism)

from test_graph import barbell, path3

GRAPHS = enumerate_graphs(3, 4)
PAIRS = [(g, s) for g in GRAPHS for s in available_steps(g)]


def test_merge_name_is_associative():
    assert merge_name(merge_name("x", "y"), "z") == merge_name("x", merge_name("y", "z"))
    assert merge_name("y", "x") == "x*y"


def test_inner_coface_valences_add():
    g = barbell(2, 3)
    m = inner_coface(g, "c")
    assert m.target == g
    assert m.source.is_corolla() and len(m.source.legs()) == 3 + 4 - 2
    assert not check_graphical_map(m)
    (v,) = m.source.vertices
    assert m.e1[v].vertices == frozenset({"x", "y"}) and m.e1[v].edges == {"c"}


def test_contracting_one_parallel_edge_leaves_a_loop():
    g = Graph.build(["x", "y"], [("a", V("x"), V("y")), ("b", V("x"), V("y"))])
    src = inner_coface(g, "a").source
    assert src.loops() == ["b"] and len(src.vertices) == 1


def test_triangle_contraction_gives_double_edge():
    g = Graph.build(["x", "y", "z"], [("a", V("x"), V("y")), ("b", V("y"), V("z")),
                                      ("c", V("z"), V("x"))])
    for e in "abc":
        src = inner_coface(g, e).source
        assert len(src.vertices) == 2 and len(src.inner_edges()) == 2
        assert src.betti() == g.betti() == 1


def test_inner_coface_rejects_loops_and_legs():
    loop = Graph.build(["v"], [("l", V("v"), V("v")), ("m", V("v"), P("p"))])
    with pytest.raises(ElementaryError):
        inner_coface(loop, "l")
    with pytest.raises(ElementaryError):
        inner_coface(corolla(2), "l0")


def test_outer_coface_frees_connecting_edge():
    g = barbell(1, 2)
    m = outer_coface(g, "x")
    assert m.source.vertices == ("y",)
    assert m.source.classify("c") is EdgeClass.LEG
    assert not check_graphical_map(m)


def test_barbell_reaches_eta_in_two_outer_steps():
    g = Graph.build(["x", "y"], [("c", V("x"), V("y"))])
    first = outer_coface(g, "x").source
    second = outer_coface(first, "y", keep="c").source
    assert second.is_unit


def test_outer_coface_on_path_end_and_middle():
    assert len(outer_coface(path3(), "w").source.vertices) == 2
    with pytest.raises(ElementaryError):
        outer_coface(path3(), "v")
    with pytest.raises(ElementaryError):
        outer_coface(corolla(2), "v")  # last vertex needs a kept leg


def test_cosnip_loop():
    g = Graph.build(["v"], [("l", V("v"), V("v")), ("m", V("v"), P("p"))])
    m = cosnip(g, "l")
    assert isomorphism(m.source, corolla(2)) is not None
    assert m.e0["l#1"] == m.e0["l#2"] == "l"
    assert m.source.betti() == g.betti() - 1


def test_two_cosnips_commute():
    g = Graph.build(["v"], [("k", V("v"), V("v")), ("l", V("v"), V("v"))])
    a = cosnip(g, "k")
    b = cosnip(g, "l")
    ab = cosnip(a.source, "l").source
    ba = cosnip(b.source, "k").source
    assert isomorphism(ab, ba) is not None


def test_codegeneracy_cases():
    m = codegeneracy(edge_unit(), "e")
    assert m.source.is_corolla() and len(m.source.legs()) == 2
    loop = Graph.build(["v"], [("l", V("v"), V("v"))])
    src = codegeneracy(loop, "l").source
    assert len(src.vertices) == 2 and len(src.inner_edges()) == 2 and not src.loops()


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(PAIRS))
def test_step_invariants(pair):
    g, step = pair
    m = apply_step(g, step)
    src = m.source
    assert m.target == g and not check_graphical_map(m)
    dv, de = len(g.vertices) - len(src.vertices), len(g.edges) - len(src.edges)
    if step.kind == "inner":
        assert (dv, de) == (1, 1) and sorted(src.boundary) == sorted(g.boundary)
    elif step.kind == "outer":
        assert dv == 1
    elif step.kind == "snip":
        assert (dv, de) == (0, -1) and src.betti() == g.betti() - 1
    else:
        assert (dv, de) == (-1, -1) and src.betti() == g.betti()
        assert sorted(src.boundary) == sorted(g.boundary)
    assert apply_step(g, step) == m  # deterministic


def test_every_step_round_trips_json():
    for g, s in PAIRS[:200]:
        assert Step.from_json(s.to_json()) == s


def test_unknown_kind_rejected():
    with pytest.raises(ElementaryError):
        Step.from_json({"kind": "bogus", "datum": "e"})


def test_inner_faces_commute_up_to_source_iso():
    g = path3()
    ab = apply_step(g, Step("inner", "a"))
    ab_b = apply_step(ab.source, Step("inner", "b"))
    ba = apply_step(g, Step("inner", "b"))
    ba_a = apply_step(ba.source, Step("inner", "a"))
    from graphical_kit.gmap import compose
    assert equal_up_to_source_iso(compose(ab, ab_b), compose(ba, ba_a))
