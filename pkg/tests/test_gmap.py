import random

import pytest
from hypothesis import given, settings, strategies as st

from graphical_kit.elementary import available_steps, apply_step, inner_coface, outer_coface
from graphical_kit.gmap import (Embedding, GraphicalMap, MapError, as_substitutions_then_inclusion,
                                check_graphical_map, compose, enumerate_maps, equal_maps,
                                graph_substitute, identity, is_morphism, substitution_map)
from graphical_kit.graph import Graph, P, V, corolla, edge_unit, enumerate_graphs, isomorphism

import oracles
from test_graph import barbell

GRAPHS = enumerate_graphs(2, 3)
HOMS = [m for g in GRAPHS for h in GRAPHS for m in enumerate_maps(g, h)]


def _key(m):
    return (tuple(sorted(m.e0.items())),
            tuple((v, tuple(sorted(e.vertices)), tuple(sorted(e.edges)))
                  for v, e in sorted(m.e1.items())))


def _is_bijective(m):
    verts = [w for _, e in m.vertex_map for w in e.vertices]
    return (len(set(m.e0.values())) == len(m.e0) == len(m.target.edges)
            and sorted(verts) == sorted(m.target.vertices)
            and all(len(e.vertices) == 1 and not e.edges for _, e in m.vertex_map))


@pytest.mark.parametrize("n", range(5))
def test_eta_into_corolla(n):
    assert len(enumerate_maps(edge_unit(), corolla(n))) == n + 1


def test_small_hom_sets():
    assert len(enumerate_maps(edge_unit(), edge_unit())) == 1
    assert enumerate_maps(corolla(2), edge_unit()) == ()
    assert len(enumerate_maps(corolla(1), edge_unit())) == 1


def test_identity_valid_everywhere():
    for g in enumerate_graphs(3, 4):
        assert not check_graphical_map(identity(g))
    eta = identity(edge_unit())
    assert not eta.e1 and eta.e0 == {"e": "e"}


def test_inner_coface_is_valid():
    assert not check_graphical_map(inner_coface(barbell(2, 3), "c"))


def test_validity_detects_overlap_and_bad_border():
    g = barbell()
    m = identity(g)
    overlap = GraphicalMap.make(g, g, m.e0, {"x": Embedding.corolla("x"), "y": Embedding.corolla("x")})
    report = check_graphical_map(overlap)
    assert report and "vertex-count" in report[0]
    bad = dict(m.e0)
    bad["a0"] = "b0"
    report = check_graphical_map(GraphicalMap.make(g, g, bad, dict(m.e1)))
    assert any("border" in r and "'x'" in r for r in report)


def test_compose_rejects_non_composable():
    with pytest.raises(MapError):
        compose(identity(corolla(1)), identity(corolla(2)))


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(HOMS))
def test_units_and_validity(m):
    assert compose(m, identity(m.source)) == m
    assert compose(identity(m.target), m) == m
    assert not check_graphical_map(m)
    assert equal_maps(m, m)
    assert GraphicalMap.from_json(m.to_json()) == m


def test_composition_associative_on_random_triples():
    rng = random.Random(7)
    by_source = {}
    for m in HOMS:
        by_source.setdefault(m.source, []).append(m)
    for _ in range(400):
        f = rng.choice(HOMS)
        g = rng.choice(by_source[f.target])
        h = rng.choice(by_source[g.target])
        gf, hg = compose(g, f), compose(h, g)
        assert compose(h, gf) == compose(hg, f)
        assert not check_graphical_map(gf)
        assert is_morphism(gf)


def test_tree_hom_sets_match_brute_force():
    trees = [g for g in enumerate_graphs(2, 4) if g.is_tree()]
    for g in trees:
        for h in trees:
            assert {_key(m) for m in enumerate_maps(g, h)} == oracles.valid_pairs(g, h)


def test_substitute_corolla_is_identity_up_to_iso():
    g = barbell(2, 1)
    halves = [e for e, _ in g.flags("x")]
    c = Graph.build(["z"], [(f"h{i}", V("z"), P(f"h{i}")) for i in range(len(halves))])
    out = graph_substitute(g, "x", c, {e: f"h{i}" for i, e in enumerate(halves)})
    assert isomorphism(out, g) is not None


def test_substitute_barbell_undoes_contraction():
    g = barbell(2, 2)
    m = inner_coface(g, "c")
    (v,) = m.source.vertices
    subs, inc = as_substitutions_then_inclusion(m)
    assert len(subs) == 1 and subs[0].vertex == v and len(subs[0].graph.vertices) == 2
    assert _is_bijective(inc)
    out = graph_substitute(m.source, v, subs[0].graph, dict(subs[0].matching))
    assert isomorphism(out, g) is not None


def test_two_valent_insertion_keeps_counts():
    g = barbell(1, 1)
    two = Graph.build(["z"], [("i", V("z"), P("i")), ("j", V("z"), P("j"))])
    halves = [e for e, _ in g.flags("x")]
    out = graph_substitute(g, "x", two, dict(zip(halves, ["i", "j"])))
    assert (len(out.vertices), len(out.edges)) == (len(g.vertices), len(g.edges))


def test_substitute_arity_mismatch():
    with pytest.raises(MapError):
        graph_substitute(barbell(1, 1), "x", corolla(3), {"a0": "l0", "c": "l1"})


def test_factorisation_examples():
    assert as_substitutions_then_inclusion(identity(barbell())) == ([], identity(barbell()))
    subs, inc = as_substitutions_then_inclusion(outer_coface(barbell(), "x"))
    assert subs == [] and len(inc.target.vertices) == len(inc.source.vertices) + 1


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(HOMS))
def test_factorisation_round_trip(m):
    subs, inc = as_substitutions_then_inclusion(m)
    assert compose(inc, substitution_map(m.source, subs)) == m
    assert all(len(e.vertices) == 1 and not e.edges for _, e in inc.vertex_map)


def test_factorisation_rejects_invalid_map():
    g = barbell()
    bad = GraphicalMap.make(g, g, identity(g).e0, {"x": Embedding.corolla("x"),
                                                   "y": Embedding.corolla("x")})
    with pytest.raises(MapError):
        as_substitutions_then_inclusion(bad)
