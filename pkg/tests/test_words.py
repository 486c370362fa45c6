import random

import pytest
from hypothesis import given, settings, strategies as st

from graphical_kit.elementary import Step, apply_step, codegeneracy, inner_coface
from graphical_kit.gmap import compose, enumerate_maps, identity, equal_up_to_source_iso
from graphical_kit.graph import Graph, P, V, corolla, enumerate_graphs
from graphical_kit.words import (RELATION_KINDS, ElementaryWord, WordError, composable_words,
                                 compose_word, decompose, normalize, relation_instances, run,
                                 verify_relation)

from test_graph import barbell, path3

SMALL = enumerate_graphs(2, 3)
WORDS = [w for g in enumerate_graphs(2, 2) for w in composable_words(g, 3)]
MAPS = [m for g in SMALL for h in SMALL for m in enumerate_maps(g, h)]


def test_empty_word_is_identity():
    g = barbell()
    assert compose_word(ElementaryWord(g)) == identity(g)


def test_single_inner_step():
    g = barbell(2, 1)
    assert compose_word(ElementaryWord(g, (Step("inner", "c"),))) == inner_coface(g, "c")


def test_degeneracy_then_contraction_is_identity():
    g = barbell()
    for piece in ("c#1", "c#2"):
        m = compose_word(ElementaryWord(g, (Step("degen", "c"), Step("inner", piece))))
        assert m.target == g and equal_up_to_source_iso(m, identity(g))


def test_disjoint_inner_faces_commute():
    g = path3()
    ab = run(g, [Step("inner", "a"), Step("inner", "b")])
    ba = run(g, [Step("inner", "b"), Step("inner", "a")])
    assert ab is not None and equal_up_to_source_iso(ab, ba)


def test_incomposable_word_raises():
    with pytest.raises(WordError):
        compose_word(ElementaryWord(barbell(), (Step("inner", "nope"),)))
    assert run(barbell(), [Step("snip", "c")]) is None


def test_instances_on_examples():
    kinds = {i.kind for i in relation_instances(corolla(3))}
    assert kinds and not kinds & {"R1", "R1'", "R3", "R4", "R9", "R11"}
    kinds = {i.kind for i in relation_instances(barbell())}
    assert "R1" not in kinds and {"R2", "R5", "R6", "R7"} <= kinds
    loop = Graph.build(["v"], [("l", V("v"), V("v")), ("m", V("v"), P("p"))])
    assert "R10" in {i.kind for i in relation_instances(loop)}
    two = Graph.build(["x", "y"], [("a", V("x"), V("y")), ("b", V("x"), V("y")),
                                   ("p", V("x"), P("p"))])
    assert "R9" in {i.kind for i in relation_instances(two)}


def test_relations_hold_on_small_graphs():
    seen = set()
    for g in SMALL:
        for inst in relation_instances(g):
            v = verify_relation(inst)
            assert v.status != "fail", (inst.describe(), v.certificate)
            seen.add(inst.kind)
    assert seen == set(RELATION_KINDS) - {"R1", "R3", "R11"}


def test_perturbed_relation_is_caught():
    g = path3()
    inst = next(i for i in relation_instances(g, ["R1"]))
    broken = type(inst)(inst.kind, inst.host, inst.data, inst.left, inst.left[:1])
    assert verify_relation(broken).status == "fail"


def test_annihilating_pair_normalizes_to_empty():
    g = barbell()
    w = ElementaryWord(g, (Step("degen", "c"), Step("inner", "c#1")))
    out = normalize(w)
    assert out.steps == () and compose_word(out) == compose_word(w)


def test_disjoint_pair_is_reordered():
    g = path3()
    w = ElementaryWord(g, (Step("degen", "l"), Step("inner", "a")))
    out = normalize(w)
    assert [s.kind for s in out.steps] == ["inner", "degen"]
    assert compose_word(out) == compose_word(w)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(WORDS))
def test_normalize_properties(w):
    out = normalize(w)
    assert out.is_standard()
    assert compose_word(out) == compose_word(w)
    assert normalize(out) == out
    if w.is_standard():
        assert out == w
    back = ElementaryWord.from_json(out.to_json())
    assert compose_word(back) == compose_word(out)


def test_decompose_examples():
    g = barbell(2, 1)
    assert decompose(identity(g)).steps == ()
    assert decompose(inner_coface(g, "c")).steps == (Step("inner", "c"),)
    assert len(decompose(codegeneracy(g, "c")).steps) == 1


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(MAPS))
def test_decompose_round_trip(m):
    w = decompose(m)
    assert w.is_standard()
    assert compose_word(w) == m
    degens = sum(s.kind == "degen" for s in w.steps)
    after = w.graphs()[len(w.steps) - degens]
    assert degens == len(w.derived_source.vertices) - len(after.vertices)


def test_decompose_random_three_vertex_maps():
    rng = random.Random(3)
    graphs = enumerate_graphs(3, 4)
    done = 0
    while done < 40:
        g, h = rng.choice(graphs), rng.choice(graphs)
        homs = enumerate_maps(g, h)
        if homs:
            m = rng.choice(homs)
            assert compose_word(decompose(m)) == m
            done += 1
