import pytest
from hypothesis import given, settings, strategies as st

from graphical_kit.graph import V, corolla, edge_unit
from graphical_kit.presheaf import (GraphicalSet, PresheafError, build_skeleton, corruptions,
                                    delete_upward, duplicate_upward, fillers,
                                    generated_subpresheaf, hom_from_sub, inner_horn,
                                    representable, satisfies_kan, satisfies_segal, segal_core,
                                    terminal, validate_presheaf)

TREES = build_skeleton(2, 4, True)
FULL = build_skeleton(2, 3, False)


def _obj(sk, g):
    return sk.find_object(g)


def test_small_tree_skeleton_contents():
    sk = build_skeleton(1, 3, True)
    for g in (edge_unit(), corolla(0), corolla(1), corolla(2)):
        assert _obj(sk, g) is not None
    assert len(sk.hom[(_obj(sk, edge_unit()), _obj(sk, corolla(2)))]) == 3


@pytest.mark.parametrize("sk", [TREES, FULL], ids=["trees", "full"])
def test_composition_table_is_a_category(sk):
    assert sk.verify() == []


def test_budget_is_enforced():
    with pytest.raises(PresheafError):
        build_skeleton(4, 5)


@pytest.mark.parametrize("sk", [TREES, FULL], ids=["trees", "full"])
def test_representables_and_terminal_are_valid(sk):
    assert validate_presheaf(terminal(sk)) == []
    for g in range(len(sk)):
        assert validate_presheaf(representable(sk, g)) == []


def test_representable_sizes():
    eta = _obj(FULL, edge_unit())
    for n in range(3):
        c = _obj(FULL, corolla(n))
        assert representable(FULL, c).size(eta) == n + 1
    assert representable(FULL, eta).size(eta) == 1


def test_corrupted_action_is_named():
    X = representable(TREES, _obj(TREES, corolla(2)))
    f = next(f for f, t in X.actions.items() if len(t) > 1 and len(set(t)) > 1)
    table = list(X.actions[f])
    table[0], table[1] = table[1], table[0]
    bad = GraphicalSet(TREES, X.sets, {**X.actions, f: tuple(table)}, "bad")
    report = validate_presheaf(bad)
    assert report and any(TREES.morphism_key(f) in r for r in report)


def test_json_round_trip():
    X = representable(TREES, 3)
    Y = GraphicalSet.from_json(X.to_json())
    assert Y.sets == [[str(x) for x in xs] for xs in X.sets]
    assert Y.actions == X.actions


def test_segal_core_of_corolla_is_everything():
    c = _obj(TREES, corolla(2))
    core = segal_core(TREES, c)
    for h in range(len(TREES)):
        assert core.elements[h] == frozenset(TREES.hom[(h, c)])
    with pytest.raises(PresheafError):
        segal_core(TREES, _obj(TREES, edge_unit()))


def _two_vertex_tree(sk):
    return next(i for i, g in enumerate(sk.objects) if len(g.vertices) == 2 and g.legs())


def test_horns_and_cores_on_a_barbell():
    g = _two_vertex_tree(TREES)
    G = TREES.objects[g]
    core = segal_core(TREES, g)
    (e,) = G.inner_edges()
    horn = inner_horn(TREES, g, e)
    assert TREES.identities[g] not in core.elements[g]
    assert TREES.identities[g] not in horn.elements[g]
    for h in range(len(TREES)):
        assert core.elements[h] <= horn.elements[h] <= frozenset(TREES.hom[(h, g)])
    eta = _obj(TREES, edge_unit())
    assert len(core.elements[eta]) == len(G.edges)
    with pytest.raises(PresheafError):
        inner_horn(TREES, g, G.legs()[0])


@pytest.mark.parametrize("sk", [TREES, FULL], ids=["trees", "full"])
def test_yoneda_counts(sk):
    for X in (terminal(sk), representable(sk, len(sk) - 1)):
        for g in range(len(sk)):
            whole = generated_subpresheaf(sk, g, [sk.identities[g]])
            assert len(hom_from_sub(whole, X)) == X.size(g)


def test_hom_into_terminal_and_from_empty():
    X = terminal(TREES)
    g = _two_vertex_tree(TREES)
    assert len(hom_from_sub(segal_core(TREES, g), X)) == 1
    empty = generated_subpresheaf(TREES, g, [])
    assert len(hom_from_sub(empty, representable(TREES, 2))) == 1


def test_terminal_passes_both():
    X = terminal(TREES)
    assert satisfies_segal(X).ok and satisfies_kan(X).ok
    g = _two_vertex_tree(TREES)
    (e,) = TREES.objects[g].inner_edges()
    A = inner_horn(TREES, g, e)
    (h,) = hom_from_sub(A, X)
    assert fillers(X, g, e, h) == [0]


def _top_object(sk):
    """An object with vertices that maps to no other object of the skeleton."""
    return next(g for g in range(len(sk)) if sk.objects[g].vertices
                and all(not sk.hom[(g, h)] for h in range(len(sk)) if h != g))


def test_duplicated_element_breaks_segal_at_that_object():
    g = _top_object(TREES)
    X = duplicate_upward(terminal(TREES), g, 0)
    assert validate_presheaf(X) == [] and X.size(g) == 2
    seg = satisfies_segal(X)
    assert not seg.ok and {f["object"] for f in seg.failures} == {TREES.keys[g]}
    assert not satisfies_kan(X).ok


def test_deleted_element_breaks_both():
    g = _top_object(TREES)
    X = delete_upward(terminal(TREES), g, 0)
    assert validate_presheaf(X) == [] and X.size(g) == 0
    assert not satisfies_segal(X).ok and not satisfies_kan(X).ok


def test_verdicts_agree_on_tree_corpus():
    corpus = [terminal(TREES)] + [representable(TREES, g) for g in range(len(TREES))]
    corpus += list(corruptions(terminal(TREES))) + list(corruptions(representable(TREES, 4), 6))
    for X in corpus:
        assert validate_presheaf(X) == []
        assert satisfies_segal(X).ok == satisfies_kan(X).ok, X.name


def test_full_skeleton_loop_vertex_divergence():
    # Segal sees the one-vertex loop object, Kan has no inner edge there.
    X = representable(FULL, _obj(FULL, edge_unit()))
    seg, kan = satisfies_segal(X), satisfies_kan(X)
    assert kan.ok and not seg.ok
    loop = FULL.find_object(FULL.objects[0].__class__.build(["v"], [("l", V("v"), V("v"))]))
    assert FULL.keys[loop] in {f["object"] for f in seg.failures}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(TREES) - 1), st.integers(0, 10))
def test_corruptions_stay_functorial(g, k):
    X = representable(TREES, g)
    variants = list(corruptions(X))
    Y = variants[k % len(variants)]
    assert validate_presheaf(Y) == []
