import itertools

import pytest
from hypothesis import given, settings, strategies as st

from graphical_kit.elementary import Step, apply_step
from graphical_kit.graph import corolla, edge_unit
from graphical_kit.operad import (CyclicOperad, Op, OperadError, OperadMorphism, delete_composite,
                                  equality_operad, example_operads, identity_morphism,
                                  nerve, nerve_map, check_naturality, parity_operad,
                                  terminal_operad, to_terminal, validate_cyclic_operad,
                                  validate_morphism)
from graphical_kit.presheaf import (build_skeleton, satisfies_kan, satisfies_segal,
                                    validate_presheaf)

import oracles

KINDS = {"terminal": "terminal", "equality": "equality", "equality-2col": "equality",
         "parity": "parity"}
OPERADS = example_operads(4)
EQ = OPERADS[1]
TREES = build_skeleton(2, 4, True)


@pytest.mark.parametrize("O", OPERADS, ids=lambda O: O.name)
def test_example_operads_validate(O):
    assert validate_cyclic_operad(O) == []


@pytest.mark.parametrize("O", OPERADS, ids=lambda O: O.name)
def test_tables_agree_with_relational_model(O):
    assert oracles.relational_mismatches(O, KINDS[O.name]) == []


def test_units():
    for a in EQ.operations():
        if not a.profile:
            continue
        c = a.profile[-1]
        assert EQ.circ(a, 1, EQ.unit(c)) == a
        for i, ci in enumerate(a.profile):
            assert EQ.circ(EQ.unit(ci), i + 1, a) == a


def test_circ_errors():
    a = EQ.operations(("c", "c", "c"))[0]
    with pytest.raises(OperadError):
        EQ.circ(a, 4, a)
    two = equality_operad(3, ("a", "b"))
    x = two.operations(("a", "a"))[0]
    y = two.operations(("b", "b"))[0]
    with pytest.raises(OperadError):
        two.circ(x, 1, y)


def test_nested_composites_agree():
    ops = [a for a in EQ.operations() if len(a.profile) == 2]
    for a, b, c in itertools.product(ops, repeat=3):
        left = EQ.circ(EQ.circ(a, 1, b), 1, c)
        right = EQ.circ(a, 1, EQ.circ(b, 1, c))
        assert left == right


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(EQ.operations()), st.data())
def test_action_is_a_right_action(a, data):
    n = len(a.profile)
    s = tuple(data.draw(st.permutations(range(n))))
    t = tuple(data.draw(st.permutations(range(n))))
    assert EQ.sigma_act(tuple(range(n)), a) == a
    both = EQ.sigma_act(s, EQ.sigma_act(t, a))
    assert both == EQ.sigma_act(tuple(t[k] for k in s), a)
    with pytest.raises(OperadError):
        EQ.sigma_act(tuple(range(n + 1)), a)


def _perturbed(O):
    key = next(k for k, v in sorted(O.comp_table.items())
               if len(O.ops[k[3][:k[2]] + k[0][:-1] + k[3][k[2] + 1:]]) > 1 and len(k[0]) > 2)
    p, l, i, q, r = key
    out = q[:i] + p[:-1] + q[i + 1:]
    other = next(x for x in O.ops[out] if x != O.comp_table[key])
    comp = dict(O.comp_table)
    comp[key] = other
    return CyclicOperad(O.colours, O.ops, O.units, O.act_table, comp, O.max_arity, "perturbed")


def test_perturbation_is_detected():
    bad = _perturbed(EQ)
    report = validate_cyclic_operad(bad)
    assert report
    assert oracles.relational_mismatches(bad, "equality")


def test_json_round_trip():
    for O in OPERADS:
        back = CyclicOperad.from_json(O.to_json())
        assert back.to_json() == O.to_json()


def test_morphisms():
    T = terminal_operad(4)
    for O in OPERADS:
        assert validate_morphism(identity_morphism(O), O, O) == []
        assert validate_morphism(to_terminal(O, T), O, T) == []


def test_broken_morphism_is_named():
    f = identity_morphism(EQ)
    a = next(a for a in EQ.operations() if len(a.profile) == 3
             and EQ.sigma_act((1, 0, 2), a) != a)
    swapped = EQ.sigma_act((1, 0, 2), a)
    op_map = dict(f.op_map)
    op_map[a], op_map[swapped] = swapped, a
    report = validate_morphism(OperadMorphism(f.colour_map, op_map), EQ, EQ)
    assert report and any("action" in r or "composite" in r for r in report)


def test_terminal_nerve_is_singletons():
    X = nerve(terminal_operad(4), TREES)
    assert all(len(s) == 1 for s in X.sets)


@pytest.mark.parametrize("O", OPERADS, ids=lambda O: O.name)
def test_nerve_sizes(O):
    X = nerve(O, TREES)
    assert validate_presheaf(X) == []
    assert X.size(TREES.find_object(edge_unit())) == len(O.colours)
    for n in range(3):
        c = TREES.find_object(corolla(n))
        expected = sum(len(O.ops.get(p, ())) for p in itertools.product(O.colours, repeat=n + 1))
        assert X.size(c) == expected


@pytest.mark.parametrize("O", OPERADS, ids=lambda O: O.name)
def test_nerve_is_segal_and_strict_kan(O):
    X = nerve(O, TREES)
    assert satisfies_segal(X).ok
    assert satisfies_kan(X, strict=True).ok


def test_nerve_map_is_natural():
    T = terminal_operad(4)
    XT = nerve(T, TREES)
    for O in OPERADS:
        X = nerve(O, TREES)
        comps = nerve_map(to_terminal(O, T), O, T, TREES, X, XT)
        assert check_naturality(comps, X, XT) == []


def test_unit_insertion_then_face_is_identity():
    X = nerve(parity_operad(4), TREES)
    for g, G in enumerate(TREES.objects):
        for e in G.edges:
            sigma = apply_step(G, Step("degen", e.id))
            s = TREES.to_skeleton(sigma)
            if s is None:
                continue
            mid = sigma.source
            for piece in (f"{e.id}#1", f"{e.id}#2"):
                if piece not in mid.inner_edges() or len(mid.edges) < 2:
                    continue
                from graphical_kit.gmap import compose
                back = compose(sigma, apply_step(mid, Step("inner", piece)))
                f = TREES.to_skeleton(back)
                if f is not None:
                    assert X.actions[f] == tuple(range(X.size(g)))


def test_deleted_composite_breaks_both_checks():
    a = Op(("c", "c", "c"), "0.1.2")
    broken = delete_composite(EQ, a, a)
    assert validate_cyclic_operad(broken)
    sk = build_skeleton(3, 5, True)
    X = nerve(broken, sk, drop_undefined=True)
    assert validate_presheaf(X) == []
    assert not satisfies_segal(X).ok and not satisfies_kan(X).ok
