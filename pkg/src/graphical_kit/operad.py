"""Finite coloured cyclic operads and their nerves on the tree skeleton.

Conventions (all slots 0-based internally):

* an operation is ``Op(profile, label)``; ``profile`` is a tuple of colours;
* ``act(sigma, a)`` moves slot ``sigma[k]`` of ``a`` to slot ``k``, so
  ``act(t, act(s, a)) == act(s o t, a)`` with ``(s o t)[k] = s[t[k]]``;
* ``circ(a, i, b)`` glues the last slot of ``a`` (m slots) to slot ``i`` of
  ``b`` (n slots, 1-based ``i`` in the public API) and lays out the result as
  ``b[:i-1] + a[:m-1] + b[i:]``.

Tables are stored in full up to ``max_arity`` slots; composites that would
exceed it are simply absent.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .graph import Graph
from .presheaf import GraphicalSet, PresheafError, Skeleton

Profile = Tuple[str, ...]


class OperadError(ValueError):
    pass


class Op(NamedTuple):
    profile: Profile
    label: str

    def __str__(self) -> str:
        return f"{self.label}:({','.join(self.profile)})"


def permute(sigma: Sequence[int], xs: Sequence) -> tuple:
    return tuple(xs[s] for s in sigma)


def _perms(n: int):
    return itertools.permutations(range(n))


def _generators(n: int) -> List[Tuple[int, ...]]:
    """Identity and the adjacent transpositions of ``n`` slots."""
    out = [tuple(range(n))]
    for k in range(n - 1):
        s = list(range(n))
        s[k], s[k + 1] = s[k + 1], s[k]
        out.append(tuple(s))
    return out


def circ_layout(m: int, i: int, n: int) -> List[Tuple[str, int]]:
    """Slot tokens of ``a o_i b`` (0-based ``i``): ``('a', k)`` or ``('b', k)``."""
    return ([("b", k) for k in range(i)] + [("a", k) for k in range(m - 1)]
            + [("b", k) for k in range(i + 1, n)])


@dataclass
class CyclicOperad:
    colours: Tuple[str, ...]
    ops: Dict[Profile, Tuple[str, ...]]
    units: Dict[str, str]
    act_table: Dict[Tuple[Tuple[int, ...], Profile, str], str]
    comp_table: Dict[Tuple[Profile, str, int, Profile, str], str]
    max_arity: int
    name: str = ""

    def operations(self, profile: Optional[Profile] = None) -> List[Op]:
        if profile is not None:
            return [Op(profile, l) for l in self.ops.get(tuple(profile), ())]
        return [Op(p, l) for p, ls in sorted(self.ops.items()) for l in ls]

    def unit(self, c: str) -> Op:
        return Op((c, c), self.units[c])

    def circ(self, a: Op, i: int, b: Op) -> Op:
        """``a o_i b`` with 1-based ``i``."""
        return self._circ(a, i - 1, b)

    def _circ(self, a: Op, i: int, b: Op) -> Op:
        m, n = len(a.profile), len(b.profile)
        if not 0 <= i < n or m == 0:
            raise OperadError(f"index {i + 1} out of range")
        if a.profile[-1] != b.profile[i]:
            raise OperadError(f"colour mismatch: {a.profile[-1]!r} vs {b.profile[i]!r}")
        prof = b.profile[:i] + a.profile[:-1] + b.profile[i + 1:]
        try:
            return Op(prof, self.comp_table[(a.profile, a.label, i, b.profile, b.label)])
        except KeyError:
            raise OperadError(f"composite {a} o_{i + 1} {b} is not stored") from None

    def sigma_act(self, sigma: Sequence[int], a: Op) -> Op:
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(len(a.profile))):
            raise OperadError("permutation size does not match the profile")
        try:
            return Op(permute(sigma, a.profile), self.act_table[(sigma, a.profile, a.label)])
        except KeyError:
            raise OperadError(f"action on {a} is not stored") from None

    # -- serialisation --

    def to_json(self) -> dict:
        pk = _profile_key
        return {
            "name": self.name,
            "colours": list(self.colours),
            "max_arity": self.max_arity,
            "ops": {pk(p): list(ls) for p, ls in sorted(self.ops.items())},
            "units": dict(self.units),
            # [profile, label, permutation, result] and
            # [profile, label, 1-based slot, profile, label, result]
            "act": [[list(p), l, list(s), v] for (s, p, l), v in sorted(self.act_table.items())],
            "comp": [[list(p), l, i + 1, list(q), k, v]
                     for (p, l, i, q, k), v in sorted(self.comp_table.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CyclicOperad":
        pp = _parse_profile
        ops = {pp(k): tuple(v) for k, v in data["ops"].items()}
        try:
            act = {(tuple(s), tuple(p), l): v for p, l, s, v in data.get("act", [])}
            comp = {(tuple(p), l, int(i) - 1, tuple(q), k): v
                    for p, l, i, q, k, v in data.get("comp", [])}
        except (TypeError, ValueError) as exc:
            raise OperadError(f"malformed act/comp entry: {exc}") from None
        arity = data.get("max_arity", max((len(p) for p in ops), default=0))
        return cls(tuple(data["colours"]), ops, dict(data["units"]), act, comp, arity,
                   data.get("name", ""))


def _profile_key(p: Profile) -> str:
    return "(" + ",".join(p) + ")"


def _parse_profile(s: str) -> Profile:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise OperadError(f"bad profile {s!r}")
    body = s[1:-1].strip()
    return tuple(x.strip() for x in body.split(",")) if body else ()


def dumps(O: CyclicOperad) -> str:
    return json.dumps(O.to_json(), sort_keys=True)


# -- construction from rules -------------------------------------------------

def tabulate(colours: Sequence[str], ops_of: Callable[[Profile], Iterable[str]],
             unit_of: Callable[[str], str],
             circ_of: Callable[[Op, int, Op], str],
             act_of: Callable[[Tuple[int, ...], Op], str],
             max_arity: int, name: str = "", min_arity: int = 0) -> CyclicOperad:
    """Store an operad given by rules, for every profile with at most ``max_arity`` slots."""
    colours = tuple(colours)
    ops: Dict[Profile, Tuple[str, ...]] = {}
    for n in range(min_arity, max_arity + 1):
        for prof in itertools.product(colours, repeat=n):
            ls = tuple(sorted(set(ops_of(prof))))
            if ls:
                ops[prof] = ls
    act = {}
    for prof, ls in ops.items():
        for s in _perms(len(prof)):
            for l in ls:
                act[(s, prof, l)] = act_of(s, Op(prof, l))
    comp = {}
    for p, ls in ops.items():
        m = len(p)
        if m == 0:
            continue
        for q, ks in ops.items():
            n = len(q)
            if m + n - 2 > max_arity or m + n - 2 < min_arity:
                continue
            for i in range(n):
                if q[i] != p[-1]:
                    continue
                for l in ls:
                    for k in ks:
                        comp[(p, l, i, q, k)] = circ_of(Op(p, l), i, Op(q, k))
    return CyclicOperad(colours, ops, {c: unit_of(c) for c in colours}, act, comp,
                        max_arity, name)


def terminal_operad(max_arity: int = 5, colours: Sequence[str] = ("c",)) -> CyclicOperad:
    """One operation in every profile."""
    return tabulate(colours, lambda p: ["*"], lambda c: "*", lambda a, i, b: "*",
                    lambda s, a: "*", max_arity, "terminal")


# Partitions of slot positions, written as "0.1|2" (blocks sorted, '.' inside).

def _encode(blocks) -> str:
    bs = sorted(tuple(sorted(b)) for b in blocks if b)
    return "|".join(".".join(map(str, b)) for b in bs) or "-"


def _decode(label: str) -> List[List[int]]:
    if label == "-":
        return []
    return [[int(x) for x in b.split(".")] for b in label.split("|")]


def _set_partitions(items: List[int]):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [[head] + part[k]] + part[k + 1:]
        yield [[head]] + part


def _partition_circ(a: Op, i: int, b: Op) -> str:
    m, n = len(a.profile), len(b.profile)
    layout = circ_layout(m, i, n)
    where = {tok: k for k, tok in enumerate(layout)}
    # union-find over tokens, glued slots identified
    parent: Dict[Tuple[str, int], Tuple[str, int]] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for tag, op in (("a", a), ("b", b)):
        for block in _decode(op.label):
            for x in block[1:]:
                union((tag, block[0]), (tag, x))
    union(("a", m - 1), ("b", i))
    blocks: Dict = {}
    for tok in list(where):
        blocks.setdefault(find(tok), []).append(where[tok])
    return _encode(blocks.values())


def _partition_act(s: Tuple[int, ...], a: Op) -> str:
    inv = {old: new for new, old in enumerate(s)}
    return _encode([[inv[x] for x in b] for b in _decode(a.label)])


def equality_operad(max_arity: int = 5, colours: Sequence[str] = ("c",),
                    monochromatic: bool = True, name: str = "") -> CyclicOperad:
    """Equality patterns on a two-element set.

    An operation on ``n`` slots is a partition of the slots; it stands for the
    relation on ``{0,1}^n`` of tuples constant on each block.  Gluing two slots
    and forgetting them is relational composition, so this is a sub-operad of
    the cyclic endomorphism operad of ``{0,1}`` in relations.  With several
    colours only monochromatic blocks are allowed.
    """
    def ops_of(prof):
        for part in _set_partitions(list(range(len(prof)))):
            if not monochromatic or all(len({prof[x] for x in b}) == 1 for b in part):
                yield _encode(part)

    return tabulate(colours, ops_of, lambda c: "0.1", _partition_circ, _partition_act,
                    max_arity, name or ("equality" if len(colours) == 1 else "equality-2col"))


def parity_operad(max_arity: int = 5) -> CyclicOperad:
    """The commutative monoid Z/2 as a one-colour cyclic operad."""
    return tabulate(("c",), lambda p: ["0", "1"], lambda c: "0",
                    lambda a, i, b: str((int(a.label) + int(b.label)) % 2),
                    lambda s, a: a.label, max_arity, "parity")


def example_operads(max_arity: int = 5) -> List[CyclicOperad]:
    return [terminal_operad(max_arity), equality_operad(max_arity),
            equality_operad(max_arity, ("a", "b")), parity_operad(max_arity)]


# -- validation ----------------------------------------------------------------

def _reorder(target: List, source: List) -> Tuple[int, ...]:
    """``sigma`` with ``target[k] == source[sigma[k]]``."""
    pos = {tok: k for k, tok in enumerate(source)}
    return tuple(pos[tok] for tok in target)


def _move_last(m: int, a: int) -> Tuple[int, ...]:
    return tuple([k for k in range(m) if k != a] + [a])


def validate_cyclic_operad(O: CyclicOperad, limit: int = 20) -> List[str]:
    """Exhaustive check of the action, unit, associativity and equivariance laws.

    Laws quantified over permutations are checked on the identity and the
    adjacent transpositions; together with the right-action law (checked for
    every permutation against those generators) this covers all of them.
    """
    report: List[str] = []

    def fail(msg):
        if len(report) < limit:
            report.append(msg)

    def try_(fn):
        try:
            return fn()
        except OperadError:
            return None

    ops = O.operations()
    for c in O.colours:
        if O.units.get(c) not in O.ops.get((c, c), ()):
            fail(f"missing unit for colour {c!r}")
    for a in ops:
        n = len(a.profile)
        if n > O.max_arity:
            continue
        ident = tuple(range(n))
        if try_(lambda: O.sigma_act(ident, a)) != a:
            fail(f"identity permutation moves {a}")
        for s in _perms(n):
            sa = try_(lambda: O.sigma_act(s, a))
            if sa is None or sa.label not in O.ops.get(sa.profile, ()):
                fail(f"action of {s} on {a} is missing")
                continue
            for t in _generators(n):
                lhs = try_(lambda: O.sigma_act(t, sa))
                rhs = try_(lambda: O.sigma_act(permute(t, s), a))
                if lhs != rhs:
                    fail(f"action is not a right action at {a}, {s}, {t}")
                    break
    if report:
        return report
    # units
    for a in ops:
        if not a.profile:
            continue
        u = O.unit(a.profile[-1])
        if try_(lambda: O._circ(a, 0, u)) != a:
            fail(f"right unit law fails for {a}")
        for i, c in enumerate(a.profile):
            if try_(lambda: O._circ(O.unit(c), i, a)) != a:
                fail(f"left unit law fails for {a} at slot {i + 1}")
    by_len: Dict[int, List[Op]] = {}
    for a in ops:
        by_len.setdefault(len(a.profile), []).append(a)

    def fits(*ns):
        return sum(ns) - 2 * (len(ns) - 1) <= O.max_arity

    lengths = sorted(by_len)

    def partners(*ns):
        """Operations whose arity keeps every partial composite within bounds."""
        for p in lengths:
            if p and all(fits(n, p) for n in ns) and fits(*ns, p):
                yield from by_len[p]

    # associativity: sequential and parallel
    for a in ops:
        m = len(a.profile)
        if m == 0:
            continue
        for b in partners(m):
            n = len(b.profile)
            for i in range(n - 1):
                if a.profile[-1] != b.profile[i]:
                    continue
                for g in partners(n):
                    p = len(g.profile)
                    if not fits(m, n, p):
                        continue
                    for j in range(p):
                        if b.profile[-1] != g.profile[j]:
                            continue
                        lhs = try_(lambda: O._circ(O._circ(a, i, b), j, g))
                        rhs = try_(lambda: O._circ(a, j + i, O._circ(b, j, g)))
                        if lhs is None or lhs != rhs:
                            fail(f"associativity fails for ({a} o_{i + 1} {b}) o_{j + 1} {g}")
            for a2 in partners(n):
                m2 = len(a2.profile)
                if not fits(m, n, m2):
                    continue
                for i in range(n):
                    if a.profile[-1] != b.profile[i]:
                        continue
                    for k in range(i + 1, n):
                        if a2.profile[-1] != b.profile[k]:
                            continue
                        lhs = try_(lambda: O._circ(a, i, O._circ(a2, k, b)))
                        rhs = try_(lambda: O._circ(a2, k + m - 2, O._circ(a, i, b)))
                        if lhs is None or lhs != rhs:
                            fail(f"parallel associativity fails for {a}, {a2} into {b} "
                                 f"at slots {i + 1}, {k + 1}")
    # equivariance in both arguments
    for a in ops:
        m = len(a.profile)
        if m == 0:
            continue
        for b in partners(m):
            n = len(b.profile)
            for i in range(n):
                if a.profile[-1] != b.profile[i]:
                    continue
                base = try_(lambda: O._circ(a, i, b))
                if base is None:
                    fail(f"composite {a} o_{i + 1} {b} is missing")
                    continue
                layout = circ_layout(m, i, n)
                for s in _generators(n):
                    sb = O.sigma_act(s, b)
                    j = s.index(i)
                    lhs = try_(lambda: O._circ(a, j, sb))
                    toks = [("b", s[k]) if t == "b" else ("a", k)
                            for t, k in circ_layout(m, j, n)]
                    rhs = O.sigma_act(_reorder(toks, layout), base)
                    if lhs != rhs:
                        fail(f"equivariance in the second argument fails for {a} o_{i + 1} {b}, {s}")
                        break
                for t in _generators(m):
                    glued = t[m - 1]
                    if a.profile[glued] != b.profile[i]:
                        continue
                    ta = O.sigma_act(t, a)
                    rho = _move_last(m, glued)
                    ref = try_(lambda: O._circ(O.sigma_act(rho, a), i, b))
                    lhs = try_(lambda: O._circ(ta, i, b))
                    if ref is None or lhs is None:
                        fail(f"composite missing in equivariance check for {a}, {t}")
                        break
                    toks = [("a", t[k]) if tag == "a" else ("b", k)
                            for tag, k in circ_layout(m, i, n)]
                    ref_toks = [("a", rho[k]) if tag == "a" else ("b", k)
                                for tag, k in circ_layout(m, i, n)]
                    if lhs != O.sigma_act(_reorder(toks, ref_toks), ref):
                        fail(f"equivariance in the first argument fails for {a} o_{i + 1} {b}, {t}")
                        break
    return report


# -- morphisms -----------------------------------------------------------------

@dataclass
class OperadMorphism:
    colour_map: Dict[str, str]
    op_map: Dict[Op, Op]

    def __call__(self, a: Op) -> Op:
        return self.op_map[a]


def identity_morphism(O: CyclicOperad) -> OperadMorphism:
    return OperadMorphism({c: c for c in O.colours}, {a: a for a in O.operations()})


def to_terminal(O: CyclicOperad, T: CyclicOperad) -> OperadMorphism:
    (c,) = T.colours
    return OperadMorphism({x: c for x in O.colours},
                          {a: Op(tuple(c for _ in a.profile), "*") for a in O.operations()})


def validate_morphism(f: OperadMorphism, O: CyclicOperad, P: CyclicOperad,
                      limit: int = 20) -> List[str]:
    report: List[str] = []

    def fail(msg):
        if len(report) < limit:
            report.append(msg)

    for a in O.operations():
        b = f.op_map.get(a)
        if b is None or b.profile != tuple(f.colour_map[c] for c in a.profile) \
                or b.label not in P.ops.get(b.profile, ()):
            fail(f"{a} is not sent to an operation of the right profile")
    if report:
        return report
    for c in O.colours:
        if f(O.unit(c)) != P.unit(f.colour_map[c]):
            fail(f"unit of {c!r} is not preserved")
    for a in O.operations():
        for s in _perms(len(a.profile)):
            if f(O.sigma_act(s, a)) != P.sigma_act(s, f(a)):
                fail(f"action of {s} on {a} is not preserved")
                break
    for (p, l, i, q, k), r in O.comp_table.items():
        a, b = Op(p, l), Op(q, k)
        out = Op(q[:i] + p[:-1] + q[i + 1:], r)
        try:
            img = P._circ(f(a), i, f(b))
        except OperadError:
            img = None
        if img != f(out):
            fail(f"composite {a} o_{i + 1} {b} is not preserved")
    return report


# -- nerve ---------------------------------------------------------------------

class _Evaluator:
    """Composite operation of a sub-tree, with its border flags in order."""

    def __init__(self, O: CyclicOperad, tree: Graph, colour: Dict[str, str], op: Dict[str, Op]):
        self.O, self.tree, self.colour, self.op = O, tree, colour, op

    def flags(self, v: str) -> List[Tuple[str, str]]:
        return [(e, v) for e, _ in self.tree.flags(v)]

    def evaluate(self, vertices, edges) -> Tuple[Op, List[Tuple[str, str]]]:
        O = self.O
        cur = {v: (self.op[v], self.flags(v)) for v in vertices}
        owner = {v: v for v in vertices}

        def root(v):
            while owner[v] != v:
                v = owner[v]
            return v

        for b in sorted(edges):
            x, y = (root(w) for w in self.tree.endpoints(b))
            (ax, fx), (ay, fy) = cur.pop(x), cur.pop(y)
            px = next(k for k, (e, _) in enumerate(fx) if e == b)
            py = next(k for k, (e, _) in enumerate(fy) if e == b)
            rho = _move_last(len(fx), px)
            a = O.sigma_act(rho, ax)
            moved = permute(rho, fx)
            res = O._circ(a, py, ay)
            flags = list(fy[:py]) + list(moved[:-1]) + list(fy[py + 1:])
            owner[x] = y
            cur[y] = (res, flags)
        (out,) = cur.values()
        return out


def nerve_elements(O: CyclicOperad, tree: Graph) -> List[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """All decorations of ``tree``: edge colours, then one operation label per vertex."""
    out = []
    for cols in itertools.product(O.colours, repeat=len(tree.edges)):
        colour = {e.id: c for e, c in zip(tree.edges, cols)}
        choices = []
        for v in tree.vertices:
            prof = tuple(colour[e] for e, _ in tree.flags(v))
            choices.append(O.ops.get(prof, ()))
        for labels in itertools.product(*choices):
            out.append((cols, tuple(labels)))
    return out


def _restrict(O: CyclicOperad, m, element) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    S, T = m.source, m.target
    cols, labels = element
    colour = {e.id: c for e, c in zip(T.edges, cols)}
    op = {v: Op(tuple(colour[e] for e, _ in T.flags(v)), l)
          for v, l in zip(T.vertices, labels)}
    ev = _Evaluator(O, T, colour, op)
    out_cols = tuple(colour[m.e0[e.id]] for e in S.edges)
    out_labels = []
    for u in S.vertices:
        emb = m.e1[u]
        if emb.is_unit:
            (b,) = emb.edges
            out_labels.append(O.units[colour[b]])
            continue
        res, flags = ev.evaluate(sorted(emb.vertices), emb.edges)
        border = {e: k for k, (e, _) in enumerate(flags)}
        sigma = tuple(border[m.e0[e]] for e, _ in S.flags(u))
        out_labels.append(O.sigma_act(sigma, res).label)
    return out_cols, tuple(out_labels)


def _element_name(el) -> str:
    cols, labels = el
    return ",".join(cols) + "/" + ";".join(labels)


def nerve(O: CyclicOperad, sk: Skeleton, drop_undefined: bool = False) -> GraphicalSet:
    """The nerve of ``O`` on a tree skeleton.

    With ``drop_undefined`` a decoration whose restriction needs a composite
    missing from the tables is left out instead of raising.
    """
    if not all(g.is_tree() for g in sk.objects):
        raise PresheafError("the nerve is only defined on a tree skeleton")
    elems = [nerve_elements(O, g) for g in sk.objects]
    bad: set = set()
    if drop_undefined:
        where = [{el: k for k, el in enumerate(es)} for es in elems]
        changed = True
        while changed:
            changed = False
            for f, m in enumerate(sk.morphisms):
                s, t = sk.src[f], sk.tgt[f]
                for x, el in enumerate(elems[t]):
                    if (t, x) in bad:
                        continue
                    try:
                        y = where[s].get(_restrict(O, m, el))
                    except OperadError:
                        y = None
                    if y is None or (s, y) in bad:
                        bad.add((t, x))
                        changed = True
        elems = [[el for x, el in enumerate(es) if (i, x) not in bad] for i, es in enumerate(elems)]
    pos = [{el: k for k, el in enumerate(es)} for es in elems]
    actions = {}
    for f, m in enumerate(sk.morphisms):
        s, t = sk.src[f], sk.tgt[f]
        table = []
        for el in elems[t]:
            try:
                table.append(pos[s][_restrict(O, m, el)])
            except KeyError:
                raise PresheafError("restriction left the nerve") from None
        actions[f] = tuple(table)
    return GraphicalSet(sk, [[_element_name(el) for el in es] for es in elems], actions,
                        f"nerve({O.name})")


def nerve_map(f: OperadMorphism, O: CyclicOperad, P: CyclicOperad, sk: Skeleton,
              XO: GraphicalSet, XP: GraphicalSet) -> List[Dict[int, int]]:
    """Components of the induced map of nerves, one dict per object."""
    comps = []
    for g, tree in enumerate(sk.objects):
        src = nerve_elements(O, tree)
        index = {_element_name(el): k for k, el in enumerate(nerve_elements(P, tree))}
        pos = {name: k for k, name in enumerate(XP.sets[g])}
        comp = {}
        for k, (cols, labels) in enumerate(src):
            colour = {e.id: c for e, c in zip(tree.edges, cols)}
            new_labels = []
            for v, l in zip(tree.vertices, labels):
                prof = tuple(colour[e] for e, _ in tree.flags(v))
                new_labels.append(f(Op(prof, l)).label)
            new_cols = tuple(f.colour_map[c] for c in cols)
            name = _element_name((new_cols, tuple(new_labels)))
            if name not in index:
                raise OperadError("morphism leaves the target nerve")
            comp[k] = pos[name]
        comps.append(comp)
    return comps


def check_naturality(comps: List[Dict[int, int]], X: GraphicalSet, Y: GraphicalSet) -> List[str]:
    sk = X.skeleton
    out = []
    for f in range(len(sk.morphisms)):
        s, t = sk.src[f], sk.tgt[f]
        for x in range(X.size(t)):
            if comps[s][X.act(f, x)] != Y.act(f, comps[t][x]):
                out.append(f"naturality fails at {sk.morphism_key(f)}")
                break
    return out


def delete_composite(O: CyclicOperad, a: Op, b: Op) -> CyclicOperad:
    """Copy of ``O`` with every composite ``a o_i b`` removed (a deliberately broken operad)."""
    comp = {k: v for k, v in O.comp_table.items()
            if not (k[0] == a.profile and k[1] == a.label and k[3] == b.profile and k[4] == b.label)}
    return CyclicOperad(O.colours, dict(O.ops), dict(O.units), dict(O.act_table), comp,
                        O.max_arity, f"{O.name} without {a} o {b}")
