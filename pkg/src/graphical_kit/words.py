"""Morphisms written as words in the elementary maps.

A word is anchored at its *target* graph.  Steps are listed outermost first,
so ``[s1, s2, s3]`` denotes the composite ``s1 . s2 . s3``: ``s1`` has the
anchor as target, ``s2`` has the source of ``s1`` as target, and so on.  In
this order the standard form reads "cofaces, then codegeneracies", which is
the same as applying codegeneracies first.

A word may carry a relabelling: an isomorphism from a declared source graph
onto the derived source of the last step.  It is what lets a word stand for
a map between graphs with arbitrary names.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .elementary import (COFACE_KINDS, ElementaryError, Step, apply_step,
                         available_steps, can_snip, codegeneracy, cosnip,
                         inner_coface, merge_name, outer_coface)
from .gmap import (Embedding, GraphicalMap, MapError, check_graphical_map,
                   collapse, compose, compose_all, equal_up_to_source_iso,
                   graph_substitute, identity, iso_map)
from .graph import (EdgeClass, Graph, Isomorphism, P, V, is_outer_vertex,
                    isomorphisms)
from . import elementary


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class ElementaryWord:
    target: Graph
    steps: Tuple[Step, ...] = ()
    # (declared source, iso from it onto the derived source)
    relabel: Optional[Tuple[Graph, Isomorphism]] = field(default=None, compare=False)

    def maps(self) -> List[GraphicalMap]:
        out = []
        g = self.target
        for i, s in enumerate(self.steps):
            try:
                m = apply_step(g, s)
            except ElementaryError as exc:
                raise WordError(f"step {i} ({s}) does not apply: {exc}") from None
            out.append(m)
            g = m.source
        return out

    def graphs(self) -> List[Graph]:
        """Intermediate graphs from the target down to the derived source."""
        return [self.target] + [m.source for m in self.maps()]

    @property
    def derived_source(self) -> Graph:
        return self.graphs()[-1]

    @property
    def source(self) -> Graph:
        return self.relabel[0] if self.relabel else self.derived_source

    def is_standard(self) -> bool:
        seen_degen = False
        for s in self.steps:
            if s.kind == "degen":
                seen_degen = True
            elif seen_degen:
                return False
        return True

    def inversions(self) -> int:
        n = degens = 0
        for s in self.steps:
            if s.kind == "degen":
                degens += 1
            else:
                n += degens
        return n

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return " . ".join(str(s) for s in self.steps) or "id"

    def to_json(self) -> dict:
        d = {"start": self.target.to_json(), "steps": [s.to_json() for s in self.steps]}
        if self.relabel:
            src, iso = self.relabel
            d["source"] = src.to_json()
            d["relabel"] = {"vertices": iso.vertex_map, "edges": iso.edge_map, "ports": iso.port_map}
        return d

    @classmethod
    def from_json(cls, data: dict) -> "ElementaryWord":
        target = Graph.from_json(data["start"])
        steps = tuple(Step.from_json(s) for s in data.get("steps", []))
        relabel = None
        if "relabel" in data:
            r = data["relabel"]
            relabel = (Graph.from_json(data["source"]),
                       Isomorphism(dict(r["vertices"]), dict(r["edges"]), dict(r["ports"])))
        return cls(target, steps, relabel)


def compose_word(w: ElementaryWord) -> GraphicalMap:
    maps = w.maps()
    out = compose_all(maps) if maps else identity(w.target)
    if w.relabel:
        src, iso = w.relabel
        out = compose(out, iso_map(src, out.source, iso))
    return out


def run(g: Graph, steps: Sequence[Step]) -> Optional[GraphicalMap]:
    """Composite of ``steps`` anchored at ``g``, or None if some step is undefined."""
    try:
        return compose_word(ElementaryWord(g, tuple(steps)))
    except WordError:
        return None


def same_map(f: GraphicalMap, g: GraphicalMap) -> bool:
    """Equality on the nose, or after renaming the source of ``f``."""
    if f.source == g.source and f.target == g.target:
        return f == g
    return equal_up_to_source_iso(f, g)



def composable_words(g: Graph, max_length: int,
                     max_vertices: Optional[int] = None) -> Iterator[ElementaryWord]:
    """Every word of 1..max_length elementary steps ending at ``g``.

    With ``max_vertices`` every intermediate graph must stay within that many vertices.
    """
    def walk(h, prefix):
        for s in available_steps(h):
            src = apply_step(h, s).source
            if max_vertices is not None and len(src.vertices) > max_vertices:
                continue
            steps = prefix + (s,)
            yield ElementaryWord(g, steps)
            if len(steps) < max_length:
                yield from walk(src, steps)
    yield from walk(g, ())

# -- transport across renamings ----------------------------------------------

def rename_step(s: Step, iso: Isomorphism) -> Step:
    if s.kind == "outer":
        return Step("outer", iso.vertex_map[s.datum],
                    iso.edge_map[s.keep] if s.keep is not None else None)
    return Step(s.kind, iso.edge_map[s.datum])


def transport_steps(steps: Sequence[Step], old: Graph, new: Graph,
                    iso: Isomorphism) -> Tuple[List[Step], Isomorphism]:
    """Re-anchor ``steps`` (anchored at ``old``) at ``new`` via ``iso: old -> new``.

    Returns the renamed steps and the induced iso between the two derived sources.
    """
    out = []
    for s in steps:
        s_new, old, new, iso = _transport_one(old, new, _iso_key(iso), s)
        out.append(s_new)
    return out, iso


def _iso_key(iso: Isomorphism) -> Tuple:
    return tuple(tuple(sorted(d.items())) for d in (iso.vertex_map, iso.edge_map, iso.port_map))


@lru_cache(maxsize=1 << 16)
def _transport_one(old: Graph, new: Graph, key: Tuple, s: Step):
    iso = Isomorphism(*(dict(k) for k in key))
    m_old = apply_step(old, s)
    s_new = rename_step(s, iso)
    m_new = apply_step(new, s_new)
    lhs = compose(iso_map(old, new, iso), m_old)
    for cand in isomorphisms(m_old.source, m_new.source):
        if compose(m_new, iso_map(m_old.source, m_new.source, cand)) == lhs:
            return s_new, m_old.source, m_new.source, cand
    raise WordError(f"cannot transport step {s} across the renaming")


def _with_relabel(target: Graph, steps, derived: Graph, iso_old_to_new: Isomorphism,
                  relabel) -> ElementaryWord:
    """Build a word whose derived source was renamed by ``iso_old_to_new``."""
    if relabel:
        src, r = relabel
        new_relabel = (src, r.then(iso_old_to_new))
    else:
        new_relabel = (derived, iso_old_to_new)
    w = ElementaryWord(target, tuple(steps), new_relabel)
    if w.relabel and w.relabel[1].is_identity() and w.relabel[0] == w.derived_source:
        w = ElementaryWord(target, tuple(steps))
    return w


# -- relations ---------------------------------------------------------------

RELATION_KINDS = ("R1", "R1'", "R2", "R3", "R4", "R5", "R6", "R7", "R8", "R9",
                  "R10", "R11", "R12")


@dataclass(frozen=True)
class RelationInstance:
    kind: str
    host: Graph
    data: Tuple
    left: Tuple[Step, ...] = ()
    right: Tuple[Step, ...] = ()
    note: str = ""

    def describe(self) -> str:
        return f"{self.kind} {self.data} on {self.host!r}"


@dataclass
class Verdict:
    status: str  # "pass", "fail" or "inapplicable"
    certificate: dict

    def __bool__(self) -> bool:
        return self.status == "pass"


def _inner_nonparallel(g: Graph, a: str, b: str) -> bool:
    return set(g.endpoints(a)) != set(g.endpoints(b))


def _outer_vertices(g: Graph) -> List[str]:
    if len(g.vertices) < 2:
        return []
    return [v for v in g.vertices if is_outer_vertex(g, v, elementary.OUTER_LOOPS_BLOCK)]


def _inner_at(g: Graph, v: str) -> List[str]:
    return sorted({e for e, _ in g.flags(v) if g.classify(e) is EdgeClass.INNER})


def _removed_edges(g: Graph, s: Step) -> List[str]:
    if s.kind in ("inner", "snip"):
        return [s.datum]
    if s.kind == "outer":
        if s.keep is not None:
            return [e for e, _ in g.flags(s.datum) if e != s.keep]
        return sorted({e for e, _ in g.flags(s.datum)
                       if g.classify(e) in (EdgeClass.LEG, EdgeClass.LOOP)})
    return []


def relation_instances(g: Graph, kinds: Sequence[str] = RELATION_KINDS) -> List[RelationInstance]:
    """Every applicable relation instance on ``g``."""
    out: List[RelationInstance] = []
    kinds = set(kinds)
    inner = g.inner_edges()
    outer = _outer_vertices(g)
    snippable = [e.id for e in g.edges if can_snip(g, e.id)]
    S = Step

    def add(kind, data, left, right=(), note=""):
        if kind in kinds:
            out.append(RelationInstance(kind, g, tuple(data), tuple(left), tuple(right), note))

    for i, a in enumerate(inner):
        for b in inner[i + 1:]:
            if _inner_nonparallel(g, a, b):
                add("R1", (a, b), [S("inner", a), S("inner", b)], [S("inner", b), S("inner", a)])
            else:
                add("R1'", (a, b), [S("inner", a)], [S("inner", b)], "parallel")
    for i, v in enumerate(outer):
        for w in outer[i + 1:]:
            if len(g.vertices) >= 3:
                add("R2", (v, w), [S("outer", v), S("outer", w)], [S("outer", w), S("outer", v)])
            else:
                (c,) = _inner_at(g, v)
                add("R2", (v, w, c), [S("outer", v), S("outer", w, c)],
                    [S("outer", w), S("outer", v, c)], "two vertices")
    for v in outer:
        for e in inner:
            ends = g.endpoints(e)
            if v not in ends:
                add("R3", (v, e), [S("outer", v), S("inner", e)], [S("inner", e), S("outer", v)])
            else:
                w = ends[0] if ends[1] == v else ends[1]
                u = merge_name(v, w)
                if len(g.vertices) >= 3:
                    add("R4", (v, e, w), [S("inner", e), S("outer", u)],
                        [S("outer", v), S("outer", w)])
                else:
                    for leg in _legs_at(g, w):
                        add("R4", (v, e, w, leg), [S("inner", e), S("outer", u, leg)],
                            [S("outer", v), S("outer", w, leg)], "two vertices")
    edges = [e.id for e in g.edges]
    for i, e in enumerate(edges):
        add("R5", (e,), [S("degen", e), S("degen", f"{e}#1")],
            [S("degen", e), S("degen", f"{e}#2")], "coincident")
        for a in edges[i + 1:]:
            add("R5", (e, a), [S("degen", e), S("degen", a)], [S("degen", a), S("degen", e)])
    for step in available_steps(g, COFACE_KINDS):
        gone = set(_removed_edges(g, step))
        for a in edges:
            if a in gone:
                continue
            induced = S("outer", step.datum) if step.kind == "outer" else step
            add("R6", (step.to_json(), a), [S("degen", a), induced], [step, S("degen", a)])
    for e in edges:
        sub = codegeneracy(g, e).source
        for piece in (f"{e}#1", f"{e}#2"):
            if sub.classify(piece) is EdgeClass.INNER:
                add("R7", (e, piece), [S("degen", e), S("inner", piece)], note="identity")
        u = f"{e}#v"
        if len(sub.vertices) == 1:
            for piece in (f"{e}#1", f"{e}#2"):
                add("R7", (e, u, piece), [S("degen", e), S("outer", u, piece)], note="identity")
        elif is_outer_vertex(sub, u, elementary.OUTER_LOOPS_BLOCK):
            add("R7", (e, u), [S("degen", e), S("outer", u)], note="identity")
    for i, l in enumerate(snippable):
        for m in snippable[i + 1:]:
            add("R8", (l, m), [S("snip", l), S("snip", m)], [S("snip", m), S("snip", l)])
    for l in snippable:
        for e in inner:
            if e != l:
                add("R9", (l, e), [S("snip", l), S("inner", e)], [S("inner", e), S("snip", l)])
    for v in g.vertices:
        loops = [e for e in g.loops() if g.endpoints(e)[0] == v]
        if len(g.vertices) == 1:
            for leg in _legs_at(g, v):
                for l in loops:
                    add("R10", (v, l, leg), [S("outer", v, leg)],
                        [S("snip", l), S("outer", v, leg)], "loop on the deleted vertex")
        elif v in outer:
            for l in loops:
                add("R10", (v, l), [S("outer", v)], [S("snip", l), S("outer", v)],
                    "loop on the deleted vertex")
            for l in snippable:
                if v not in g.endpoints(l):
                    add("R10", (v, l), [S("outer", v), S("snip", l)],
                        [S("snip", l), S("outer", v)], "disjoint loop")
    for e in inner:
        if not can_snip(g, e):
            continue
        x, y = g.endpoints(e)
        for u, w in ((x, y), (y, x)):
            fu = [c for c in _inner_at(g, u) if c != e]
            gw = [c for c in _inner_at(g, w) if c != e]
            if len(fu) == 1 and len(gw) == 1 and fu != gw:
                f, gg = fu[0], gw[0]
                v = merge_name(u, w)
                add("R11", (e, u, w, f, gg),
                    [S("inner", e), S("snip", gg), S("outer", v)],
                    [S("snip", e), S("outer", w), S("outer", u)])
    for step in available_steps(g, COFACE_KINDS):
        for x in _removed_edges(g, step):
            add("R12", (step.to_json(), x), [step, S("snip", x)], note="snip of a removed edge")
        if step.kind == "outer" and step.keep is None:
            for c in _inner_at(g, step.datum):
                add("R12", (step.to_json(), c), [step, S("inner", c)],
                    note="contraction of a freed edge")
    return out


def _legs_at(g: Graph, v: str) -> List[str]:
    return sorted({e for e, _ in g.flags(v) if g.classify(e) is EdgeClass.LEG})


def _swap_target(f: GraphicalMap, a: str, b: str) -> GraphicalMap:
    """Post-compose with the automorphism exchanging parallel edges ``a`` and ``b``."""
    g = f.target
    swap = {a: b, b: a}
    iso = Isomorphism({v: v for v in g.vertices},
                      {e.id: swap.get(e.id, e.id) for e in g.edges},
                      {p: p for p in g.boundary})
    return compose(iso_map(g, g, iso), f)


def verify_relation(inst: RelationInstance) -> Verdict:
    g = inst.host
    cert = {"kind": inst.kind, "data": list(inst.data), "note": inst.note,
            "left": [s.to_json() for s in inst.left],
            "right": [s.to_json() for s in inst.right]}
    if inst.kind == "R12":
        lhs = run(g, inst.left[:1])
        if lhs is None:
            return Verdict("inapplicable", cert)
        ok = run(g, inst.left) is None
        cert["undefined"] = ok
        return Verdict("pass" if ok else "fail", cert)
    if inst.kind == "R7":
        lhs = run(g, inst.left)
        if lhs is None:
            return Verdict("inapplicable", cert)
        ok = same_map(lhs, identity(g))
        cert["composite"] = lhs.to_json()
        return Verdict("pass" if ok else "fail", cert)
    if inst.kind == "R1'":
        a, b = inst.data
        fa, fb = run(g, [Step("inner", a)]), run(g, [Step("inner", b)])
        if fa is None or fb is None:
            return Verdict("inapplicable", cert)
        blocked = (run(g, [Step("inner", a), Step("inner", b)]) is None
                   and run(g, [Step("inner", b), Step("inner", a)]) is None)
        eq = same_map(fa, _swap_target(fb, a, b))
        ok = blocked and eq
        cert.update(second_contraction_undefined=blocked, equal_after_swap=eq)
        return Verdict("pass" if ok else "fail", cert)
    lhs, rhs = run(g, inst.left), run(g, inst.right)
    if lhs is None and rhs is None:
        if inst.kind == "R8":
            cert["undefined"] = True
            return Verdict("pass", cert)
        return Verdict("inapplicable", cert)
    if (lhs is None) != (rhs is None):
        cert["defined"] = [lhs is not None, rhs is not None]
        return Verdict("fail", cert)
    ok = same_map(lhs, rhs)
    cert["left_map"] = lhs.to_json()
    cert["right_map"] = rhs.to_json()
    return Verdict("pass" if ok else "fail", cert)


# -- decomposition -----------------------------------------------------------

def _factor_through(m: GraphicalMap, d: GraphicalMap, e0: Dict[str, str],
                    e1: Dict[str, Embedding]) -> GraphicalMap:
    f = GraphicalMap.make(m.source, d.source, e0, e1)
    if check_graphical_map(f) or compose(d, f) != m:
        raise WordError("map does not factor through the chosen coface")
    return f


def _peel_cofaces(m: GraphicalMap) -> Tuple[List[Step], GraphicalMap]:
    """Strip cofaces off the target until ``m`` is a vertex bijection."""
    steps: List[Step] = []
    cur = m
    for _ in range(10_000):
        h = cur.target
        pre: Dict[str, List[str]] = {}
        for e, b in cur.edge_map:
            pre.setdefault(b, []).append(e)
        covered = set()
        internal = set()
        for _, emb in cur.vertex_map:
            covered |= emb.vertices
            if not emb.is_unit:
                internal |= emb.edges
        # (a) a target edge hit twice is undone by a cosnip
        doubled = sorted(b for b, es in pre.items() if len(es) == 2)
        if doubled:
            c = doubled[0]
            d = cosnip(h, c)
            l1, l2 = sorted(pre[c])
            done = None
            for a1, a2 in ((f"{c}#1", f"{c}#2"), (f"{c}#2", f"{c}#1")):
                e0 = dict(cur.e0)
                e0[l1], e0[l2] = a1, a2
                try:
                    done = _factor_through(cur, d, e0, dict(cur.e1))
                    break
                except WordError:
                    continue
            if done is None:
                raise WordError(f"cannot factor through the cosnip of {c!r}")
            steps.append(Step("snip", c))
            cur = done
            continue
        if not cur.source.vertices:
            (img,) = cur.e0.values()
            if h.is_unit:
                break
            if h.classify(img) is EdgeClass.LOOP:
                d = cosnip(h, img)
                e0 = {e: f"{img}#1" for e in cur.e0}
                steps.append(Step("snip", img))
                cur = _factor_through(cur, d, e0, {})
                continue
            if len(h.vertices) == 1:
                (v,) = h.vertices
                d = outer_coface(h, v, img)
                steps.append(Step("outer", v, img))
                cur = _factor_through(cur, d, dict(cur.e0), {})
                continue
        # (b) delete an uncovered outer vertex whose legs and loops are unused
        moved = False
        if len(h.vertices) > 1:
            for x in h.vertices:
                if x in covered or not is_outer_vertex(h, x, elementary.OUTER_LOOPS_BLOCK):
                    continue
                lost = {e for e, _ in h.flags(x)
                        if h.classify(e) in (EdgeClass.LEG, EdgeClass.LOOP)}
                if lost & set(pre):
                    continue
                d = outer_coface(h, x)
                steps.append(Step("outer", x))
                cur = _factor_through(cur, d, dict(cur.e0), dict(cur.e1))
                moved = True
                break
        if moved:
            continue
        # (c) snip an unused edge next to an uncovered vertex
        for e in h.edges:
            if e.id in pre or e.id in internal or not can_snip(h, e.id):
                continue
            if all(s.is_vertex and s.name in covered for s in e.ends):
                continue
            d = cosnip(h, e.id)
            steps.append(Step("snip", e.id))
            cur = _factor_through(cur, d, dict(cur.e0), dict(cur.e1))
            moved = True
            break
        if moved:
            continue
        # (d) snip a used edge that reaches an uncovered vertex, keeping the covered half
        for e in h.edges:
            if e.id not in pre or not can_snip(h, e.id):
                continue
            if all(s.is_vertex and s.name in covered for s in e.ends):
                continue
            d = cosnip(h, e.id)
            for half in (f"{e.id}#1", f"{e.id}#2"):
                e0 = dict(cur.e0)
                for x in pre[e.id]:
                    e0[x] = half
                try:
                    cur = _factor_through(cur, d, e0, dict(cur.e1))
                except WordError:
                    continue
                steps.append(Step("snip", e.id))
                moved = True
                break
            if moved:
                break
        if moved:
            continue
        break
    if cur.source.vertices and set(cur.target.vertices) != {
            w for _, emb in cur.vertex_map for w in emb.vertices}:
        raise WordError("map is not a composite of elementary maps (uncovered vertices remain)")
    # (d) contract internal edges of the embeddings
    for _ in range(10_000):
        pick = None
        for v, emb in cur.vertex_map:
            if not emb.is_unit and emb.edges:
                pick = (v, min(emb.edges))
                break
        if pick is None:
            break
        v, b = pick
        h = cur.target
        if h.classify(b) is not EdgeClass.INNER:
            raise WordError(f"embedding of {v!r} has an internal loop {b!r}")
        x, y = h.endpoints(b)
        d = inner_coface(h, b)
        e1 = dict(cur.e1)
        emb = e1[v]
        e1[v] = Embedding((emb.vertices - {x, y}) | {merge_name(x, y)}, emb.edges - {b})
        steps.append(Step("inner", b))
        cur = _factor_through(cur, d, dict(cur.e0), e1)
    return steps, cur


def _factor_degenerate(m: GraphicalMap):
    """Split ``m = m2 . sigma`` where ``sigma`` collapses the vertices sent to eta."""
    units = [v for v, emb in m.vertex_map if emb.is_unit]
    try:
        mid, sigma = collapse(m.source, units)
    except MapError as exc:
        raise WordError(f"degenerate part cannot be collapsed: {exc}") from None
    e0 = {e.id: m.e0[e.id] for e in mid.edges}
    e1 = {v: m.e1[v] for v in mid.vertices}
    m2 = GraphicalMap.make(mid, m.target, e0, e1)
    if compose(m2, sigma) != m:
        raise WordError("degenerate part does not factor")
    return m2, sigma, units


def decompose(m: GraphicalMap) -> ElementaryWord:
    """Standard-form word (cofaces, then codegeneracies) whose composite is ``m``."""
    report = check_graphical_map(m)
    if report:
        raise WordError("invalid graphical map: " + "; ".join(report))
    m2, sigma, units = _factor_degenerate(m)
    cofaces, rest = _peel_cofaces(m2)
    # ``rest`` is an isomorphism mid -> bottom; re-subdivide bottom's edges
    bottom = rest.target
    per_edge: Dict[str, int] = {}
    for u in units:
        (b,) = sigma.e1[u].edges
        per_edge[rest.e0[b]] = per_edge.get(rest.e0[b], 0) + 1
    degens: List[Step] = []
    for b in sorted(per_edge):
        name = b
        for _ in range(per_edge[b]):
            degens.append(Step("degen", name))
            name = f"{name}#2"
    word = ElementaryWord(m.target, tuple(cofaces + degens))
    comp = compose_word(word)
    if comp.source == m.source and comp == m:
        return word
    for iso in isomorphisms(m.source, comp.source):
        if compose(comp, iso_map(m.source, comp.source, iso)) == m:
            return ElementaryWord(m.target, word.steps, (m.source, iso))
    raise WordError("decomposition failed to reproduce the map")


# -- normal form -------------------------------------------------------------

def _annihilates(first: Step, second: Step) -> bool:
    """Does ``first . second`` (a codegeneracy after a coface) cancel?"""
    if first.kind != "degen":
        return False
    b = first.datum
    if second.kind == "inner" and second.datum in (f"{b}#1", f"{b}#2"):
        return True
    return second.kind == "outer" and second.datum == f"{b}#v"


@lru_cache(maxsize=1 << 16)
def _local_rewrite(anchor: Graph, first: Step, second: Step):
    """Standard-form replacement for ``first . second`` at ``anchor``.

    Returns the new steps and an iso ``psi`` from the old source to the new one
    with ``new . psi == old``.
    """
    pair = compose(apply_step(anchor, first), apply_step(apply_step(anchor, first).source, second))
    old_src = pair.source
    new_steps = () if _annihilates(first, second) else decompose(pair).steps
    local = ElementaryWord(anchor, new_steps)
    lw = compose_word(local)
    for cand in isomorphisms(old_src, local.derived_source):
        if compose(lw, iso_map(old_src, local.derived_source, cand)) == pair:
            return new_steps, cand
    raise WordError("local rewrite changed the composite")


def normalize(w: ElementaryWord, max_rounds: int = 1000) -> ElementaryWord:
    """Move codegeneracies past cofaces until the word is in standard form."""
    compose_word(w)  # raises on incomposable input
    cur = w
    for _ in range(max_rounds):
        steps = list(cur.steps)
        pos = next((i for i in range(len(steps) - 1)
                    if steps[i].kind == "degen" and steps[i + 1].is_coface), None)
        if pos is None:
            return cur
        graphs = cur.graphs()
        new_steps, psi = _local_rewrite(graphs[pos], steps[pos], steps[pos + 1])
        old_src = graphs[pos + 2]
        new_src = ElementaryWord(graphs[pos], new_steps).derived_source
        new_steps = list(new_steps)
        tail, psi_end = transport_steps(steps[pos + 2:], old_src, new_src, psi)
        merged = steps[:pos] + new_steps + tail
        derived = graphs[-1]
        cur = _with_relabel(cur.target, merged, derived, psi_end, cur.relabel)
    raise WordError("normalization did not terminate")


def dumps(w: ElementaryWord) -> str:
    return json.dumps(w.to_json(), sort_keys=True)
