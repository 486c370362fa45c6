"""Graphical maps: an edge function plus a vertex-to-embedding function.

A map ``f: G -> H`` sends every edge of ``G`` to an edge of ``H`` and every
vertex of ``G`` to a connected sub-graph of ``H`` (or to a single bare edge,
written ``eta_b``).  Two conditions make it a graphical map:

* the vertex sets of the embeddings are pairwise disjoint;
* the half-edges at each vertex ``v`` are carried by the edge function onto
  the border of the embedding of ``v`` (compared as multisets of edges).
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .graph import (EdgeClass, Graph, GraphError, Isomorphism, P, V, isomorphisms)


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class Embedding:
    vertices: frozenset
    edges: frozenset

    @classmethod
    def corolla(cls, v: str) -> "Embedding":
        return cls(frozenset([v]), frozenset())

    @classmethod
    def unit(cls, e: str) -> "Embedding":
        return cls(frozenset(), frozenset([e]))

    @property
    def is_unit(self) -> bool:
        return not self.vertices

    def border(self, host: Graph) -> Counter:
        if self.is_unit:
            (e,) = self.edges
            return Counter({e: 2})
        out: Counter = Counter()
        for v in self.vertices:
            for eid, _ in host.flags(v):
                if eid not in self.edges:
                    out[eid] += 1
        return out

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "edges": sorted(self.edges)}

    @classmethod
    def from_json(cls, data: dict) -> "Embedding":
        return cls(frozenset(data["vertices"]), frozenset(data["edges"]))

    def __repr__(self) -> str:
        if self.is_unit:
            return f"eta_{next(iter(self.edges))}"
        return "{" + ",".join(sorted(self.vertices)) + ("|" + ",".join(sorted(self.edges)) if self.edges else "") + "}"


@dataclass(frozen=True)
class GraphicalMap:
    source: Graph
    target: Graph
    edge_map: Tuple[Tuple[str, str], ...]
    vertex_map: Tuple[Tuple[str, Embedding], ...]

    @classmethod
    def make(cls, source: Graph, target: Graph, edge_map: Dict[str, str],
             vertex_map: Dict[str, Embedding]) -> "GraphicalMap":
        return cls(source, target, tuple(sorted(edge_map.items())),
                   tuple(sorted(vertex_map.items(), key=lambda kv: kv[0])))

    @cached_property
    def e0(self) -> Dict[str, str]:
        return dict(self.edge_map)

    @cached_property
    def e1(self) -> Dict[str, Embedding]:
        return dict(self.vertex_map)

    @cached_property
    def _hash(self) -> int:
        return hash((self.source, self.target, self.edge_map, self.vertex_map))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphicalMap):
            return NotImplemented
        return (self._hash == other._hash and self.edge_map == other.edge_map
                and self.vertex_map == other.vertex_map and self.source == other.source
                and self.target == other.target)

    def key(self) -> Tuple:
        """Source-independent description of the map data (for deduplication)."""
        return (self.edge_map, self.vertex_map)

    def __repr__(self) -> str:
        es = ", ".join(f"{a}->{b}" for a, b in self.edge_map)
        vs = ", ".join(f"{a}->{b!r}" for a, b in self.vertex_map)
        return f"GraphicalMap([{es}] [{vs}])"

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "edge_map": dict(self.edge_map),
                "vertex_map": {v: emb.to_json() for v, emb in self.vertex_map}}

    @classmethod
    def from_json(cls, data: dict) -> "GraphicalMap":
        return cls.make(Graph.from_json(data["source"]), Graph.from_json(data["target"]),
                        dict(data["edge_map"]),
                        {v: Embedding.from_json(e) for v, e in data["vertex_map"].items()})


# -- validity ----------------------------------------------------------------

def _embedding_problems(host: Graph, emb: Embedding) -> List[str]:
    probs = []
    if emb.is_unit:
        if len(emb.edges) != 1:
            return ["a vertex-free embedding must consist of exactly one edge"]
        (e,) = emb.edges
        if e not in host.edge_index:
            probs.append(f"unknown edge {e!r}")
        return probs
    for v in emb.vertices:
        if v not in host._flags:
            probs.append(f"unknown vertex {v!r}")
    for e in emb.edges:
        if e not in host.edge_index:
            probs.append(f"unknown edge {e!r}")
            continue
        a, b = host.endpoints(e)
        if a not in emb.vertices or b not in emb.vertices:
            probs.append(f"edge {e!r} is not internal to the embedding")
    if probs:
        return probs
    parent = {v: v for v in emb.vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for e in emb.edges:
        a, b = host.endpoints(e)
        parent[find(a)] = find(b)
    if len({find(v) for v in emb.vertices}) != 1:
        probs.append("embedding is disconnected")
    return probs


def check_graphical_map(m: GraphicalMap) -> List[str]:
    """Validation report; empty iff ``m`` is a graphical map."""
    report = []
    src, tgt = m.source, m.target
    if set(m.e0) != {e.id for e in src.edges}:
        report.append("edge map: not defined on exactly the source edges")
    for e, b in m.e0.items():
        if b not in tgt.edge_index:
            report.append(f"edge map: {e!r} sent to unknown edge {b!r}")
    if set(m.e1) != set(src.vertices):
        report.append("vertex map: not defined on exactly the source vertices")
    if report:
        return report
    seen: Dict[str, str] = {}
    for v, emb in m.vertex_map:
        for p in _embedding_problems(tgt, emb):
            report.append(f"embedding of {v!r}: {p}")
        for w in emb.vertices:
            if w in seen:
                report.append(f"vertex-count: embeddings of {seen[w]!r} and {v!r} share {w!r}")
            seen[w] = v
    if report:
        return report
    for v, emb in m.vertex_map:
        image = Counter(m.e0[eid] for eid, _ in src.flags(v))
        if image != emb.border(tgt):
            report.append(f"border: half-edges at {v!r} do not match the border of {emb!r}")
    return report


def is_valid(m: GraphicalMap) -> bool:
    return not check_graphical_map(m)


# -- basic maps --------------------------------------------------------------

def identity(g: Graph) -> GraphicalMap:
    return GraphicalMap.make(g, g, {e.id: e.id for e in g.edges},
                             {v: Embedding.corolla(v) for v in g.vertices})


def iso_map(g: Graph, h: Graph, iso: Isomorphism) -> GraphicalMap:
    return GraphicalMap.make(g, h, dict(iso.edge_map),
                             {v: Embedding.corolla(w) for v, w in iso.vertex_map.items()})


@lru_cache(maxsize=1 << 17)
def compose(g: GraphicalMap, f: GraphicalMap) -> GraphicalMap:
    """The composite ``g . f`` (apply ``f`` first)."""
    if f.target != g.source:
        raise MapError("maps are not composable")
    mid, tgt = f.target, g.target
    e0 = {e: g.e0[b] for e, b in f.e0.items()}
    e1 = {}
    for v, emb in f.vertex_map:
        if emb.is_unit:
            (b,) = emb.edges
            e1[v] = Embedding.unit(g.e0[b])
            continue
        verts = set()
        cands = set(g.e0[b] for b in emb.edges)
        for w in emb.vertices:
            sub = g.e1[w]
            verts |= sub.vertices
            if not sub.is_unit:
                cands |= sub.edges
        if not verts:
            e1[v] = Embedding.unit(g.e0[next(iter(sorted(emb.edges)))] if emb.edges
                                   else next(iter(g.e1[next(iter(emb.vertices))].edges)))
            continue
        border = Counter(g.e0[eid] for eid in emb.border(mid).elements())
        e1[v] = Embedding(frozenset(verts), frozenset(c for c in cands if c not in border))
    return GraphicalMap.make(f.source, tgt, e0, e1)


def compose_all(maps: Iterable[GraphicalMap]) -> GraphicalMap:
    """``compose_all([f1, f2, f3]) == f1 . f2 . f3``."""
    maps = list(maps)
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def equal_maps(f: GraphicalMap, g: GraphicalMap) -> bool:
    if f.source != g.source or f.target != g.target:
        raise MapError("maps have different source or target")
    return f.edge_map == g.edge_map and f.vertex_map == g.vertex_map


def source_isos(f: GraphicalMap, g: GraphicalMap) -> List[Isomorphism]:
    """Isomorphisms ``phi: f.source -> g.source`` with ``g . phi == f``."""
    if f.target != g.target:
        return []
    out = []
    for iso in isomorphisms(f.source, g.source):
        if compose(g, iso_map(f.source, g.source, iso)) == f:
            out.append(iso)
    return out


def equal_up_to_source_iso(f: GraphicalMap, g: GraphicalMap) -> bool:
    if f.target != g.target:
        return False
    for iso in isomorphisms(f.source, g.source):
        if compose(g, iso_map(f.source, g.source, iso)) == f:
            return True
    return False


def transport_source(f: GraphicalMap, iso: Isomorphism, new_source: Graph) -> GraphicalMap:
    """``f . iso^-1`` where ``iso: f.source -> new_source``."""
    return compose(f, iso_map(new_source, f.source, iso.inverse()))


def transport_target(f: GraphicalMap, iso: Isomorphism, new_target: Graph) -> GraphicalMap:
    return compose(iso_map(f.target, new_target, iso), f)


def dumps(m: GraphicalMap) -> str:
    return json.dumps(m.to_json(), sort_keys=True)


# -- graph substitution --------------------------------------------------------

def graph_substitute(g: Graph, v: str, h: Graph, matching: Dict[str, str],
                     prefix: Optional[str] = None) -> Graph:
    """Replace vertex ``v`` of ``g`` by the graph ``h``.

    ``matching`` sends each edge at ``v`` (a loop at ``v`` appears as
    ``"<id>#1"`` / ``"<id>#2"`` for its two ends) to a leg of ``h``.  Vertices
    and edges of ``h`` are renamed ``<prefix>/<name>`` (prefix defaults to ``v``).
    """
    prefix = v if prefix is None else prefix
    halves = []
    for e, k in g.flags(v):
        a, b = g.endpoints(e)
        halves.append(f"{e}#{k + 1}" if a == b else e)
    if sorted(matching) != sorted(halves):
        raise MapError(f"matching must cover the {len(halves)} half-edges at {v!r}")
    if sorted(matching.values()) != sorted(h.legs()) or len(set(matching.values())) != len(halves):
        raise MapError("arity mismatch between the vertex and the legs of the inserted graph")
    leg_to_half = {leg: half for half, leg in matching.items()}
    # where does each half-edge at v land inside h?
    land = {}
    for leg in h.legs():
        e = h.edge(leg)
        land[leg_to_half[leg]] = next(s for s in e.ends if s.is_vertex)

    def rename(s):
        return V(f"{prefix}/{s.name}") if s.is_vertex else s

    edges = []
    for e in g.edges:
        a, b = e.ends
        if a.is_vertex and b.is_vertex and a.name == v and b.name == v:
            edges.append((e.id, rename(land[f"{e.id}#1"]), rename(land[f"{e.id}#2"])))
            continue
        ends = []
        for s in e.ends:
            ends.append(rename(land[e.id]) if s.is_vertex and s.name == v else s)
        edges.append((e.id, *ends))
    for e in h.edges:
        if e.id in leg_to_half:
            continue
        edges.append((f"{prefix}/{e.id}", rename(e.ends[0]), rename(e.ends[1])))
    verts = [w for w in g.vertices if w != v] + [f"{prefix}/{w}" for w in h.vertices]
    try:
        return Graph.build(verts, edges)
    except GraphError as exc:
        raise MapError(f"substitution failed: {exc}") from None


# -- hom-set enumeration -------------------------------------------------------

MAX_HOM_EDGES = 7


@lru_cache(maxsize=None)
def coface_composites(h: Graph) -> Tuple[Tuple[GraphicalMap, Tuple], ...]:
    """Every composite of cofaces into ``h`` (identity included) with its steps.

    Steps are listed outermost first.  Composites reached along different
    routes that agree on the nose are kept once.
    """
    from .elementary import COFACE_KINDS, apply_step, available_steps

    start = identity(h)
    seen = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for d in frontier:
            for step in available_steps(d.source, COFACE_KINDS):
                m = compose(d, apply_step(d.source, step))
                if m not in seen:
                    seen[m] = seen[d] + (step,)
                    nxt.append(m)
        frontier = nxt
    return tuple(seen.items())


def collapse(g: Graph, units) -> Tuple[Graph, GraphicalMap]:
    """Undo subdivisions: delete the two-valent vertices ``units``.

    Returns the collapsed graph and the map ``g -> collapsed`` sending each
    deleted vertex to ``eta`` of the merged edge.  Raises MapError when the
    vertices cannot be collapsed (a vertex with a loop, or a closed cycle).
    """
    units = set(units)
    parent = {e.id: e.id for e in g.edges}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u in units:
        fl = g.flags(u)
        if len(fl) != 2 or fl[0][0] == fl[1][0]:
            raise MapError(f"vertex {u!r} cannot be collapsed")
        a, b = find(fl[0][0]), find(fl[1][0])
        if a == b:
            raise MapError("collapsing would close a cycle")
        parent[max(a, b)] = min(a, b)
    classes: Dict[str, List[str]] = {}
    for e in g.edges:
        classes.setdefault(find(e.id), []).append(e.id)
    edges = []
    for rep, members in classes.items():
        ends = [s for m in members for s in g.edge(m).ends
                if not (s.is_vertex and s.name in units)]
        if len(ends) != 2:
            raise MapError("collapsing would close a cycle")
        edges.append((rep, ends[0], ends[1]))
    verts = [v for v in g.vertices if v not in units]
    try:
        h = Graph.build(verts, edges)
    except GraphError as exc:
        raise MapError(f"collapse failed: {exc}") from None
    e0 = {e.id: find(e.id) for e in g.edges}
    e1 = {v: Embedding.corolla(v) for v in verts}
    for u in units:
        e1[u] = Embedding.unit(find(g.flags(u)[0][0]))
    return h, GraphicalMap.make(g, h, e0, e1)


def collapsible_vertices(g: Graph) -> List[str]:
    out = []
    for v in g.vertices:
        fl = g.flags(v)
        if len(fl) == 2 and fl[0][0] != fl[1][0]:
            out.append(v)
    return out


def _collapses(g: Graph):
    import itertools
    cands = collapsible_vertices(g)
    for r in range(len(cands) + 1):
        for units in itertools.combinations(cands, r):
            try:
                yield collapse(g, units)
            except MapError:
                continue


@lru_cache(maxsize=None)
def enumerate_maps(g: Graph, h: Graph) -> Tuple[GraphicalMap, ...]:
    """All morphisms ``g -> h`` of the graphical category, deduplicated.

    A morphism is a composite of elementary maps and isomorphisms; every such
    composite has the shape ``cofaces . iso . codegeneracies``, which is how the
    set is generated.
    """
    if len(g.edges) > MAX_HOM_EDGES or len(h.edges) > MAX_HOM_EDGES:
        raise MapError("graphs exceed the hom enumeration budget")
    out: Dict[GraphicalMap, None] = {}
    comps = coface_composites(h)
    collapsed = list(_collapses(g))
    for d, _ in comps:
        k = d.source
        for mid, sigma in collapsed:
            if mid.signature() != k.signature():
                continue
            for iso in isomorphisms(mid, k):
                m = compose(d, compose(iso_map(mid, k, iso), sigma))
                out.setdefault(m, None)
    return tuple(sorted(out, key=lambda m: (m.edge_map, tuple((v, sorted(e.vertices), sorted(e.edges)) for v, e in m.vertex_map))))


def is_morphism(m: GraphicalMap) -> bool:
    return m in enumerate_maps(m.source, m.target)


# -- substitution factorisation ------------------------------------------------

class Substitution(NamedTuple):
    """Replace ``vertex`` by ``graph``; its legs are ``@<half-edge>``.

    ``graph`` is None for a two-valent vertex that is collapsed away instead.
    """
    vertex: str
    graph: Optional[Graph]
    matching: Tuple[Tuple[str, str], ...] = ()


def _half_names(g: Graph, v: str) -> List[Tuple[str, str]]:
    """(half-edge name, edge id) for each flag at ``v``."""
    out = []
    for e, k in g.flags(v):
        a, b = g.endpoints(e)
        out.append((f"{e}#{k + 1}" if a == b else e, e))
    return out


def _embedded_graph(host: Graph, emb: Embedding, halves, e0) -> Tuple[Graph, Dict[str, str]]:
    border: Dict[str, List[str]] = {}
    for x in sorted(emb.vertices):
        for c, _ in host.flags(x):
            if c not in emb.edges:
                border.setdefault(c, []).append(x)
    edges = [(b, *host.edge(b).ends) for b in sorted(emb.edges)]
    matching = {}
    for half, e in sorted(halves):
        x = border[e0[e]].pop(0)
        edges.append((f"@{half}", V(x), P(f"@{half}")))
        matching[half] = f"@{half}"
    return Graph.build(sorted(emb.vertices), edges), matching


def substitution_map(g: Graph, subs: Iterable[Substitution]) -> GraphicalMap:
    """Replay ``subs`` on ``g``; returns the map from ``g`` onto the result."""
    subs = list(subs)
    units = [s.vertex for s in subs if s.graph is None]
    mid, sigma = collapse(g, units)
    out = mid
    e1 = {v: Embedding.corolla(v) for v in mid.vertices}
    for s in subs:
        if s.graph is None:
            continue
        out = graph_substitute(out, s.vertex, s.graph, dict(s.matching))
        e1[s.vertex] = Embedding(frozenset(f"{s.vertex}/{w}" for w in s.graph.vertices),
                                 frozenset(f"{s.vertex}/{e.id}" for e in s.graph.edges
                                           if e.id not in dict(s.matching).values()))
    step = GraphicalMap.make(mid, out, {e.id: e.id for e in mid.edges}, e1)
    return compose(step, sigma)


def as_substitutions_then_inclusion(m: GraphicalMap):
    """Factor ``m`` as a substitution map followed by a vertex-injective inclusion.

    Returns ``(substitutions, inclusion)`` with
    ``compose(inclusion, substitution_map(m.source, substitutions)) == m``.
    """
    if check_graphical_map(m):
        raise MapError("not a graphical map")
    g, h = m.source, m.target
    units = [v for v, emb in m.vertex_map if emb.is_unit]
    mid, sigma = collapse(g, units)
    subs = [Substitution(u, None) for u in units]
    mid_e0 = {e.id: m.e0[e.id] for e in mid.edges}
    inc_e0 = dict(mid_e0)
    inc_e1: Dict[str, Embedding] = {}
    for v in mid.vertices:
        emb = m.e1[v]
        if len(emb.vertices) == 1 and not emb.edges:
            inc_e1[v] = emb
            continue
        sub, matching = _embedded_graph(h, emb, _half_names(mid, v), mid_e0)
        subs.append(Substitution(v, sub, tuple(sorted(matching.items()))))
        for w in emb.vertices:
            inc_e1[f"{v}/{w}"] = Embedding.corolla(w)
        for b in emb.edges:
            inc_e0[f"{v}/{b}"] = b
    subst = substitution_map(g, subs)
    inclusion = GraphicalMap.make(subst.target, h, inc_e0, inc_e1)
    return subs, inclusion
