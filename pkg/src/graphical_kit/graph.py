"""Finite connected undirected graphs with legs, loops and parallel edges.

A graph is a set of vertices, a set of edges and a set of boundary ports.
Every edge has two ends; an end is attached either to a vertex or to a
boundary port.  The unit graph ``eta`` has no vertices and a single edge
whose two ends are both ports.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple


class GraphError(ValueError):
    pass


class Slot(NamedTuple):
    kind: str  # "v" (vertex) or "p" (boundary port)
    name: str

    @property
    def is_vertex(self) -> bool:
        return self.kind == "v"


def V(name: str) -> Slot:
    return Slot("v", name)


def P(name: str) -> Slot:
    return Slot("p", name)


class Edge(NamedTuple):
    id: str
    ends: Tuple[Slot, Slot]


class EdgeClass(enum.Enum):
    INNER = "inner"
    LEG = "leg"
    LOOP = "loop"
    UNIT = "unit"


def make_edge(eid: str, a: Slot, b: Slot) -> Edge:
    return Edge(eid, tuple(sorted((a, b))))


@dataclass(frozen=True)
class Graph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    boundary: Tuple[str, ...]

    @classmethod
    def build(cls, vertices, edges, boundary=None, check=True) -> "Graph":
        """Build a graph from loose data; ``edges`` holds ``(id, end, end)`` triples.

        If ``boundary`` is omitted it is read off the port ends.
        """
        es = []
        for e in edges:
            if isinstance(e, Edge):
                es.append(make_edge(e.id, *e.ends))
            else:
                eid, a, b = e
                es.append(make_edge(eid, a, b))
        if boundary is None:
            boundary = [s.name for e in es for s in e.ends if not s.is_vertex]
        g = cls(tuple(sorted(vertices)), tuple(sorted(es)), tuple(sorted(boundary)))
        if check:
            g.validate()
        return g

    # -- lookups -----------------------------------------------------------

    @cached_property
    def edge_index(self) -> Dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _flags(self) -> Dict[str, Tuple[Tuple[str, int], ...]]:
        out: Dict[str, List[Tuple[str, int]]] = {v: [] for v in self.vertices}
        for e in self.edges:
            for k, s in enumerate(e.ends):
                if s.is_vertex:
                    out[s.name].append((e.id, k))
        return {v: tuple(sorted(fs)) for v, fs in out.items()}

    @cached_property
    def port_edge(self) -> Dict[str, str]:
        return {s.name: e.id for e in self.edges for s in e.ends if not s.is_vertex}

    def edge(self, eid: str) -> Edge:
        try:
            return self.edge_index[eid]
        except KeyError:
            raise GraphError(f"unknown edge {eid!r}") from None

    def flags(self, v: str) -> Tuple[Tuple[str, int], ...]:
        """Incident half-edges of ``v`` as sorted ``(edge, end)`` pairs."""
        try:
            return self._flags[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def valence(self, v: str) -> int:
        return len(self.flags(v))

    def endpoints(self, eid: str) -> Tuple[Optional[str], Optional[str]]:
        e = self.edge(eid)
        return tuple(s.name if s.is_vertex else None for s in e.ends)

    def classify(self, eid: str) -> EdgeClass:
        a, b = self.endpoints(eid)
        if a is None and b is None:
            return EdgeClass.UNIT
        if a is None or b is None:
            return EdgeClass.LEG
        return EdgeClass.LOOP if a == b else EdgeClass.INNER

    def legs(self) -> List[str]:
        return [e.id for e in self.edges if self.classify(e.id) is EdgeClass.LEG]

    def inner_edges(self) -> List[str]:
        return [e.id for e in self.edges if self.classify(e.id) is EdgeClass.INNER]

    def loops(self) -> List[str]:
        return [e.id for e in self.edges if self.classify(e.id) is EdgeClass.LOOP]

    def non_leg_edges(self) -> List[str]:
        return [e.id for e in self.edges
                if self.classify(e.id) in (EdgeClass.INNER, EdgeClass.LOOP)]

    @property
    def is_unit(self) -> bool:
        return not self.vertices

    def is_corolla(self) -> bool:
        return len(self.vertices) == 1 and not self.loops()

    def betti(self) -> int:
        """First Betti number; 0 for trees and for eta."""
        if self.is_unit:
            return 0
        return len(self.non_leg_edges()) - len(self.vertices) + 1

    def is_tree(self) -> bool:
        return self.betti() == 0

    # -- structure ---------------------------------------------------------

    def is_connected(self, without: Sequence[str] = ()) -> bool:
        if self.is_unit:
            return not without
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        skip = set(without)
        for e in self.edges:
            if e.id in skip:
                continue
            a, b = e.ends
            if a.is_vertex and b.is_vertex:
                parent[find(a.name)] = find(b.name)
        return len({find(v) for v in self.vertices}) == 1

    def is_bridge(self, eid: str) -> bool:
        if self.classify(eid) is not EdgeClass.INNER:
            return False
        return not self.is_connected(without=[eid])

    def validate(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge ids")
        if not self.edges:
            raise GraphError("a graph needs at least one edge")
        ports: List[str] = []
        vs = set(self.vertices)
        for e in self.edges:
            for s in e.ends:
                if s.is_vertex:
                    if s.name not in vs:
                        raise GraphError(f"edge {e.id!r} attached to unknown vertex {s.name!r}")
                else:
                    ports.append(s.name)
        if sorted(ports) != sorted(self.boundary) or len(set(ports)) != len(ports):
            raise GraphError("boundary ports must be distinct and each used by exactly one edge end")
        if not self.vertices:
            if len(self.edges) != 1:
                raise GraphError("a vertex-free graph must be eta")
            return
        for e in self.edges:
            if not any(s.is_vertex for s in e.ends):
                raise GraphError(f"edge {e.id!r} floats free of the vertices")
        for v in self.vertices:
            if not self._flags[v]:
                raise GraphError(f"isolated vertex {v!r}")
        if not self.is_connected():
            raise GraphError("graph is disconnected")

    def signature(self) -> Tuple[int, int, int]:
        return (len(self.vertices), len(self.edges), len(self.boundary))

    def __repr__(self) -> str:
        parts = []
        for e in self.edges:
            a, b = (f"{s.name}" if s.is_vertex else f"[{s.name}]" for s in e.ends)
            parts.append(f"{e.id}:{a}-{b}")
        return f"Graph(V={list(self.vertices)}, {' '.join(parts)})"

    # -- serialisation -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id,
                       "ends": [{"v": s.name} if s.is_vertex else {"p": s.name} for s in e.ends]}
                      for e in self.edges],
            "boundary": list(self.boundary),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        edges = []
        for e in data["edges"]:
            ends = [V(s["v"]) if "v" in s else P(s["p"]) for s in e["ends"]]
            if len(ends) != 2:
                raise GraphError(f"edge {e['id']!r} must have two ends")
            edges.append((e["id"], ends[0], ends[1]))
        return cls.build(data["vertices"], edges, data.get("boundary"))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- constructors ------------------------------------------------------------

def corolla(n: int) -> Graph:
    """One vertex with n+1 legs, so that eta includes into it in n+1 ways."""
    if n < 0:
        raise GraphError("corolla arity must be non-negative")
    return Graph.build(["v"], [(f"l{i}", V("v"), P(f"p{i}")) for i in range(n + 1)])


def edge_unit() -> Graph:
    return Graph.build([], [("e", P("p0"), P("p1"))])


def classify_edge(g: Graph, eid: str) -> EdgeClass:
    return g.classify(eid)


def is_outer_vertex(g: Graph, v: str, loops_block: bool = False) -> bool:
    """True if ``v`` carries at most one half-edge on an inner (non-loop) edge.

    Loops at ``v`` are removed together with ``v`` by an outer face, so by
    default they do not block outerness.  With ``loops_block=True`` a loop
    contributes its two half-edges to the count.
    """
    count = 0
    for eid, _ in g.flags(v):
        c = g.classify(eid)
        if c is EdgeClass.INNER or (loops_block and c is EdgeClass.LOOP):
            count += 1
    return count <= 1


# -- isomorphisms ------------------------------------------------------------

@dataclass(frozen=True)
class Isomorphism:
    vertex_map: Dict[str, str] = field(hash=False)
    edge_map: Dict[str, str] = field(hash=False)
    port_map: Dict[str, str] = field(hash=False)

    def inverse(self) -> "Isomorphism":
        inv = lambda d: {b: a for a, b in d.items()}
        return Isomorphism(inv(self.vertex_map), inv(self.edge_map), inv(self.port_map))

    def then(self, other: "Isomorphism") -> "Isomorphism":
        return Isomorphism({a: other.vertex_map[b] for a, b in self.vertex_map.items()},
                           {a: other.edge_map[b] for a, b in self.edge_map.items()},
                           {a: other.port_map[b] for a, b in self.port_map.items()})

    def is_identity(self) -> bool:
        return all(a == b for d in (self.vertex_map, self.edge_map, self.port_map)
                   for a, b in d.items())


def relabel(g: Graph, iso: Isomorphism) -> Graph:
    def slot(s):
        return V(iso.vertex_map[s.name]) if s.is_vertex else P(iso.port_map[s.name])
    return Graph.build([iso.vertex_map[v] for v in g.vertices],
                       [(iso.edge_map[e.id], slot(e.ends[0]), slot(e.ends[1])) for e in g.edges],
                       [iso.port_map[p] for p in g.boundary], check=False)


def _vertex_invariant(g: Graph, v: str) -> Tuple[int, int, int]:
    loops = legs = 0
    for eid, _ in g.flags(v):
        c = g.classify(eid)
        if c is EdgeClass.LOOP:
            loops += 1
        elif c is EdgeClass.LEG:
            legs += 1
    return (g.valence(v), loops, legs)


def _edge_sig(e: Edge, vmap: Dict[str, int]) -> Tuple[int, int]:
    return tuple(sorted(vmap[s.name] if s.is_vertex else -1 for s in e.ends))


def isomorphisms(g: Graph, h: Graph, boundary_fixed: bool = False) -> Iterator[Isomorphism]:
    """All isomorphisms g -> h in a deterministic order."""
    if g.signature() != h.signature():
        return
    if boundary_fixed and g.boundary != h.boundary:
        return
    gv, hv = list(g.vertices), list(h.vertices)
    ginv = {v: _vertex_invariant(g, v) for v in gv}
    hinv = {v: _vertex_invariant(h, v) for v in hv}
    if sorted(ginv.values()) != sorted(hinv.values()):
        return
    hidx = {v: i for i, v in enumerate(hv)}
    hgroups: Dict[Tuple[int, int], List[Edge]] = {}
    for e in h.edges:
        hgroups.setdefault(_edge_sig(e, hidx), []).append(e)

    def vertex_assignments(i, used, acc):
        if i == len(gv):
            yield dict(acc)
            return
        v = gv[i]
        for w in hv:
            if w in used or hinv[w] != ginv[v]:
                continue
            acc[v] = w
            used.add(w)
            yield from vertex_assignments(i + 1, used, acc)
            used.discard(w)
            del acc[v]

    for vmap in vertex_assignments(0, set(), {}):
        gidx = {v: hidx[vmap[v]] for v in gv}
        ggroups: Dict[Tuple[int, int], List[Edge]] = {}
        for e in g.edges:
            ggroups.setdefault(_edge_sig(e, gidx), []).append(e)
        if {k: len(x) for k, x in ggroups.items()} != {k: len(x) for k, x in hgroups.items()}:
            continue
        keys = sorted(ggroups)
        choices = []
        pinned_ok = True
        for k in keys:
            src, dst = ggroups[k], hgroups[k]
            if boundary_fixed and -1 in k:
                # legs are pinned by their port names
                byport = {}
                for e in dst:
                    for s in e.ends:
                        if not s.is_vertex:
                            byport[s.name] = e
                perm = []
                for e in src:
                    p = next(s.name for s in e.ends if not s.is_vertex)
                    if p not in byport:
                        pinned_ok = False
                        break
                    perm.append(byport[p])
                if k == (-1, -1):
                    perm = [dst[0]]
                choices.append([(src, perm)])
            else:
                choices.append([(src, list(p)) for p in itertools.permutations(dst)])
        if not pinned_ok:
            continue
        for combo in itertools.product(*choices):
            emap: Dict[str, str] = {}
            pmaps: List[List[Dict[str, str]]] = []
            for src, dst in combo:
                for a, b in zip(src, dst):
                    emap[a.id] = b.id
                    aps = [s.name for s in a.ends if not s.is_vertex]
                    bps = [s.name for s in b.ends if not s.is_vertex]
                    if len(aps) == 1:
                        pmaps.append([{aps[0]: bps[0]}])
                    elif len(aps) == 2:
                        opts = [dict(zip(aps, bps)), dict(zip(aps, reversed(bps)))]
                        if boundary_fixed:
                            opts = [o for o in opts if all(x == y for x, y in o.items())]
                        pmaps.append(opts)
            for pc in itertools.product(*pmaps):
                pmap: Dict[str, str] = {}
                for d in pc:
                    pmap.update(d)
                yield Isomorphism(dict(vmap), emap, pmap)


def isomorphism(g: Graph, h: Graph, boundary_fixed: bool = False) -> Optional[Isomorphism]:
    return next(isomorphisms(g, h, boundary_fixed), None)


def automorphisms(g: Graph) -> List[Isomorphism]:
    return list(isomorphisms(g, g))


# -- canonical forms ---------------------------------------------------------

def _code(g: Graph, order: Sequence[str]) -> Tuple[Tuple[int, int], ...]:
    idx = {v: i for i, v in enumerate(order)}
    return tuple(sorted(_edge_sig(e, idx) for e in g.edges))


def canonical_code(g: Graph) -> Tuple:
    return _canonical(g)[0]


def _canonical(g: Graph):
    inv = {v: _vertex_invariant(g, v) for v in g.vertices}
    # vertices are pre-sorted by invariant; only permute within invariant blocks
    blocks: Dict[Tuple, List[str]] = {}
    for v in g.vertices:
        blocks.setdefault(inv[v], []).append(v)
    keys = sorted(blocks, reverse=True)
    best = None
    best_order = None
    for perms in itertools.product(*(itertools.permutations(blocks[k]) for k in keys)):
        order = [v for p in perms for v in p]
        code = _code(g, order)
        if best is None or code < best:
            best, best_order = code, order
    head = tuple(inv[v] for v in best_order) if best_order else ()
    return (head, best), best_order or []


def canonicalize(g: Graph) -> Tuple[Graph, Isomorphism]:
    """Canonical representative of the isomorphism class of ``g`` and an iso onto it."""
    (head, code), order = _canonical(g)
    vmap = {v: f"v{i}" for i, v in enumerate(order)}
    idx = {v: i for i, v in enumerate(order)}
    es = sorted(g.edges, key=lambda e: (_edge_sig(e, idx), e.id))
    emap: Dict[str, str] = {}
    pmap: Dict[str, str] = {}
    edges = []
    nport = 0
    for k, e in enumerate(es):
        emap[e.id] = f"e{k}"
        ends = sorted(e.ends, key=lambda s: idx[s.name] if s.is_vertex else -1)
        new = []
        for s in ends:
            if s.is_vertex:
                new.append(V(vmap[s.name]))
            else:
                pmap[s.name] = f"p{nport}"
                nport += 1
                new.append(P(pmap[s.name]))
        edges.append((f"e{k}", new[0], new[1]))
    cg = Graph.build([vmap[v] for v in order], edges, check=False)
    return cg, Isomorphism(vmap, emap, pmap)


def graph_key(g: Graph) -> str:
    """Compact string naming the isomorphism class of ``g``."""
    head, code = canonical_code(g)
    return f"{len(head)}|" + ",".join(f"{a}.{b}" for a, b in code)


# -- enumeration -------------------------------------------------------------

MAX_ENUMERATION_EDGES = 8


def enumerate_graphs(max_vertices: int, max_edges: int) -> List[Graph]:
    """All connected graphs within the bounds, one canonical graph per iso class."""
    if max_vertices < 0 or max_edges < 1:
        raise GraphError("need max_vertices >= 0 and max_edges >= 1")
    if max_edges > MAX_ENUMERATION_EDGES or max_vertices > 4:
        raise GraphError("bounds exceed the enumeration budget")
    out = [canonicalize(edge_unit())[0]]
    seen = set()
    for nv in range(1, max_vertices + 1):
        names = [f"v{i}" for i in range(nv)]
        kinds = [(i, j) for i in range(nv) for j in range(i, nv)] + [(-1, i) for i in range(nv)]
        for ne in range(1, max_edges + 1):
            for combo in itertools.combinations_with_replacement(kinds, ne):
                edges = []
                for k, (a, b) in enumerate(combo):
                    ea = P(f"p{k}") if a == -1 else V(names[a])
                    edges.append((f"e{k}", ea, V(names[b])))
                try:
                    g = Graph.build(names, edges)
                except GraphError:
                    continue
                cg, _ = canonicalize(g)
                if cg in seen:
                    continue
                seen.add(cg)
                out.append(cg)
    return sorted(out, key=lambda g: (g.signature(), canonical_code(g)))
