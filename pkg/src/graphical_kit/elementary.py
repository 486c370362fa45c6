"""The four elementary maps into a graph G.

Each constructor takes the *target* G and a datum and returns the map from
the derived source.  Fresh names are deterministic:

* contracting the edge between ``x`` and ``y`` merges them into ``x*y``
  (atoms are sorted, so ``(x*y)*z == x*(y*z)``);
* snipping ``l`` leaves legs ``l#1`` and ``l#2`` with ports of the same names;
* subdividing ``b`` gives ``b#1``, a new vertex ``b#v`` and ``b#2``;
* deleting an outer vertex ``v`` frees its inner edge ``c`` at a port ``c@v``.
"""
from __future__ import annotations

from functools import lru_cache
from typing import List, NamedTuple, Optional

from .gmap import Embedding, GraphicalMap
from .graph import EdgeClass, Graph, GraphError, P, V, is_outer_vertex

# Outer faces delete loops along with the vertex; set to True to count loop
# half-edges against outerness instead.
OUTER_LOOPS_BLOCK = False

KINDS = ("inner", "outer", "snip", "degen")
COFACE_KINDS = ("inner", "outer", "snip")


class ElementaryError(ValueError):
    pass


class Step(NamedTuple):
    kind: str
    datum: str
    keep: Optional[str] = None

    def to_json(self) -> dict:
        d = {"kind": self.kind, "datum": self.datum}
        if self.keep is not None:
            d["keep"] = self.keep
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Step":
        if d["kind"] not in KINDS:
            raise ElementaryError(f"unknown step kind {d['kind']!r}")
        return cls(d["kind"], d["datum"], d.get("keep"))

    @property
    def is_coface(self) -> bool:
        return self.kind in COFACE_KINDS

    def __str__(self) -> str:
        sym = {"inner": "d", "outer": "d", "snip": "d~", "degen": "s"}[self.kind]
        extra = f"/{self.keep}" if self.keep else ""
        return f"{sym}[{self.kind}:{self.datum}{extra}]"


def merge_name(x: str, y: str) -> str:
    return "*".join(sorted(x.split("*") + y.split("*")))


def _build(vertices, edges, what):
    try:
        return Graph.build(vertices, edges)
    except GraphError as exc:
        raise ElementaryError(f"{what}: {exc}") from None


def inner_coface(g: Graph, b: str) -> GraphicalMap:
    """Contract the inner edge ``b``; the merged vertex goes to the barbell."""
    if b not in g.edge_index:
        raise ElementaryError(f"unknown edge {b!r}")
    if g.classify(b) is not EdgeClass.INNER:
        raise ElementaryError(f"edge {b!r} is not an inner edge")
    x, y = g.endpoints(b)
    m = merge_name(x, y)
    if m in g.vertices:
        raise ElementaryError(f"fresh vertex name {m!r} already in use")
    if len(g.edges) == 1:
        raise ElementaryError("contraction would leave a vertex with no edges")

    def slot(s):
        return V(m) if s.is_vertex and s.name in (x, y) else s

    edges = [(e.id, slot(e.ends[0]), slot(e.ends[1])) for e in g.edges if e.id != b]
    verts = [v for v in g.vertices if v not in (x, y)] + [m]
    src = _build(verts, edges, "inner coface")
    e1 = {v: Embedding.corolla(v) for v in verts if v != m}
    e1[m] = Embedding(frozenset([x, y]), frozenset([b]))
    return GraphicalMap.make(src, g, {e.id: e.id for e in src.edges}, e1)


def outer_coface(g: Graph, v: str, keep: Optional[str] = None) -> GraphicalMap:
    """Delete the outer vertex ``v`` with its legs and loops.

    On a one-vertex graph the result is eta and ``keep`` names the leg that
    survives as its edge.
    """
    if v not in g.vertices:
        raise ElementaryError(f"unknown vertex {v!r}")
    if len(g.vertices) == 1:
        if keep is None or keep not in g.edge_index or g.classify(keep) is not EdgeClass.LEG:
            raise ElementaryError("deleting the last vertex needs a leg to keep")
        e = g.edge(keep)
        port = next(s for s in e.ends if not s.is_vertex)
        src = _build([], [(keep, port, P(f"{keep}@{v}"))], "outer coface")
        return GraphicalMap.make(src, g, {keep: keep}, {})
    if keep is not None:
        raise ElementaryError("a kept leg only applies to one-vertex graphs")
    if not is_outer_vertex(g, v, loops_block=OUTER_LOOPS_BLOCK):
        raise ElementaryError(f"vertex {v!r} is not outer")
    edges = []
    for e in g.edges:
        a, b = e.ends
        at_v = [s.is_vertex and s.name == v for s in e.ends]
        if not any(at_v):
            edges.append((e.id, a, b))
        elif all(at_v) or not all(s.is_vertex for s in e.ends):
            continue  # loop or leg of v
        else:
            other = b if at_v[0] else a
            edges.append((e.id, other, P(f"{e.id}@{v}")))
    src = _build([w for w in g.vertices if w != v], edges, "outer coface")
    return GraphicalMap.make(src, g, {e.id: e.id for e in src.edges},
                             {w: Embedding.corolla(w) for w in src.vertices})


def can_snip(g: Graph, l: str) -> bool:
    if l not in g.edge_index:
        return False
    c = g.classify(l)
    return c is EdgeClass.LOOP or (c is EdgeClass.INNER and not g.is_bridge(l))


def cosnip(g: Graph, l: str) -> GraphicalMap:
    """Cut the edge ``l`` into two legs; ``l`` must be a loop or lie on a cycle."""
    if l not in g.edge_index:
        raise ElementaryError(f"unknown edge {l!r}")
    if not can_snip(g, l):
        raise ElementaryError(f"edge {l!r} cannot be snipped (not a loop or on a cycle)")
    e = g.edge(l)
    edges = [(x.id, *x.ends) for x in g.edges if x.id != l]
    edges.append((f"{l}#1", e.ends[0], P(f"{l}#1")))
    edges.append((f"{l}#2", e.ends[1], P(f"{l}#2")))
    src = _build(g.vertices, edges, "cosnip")
    e0 = {x.id: x.id for x in src.edges}
    e0[f"{l}#1"] = e0[f"{l}#2"] = l
    return GraphicalMap.make(src, g, e0, {w: Embedding.corolla(w) for w in g.vertices})


def codegeneracy(g: Graph, b: str) -> GraphicalMap:
    """Subdivide ``b`` by a new two-valent vertex sent to ``eta_b``."""
    if b not in g.edge_index:
        raise ElementaryError(f"unknown edge {b!r}")
    u = f"{b}#v"
    if u in g.vertices:
        raise ElementaryError(f"fresh vertex name {u!r} already in use")
    e = g.edge(b)
    edges = [(x.id, *x.ends) for x in g.edges if x.id != b]
    edges.append((f"{b}#1", e.ends[0], V(u)))
    edges.append((f"{b}#2", V(u), e.ends[1]))
    src = _build(list(g.vertices) + [u], edges, "codegeneracy")
    e0 = {x.id: x.id for x in src.edges}
    e0[f"{b}#1"] = e0[f"{b}#2"] = b
    e1 = {w: Embedding.corolla(w) for w in g.vertices}
    e1[u] = Embedding.unit(b)
    return GraphicalMap.make(src, g, e0, e1)


@lru_cache(maxsize=1 << 18)
def apply_step(g: Graph, step: Step) -> GraphicalMap:
    if step.kind == "inner":
        return inner_coface(g, step.datum)
    if step.kind == "outer":
        return outer_coface(g, step.datum, step.keep)
    if step.kind == "snip":
        return cosnip(g, step.datum)
    if step.kind == "degen":
        return codegeneracy(g, step.datum)
    raise ElementaryError(f"unknown step kind {step.kind!r}")


def available_steps(g: Graph, kinds=KINDS) -> List[Step]:
    """Every elementary step whose target is ``g``, in a fixed order."""
    out: List[Step] = []
    if "inner" in kinds:
        if len(g.edges) > 1:
            out += [Step("inner", b) for b in g.inner_edges()]
    if "outer" in kinds and g.vertices:
        if len(g.vertices) == 1:
            (v,) = g.vertices
            out += [Step("outer", v, leg) for leg in g.legs()]
        else:
            out += [Step("outer", v) for v in g.vertices
                    if is_outer_vertex(g, v, loops_block=OUTER_LOOPS_BLOCK)]
    if "snip" in kinds:
        out += [Step("snip", e.id) for e in g.edges if can_snip(g, e.id)]
    if "degen" in kinds:
        out += [Step("degen", e.id) for e in g.edges]
    return out
