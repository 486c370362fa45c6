"""Finite presheaves on a truncated skeleton of the graphical category.

A :class:`Skeleton` holds one canonical graph per isomorphism class within a
budget, every morphism between them, and a (lazily filled) composition table.
Morphisms are referred to by integer ids throughout.

A :class:`GraphicalSet` stores, for each object, a finite list of element
labels, and for each morphism ``f: S -> T`` the restriction ``X_f`` as a tuple
of indices (``X_f[x]`` is an index into ``X_S`` for ``x`` an index into
``X_T``).

Segal and Kan verdicts are only as good as the truncation: an object whose
Segal core or horn needs a generator from outside the skeleton is skipped and
listed under ``truncated`` in the report.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .elementary import COFACE_KINDS, Step, apply_step, available_steps
from .gmap import GraphicalMap, MapError, compose, enumerate_maps, iso_map
from .graph import Graph, canonicalize, corolla, enumerate_graphs, graph_key


class PresheafError(ValueError):
    pass


# -- skeleton ----------------------------------------------------------------

class Skeleton:
    def __init__(self, max_vertices: int, max_edges: int, trees_only: bool = False):
        self.max_vertices = max_vertices
        self.max_edges = max_edges
        self.trees_only = trees_only
        objs = enumerate_graphs(max_vertices, max_edges)
        if trees_only:
            objs = [g for g in objs if g.is_tree()]
        self.objects: Tuple[Graph, ...] = tuple(objs)
        self.index: Dict[Graph, int] = {g: i for i, g in enumerate(self.objects)}
        self.keys = [graph_key(g) for g in self.objects]
        self.morphisms: List[GraphicalMap] = []
        self.src: List[int] = []
        self.tgt: List[int] = []
        self.hom: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self.mor_index: Dict[GraphicalMap, int] = {}
        for i, g in enumerate(self.objects):
            for j, h in enumerate(self.objects):
                ids = []
                for m in enumerate_maps(g, h):
                    self.mor_index[m] = len(self.morphisms)
                    ids.append(len(self.morphisms))
                    self.morphisms.append(m)
                    self.src.append(i)
                    self.tgt.append(j)
                self.hom[(i, j)] = tuple(ids)
        self.into: Dict[int, List[int]] = {j: [] for j in range(len(self.objects))}
        for m, j in enumerate(self.tgt):
            self.into[j].append(m)
        self.identities = [self.mor_index[_identity(g)] for g in self.objects]
        self._comp: Dict[Tuple[int, int], int] = {}

    @property
    def budget(self) -> Tuple[int, int, bool]:
        return (self.max_vertices, self.max_edges, self.trees_only)

    def __len__(self) -> int:
        return len(self.objects)

    def __repr__(self) -> str:
        return (f"Skeleton(V<={self.max_vertices}, E<={self.max_edges}, "
                f"trees_only={self.trees_only}: {len(self.objects)} objects, "
                f"{len(self.morphisms)} morphisms)")

    def compose(self, g: int, f: int) -> int:
        """Id of ``g . f``."""
        key = (g, f)
        out = self._comp.get(key)
        if out is None:
            if self.tgt[f] != self.src[g]:
                raise PresheafError("morphisms are not composable")
            m = compose(self.morphisms[g], self.morphisms[f])
            try:
                out = self.mor_index[m]
            except KeyError:
                raise PresheafError("composite escaped the skeleton") from None
            self._comp[key] = out
        return out

    def composable_pairs(self) -> Iterator[Tuple[int, int, int]]:
        """Every ``(g, f, g . f)`` with ``f`` then ``g``."""
        n = len(self.objects)
        for j in range(n):
            for f in self.into[j]:
                for k in range(n):
                    for g in self.hom[(j, k)]:
                        yield g, f, self.compose(g, f)

    def object_id(self, g: Graph) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise PresheafError("graph is not an object of the skeleton") from None

    def find_object(self, g: Graph) -> Optional[int]:
        """Skeleton id of any graph isomorphic to ``g``, or None."""
        return self.index.get(canonicalize(g)[0])

    def to_skeleton(self, m: GraphicalMap) -> Optional[int]:
        """Id of ``m`` after renaming its source onto the skeleton (target must be an object)."""
        canon, iso = canonicalize(m.source)
        if canon not in self.index:
            return None
        moved = compose(m, iso_map(canon, m.source, iso.inverse()))
        return self.mor_index[moved]

    def morphism_key(self, f: int) -> str:
        i, j = self.src[f], self.tgt[f]
        return f"{self.keys[i]}>{self.keys[j]}#{self.hom[(i, j)].index(f)}"

    def verify(self) -> List[str]:
        """Closure, units and associativity of the composition table."""
        problems = []
        for f, (i, j) in enumerate(zip(self.src, self.tgt)):
            if self.compose(self.identities[j], f) != f or self.compose(f, self.identities[i]) != f:
                problems.append(f"identity law fails at {self.morphism_key(f)}")
        n = len(self.objects)
        for j in range(n):
            for f in self.into[j]:
                for k in range(n):
                    for g in self.hom[(j, k)]:
                        gf = self.compose(g, f)
                        for l in range(n):
                            for h in self.hom[(k, l)]:
                                if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                                    problems.append("associativity fails at "
                                                    f"{self.morphism_key(h)}, {self.morphism_key(g)}, "
                                                    f"{self.morphism_key(f)}")
        return problems


def _identity(g: Graph) -> GraphicalMap:
    from .gmap import identity
    return identity(g)


MAX_SKELETON_VERTICES = 3
MAX_SKELETON_EDGES = 6


@lru_cache(maxsize=8)
def build_skeleton(max_vertices: int, max_edges: int, trees_only: bool = False) -> Skeleton:
    if max_vertices > MAX_SKELETON_VERTICES or max_edges > MAX_SKELETON_EDGES:
        raise PresheafError(f"skeleton budget is at most ({MAX_SKELETON_VERTICES}, "
                            f"{MAX_SKELETON_EDGES})")
    if max_vertices < 0 or max_edges < 1:
        raise PresheafError("skeleton budget must be non-negative with at least one edge")
    return Skeleton(max_vertices, max_edges, trees_only)


# -- presheaves --------------------------------------------------------------

@dataclass
class GraphicalSet:
    skeleton: Skeleton
    sets: List[List]
    actions: Dict[int, Tuple[int, ...]]
    name: str = ""

    def size(self, obj: int) -> int:
        return len(self.sets[obj])

    def act(self, f: int, x: int) -> int:
        return self.actions[f][x]

    def __repr__(self) -> str:
        sizes = ",".join(str(len(s)) for s in self.sets)
        return f"GraphicalSet({self.name or '?'}: [{sizes}])"

    def to_json(self) -> dict:
        sk = self.skeleton
        sets = {sk.keys[i]: [str(x) for x in xs] for i, xs in enumerate(self.sets)}
        actions = {}
        for f, table in sorted(self.actions.items()):
            src, tgt = sk.src[f], sk.tgt[f]
            actions[sk.morphism_key(f)] = {str(self.sets[tgt][x]): str(self.sets[src][y])
                                           for x, y in enumerate(table)}
        return {"name": self.name,
                "skeleton": {"maxV": sk.max_vertices, "maxE": sk.max_edges,
                             "trees_only": sk.trees_only},
                "sets": sets, "actions": actions}

    @classmethod
    def from_json(cls, data: dict, skeleton: Optional[Skeleton] = None) -> "GraphicalSet":
        b = data["skeleton"]
        sk = skeleton or build_skeleton(b["maxV"], b["maxE"], bool(b.get("trees_only")))
        if (sk.max_vertices, sk.max_edges, sk.trees_only) != (b["maxV"], b["maxE"], bool(b.get("trees_only"))):
            raise PresheafError("presheaf was written for a different skeleton")
        by_key = {k: i for i, k in enumerate(sk.keys)}
        sets: List[List] = [[] for _ in sk.objects]
        for k, xs in data["sets"].items():
            if k not in by_key:
                raise PresheafError(f"unknown object key {k!r}")
            sets[by_key[k]] = list(xs)
        pos = [{x: n for n, x in enumerate(xs)} for xs in sets]
        mor_by_key = {sk.morphism_key(f): f for f in range(len(sk.morphisms))}
        actions = {}
        for k, table in data["actions"].items():
            if k not in mor_by_key:
                raise PresheafError(f"unknown morphism key {k!r}")
            f = mor_by_key[k]
            src, tgt = sk.src[f], sk.tgt[f]
            try:
                actions[f] = tuple(pos[src][table[str(x)]] for x in sets[tgt])
            except KeyError as exc:
                raise PresheafError(f"action of {k!r} is incomplete: {exc}") from None
        return cls(sk, sets, actions, data.get("name", ""))


def dumps(X: GraphicalSet) -> str:
    return json.dumps(X.to_json(), sort_keys=True)


def representable(sk: Skeleton, g: int) -> GraphicalSet:
    """Yoneda presheaf: ``Hom(-, G)`` acting by precomposition."""
    if not 0 <= g < len(sk.objects):
        raise PresheafError("object not in skeleton")
    sets = [list(sk.hom[(h, g)]) for h in range(len(sk.objects))]
    pos = [{m: n for n, m in enumerate(xs)} for xs in sets]
    actions = {}
    for f in range(len(sk.morphisms)):
        s, t = sk.src[f], sk.tgt[f]
        actions[f] = tuple(pos[s][sk.compose(x, f)] for x in sets[t])
    return GraphicalSet(sk, sets, actions, f"Hom(-,{sk.keys[g]})")


def terminal(sk: Skeleton) -> GraphicalSet:
    return GraphicalSet(sk, [["*"] for _ in sk.objects],
                        {f: (0,) for f in range(len(sk.morphisms))}, "terminal")


def validate_presheaf(X: GraphicalSet, limit: int = 20) -> List[str]:
    """Empty iff ``X`` respects identities and composition (contravariantly)."""
    sk = X.skeleton
    report: List[str] = []

    def note(msg):
        if len(report) < limit:
            report.append(msg)

    for f in range(len(sk.morphisms)):
        table = X.actions.get(f)
        s, t = sk.src[f], sk.tgt[f]
        if table is None or len(table) != X.size(t) or any(not 0 <= y < X.size(s) for y in table):
            note(f"action of {sk.morphism_key(f)} is not a function X_T -> X_S")
    if report:
        return report
    for i, ident in enumerate(sk.identities):
        if X.actions[ident] != tuple(range(X.size(i))):
            note(f"identity of {sk.keys[i]} does not act as the identity")
    for g, f, gf in sk.composable_pairs():
        ag, af, agf = X.actions[g], X.actions[f], X.actions[gf]
        for x in range(len(ag)):
            if agf[x] != af[ag[x]]:
                note(f"composition fails for ({sk.morphism_key(g)}, {sk.morphism_key(f)}) "
                     f"at element {X.sets[sk.tgt[g]][x]!r}")
                break
    return report


# -- sub-objects of representables ---------------------------------------------

@dataclass
class SubPresheaf:
    skeleton: Skeleton
    obj: int
    generators: Tuple[int, ...]
    elements: Dict[int, frozenset] = field(default_factory=dict)
    truncated: bool = False

    def __contains__(self, m: int) -> bool:
        return m in self.elements.get(self.skeleton.src[m], frozenset())

    def size(self) -> int:
        return sum(len(v) for v in self.elements.values())


def generated_subpresheaf(sk: Skeleton, g: int, generators: Sequence[int],
                          truncated: bool = False) -> SubPresheaf:
    gens = tuple(dict.fromkeys(generators))
    for m in gens:
        if sk.tgt[m] != g:
            raise PresheafError("generator does not land in the object")
    elements: Dict[int, set] = {h: set() for h in range(len(sk.objects))}
    for m in gens:
        for f in sk.into[sk.src[m]]:
            elements[sk.src[f]].add(sk.compose(m, f))
    return SubPresheaf(sk, g, gens, {h: frozenset(v) for h, v in elements.items()}, truncated)


def segal_core(sk: Skeleton, g: int) -> SubPresheaf:
    """Generated by one corolla-shaped map per vertex of ``G``."""
    G = sk.objects[g]
    if not G.vertices:
        raise PresheafError("eta has no Segal core")
    gens = []
    truncated = False
    for v in G.vertices:
        c = sk.find_object(corolla(G.valence(v) - 1))
        if c is None:
            truncated = True
            continue
        hit = next((m for m in sk.hom[(c, g)]
                    if sk.morphisms[m].e1[sk.objects[c].vertices[0]].vertices == frozenset([v])
                    and not sk.morphisms[m].e1[sk.objects[c].vertices[0]].edges), None)
        if hit is None:
            raise PresheafError(f"no corolla map onto vertex {v!r}")
        gens.append(hit)
    return generated_subpresheaf(sk, g, gens, truncated)


def inner_horn(sk: Skeleton, g: int, e: str) -> SubPresheaf:
    """Generated by every elementary coface into ``G`` except the contraction of ``e``."""
    G = sk.objects[g]
    if e not in G.edge_index or e not in G.inner_edges():
        raise PresheafError(f"{e!r} is not an inner edge")
    gens = []
    truncated = False
    for step in available_steps(G, COFACE_KINDS):
        if step == Step("inner", e):
            continue
        m = sk.to_skeleton(apply_step(G, step))
        if m is None:
            truncated = True
            continue
        gens.append(m)
    return generated_subpresheaf(sk, g, gens, truncated)


# -- maps out of sub-objects ---------------------------------------------------

@dataclass(frozen=True)
class NaturalTransformation:
    """A natural family ``A => X``, recorded by its value on each generator."""
    sub: SubPresheaf = field(compare=False, repr=False)
    values: Tuple[int, ...]

    def component(self, X: GraphicalSet, m: int) -> int:
        """Value on the element ``m`` of the sub-object."""
        sk = self.sub.skeleton
        for gen, val in zip(self.sub.generators, self.values):
            for f in sk.hom[(sk.src[m], sk.src[gen])]:
                if sk.compose(gen, f) == m:
                    return X.act(f, val)
        raise PresheafError("element is not in the sub-object")


def _generator_tables(A: SubPresheaf, X: GraphicalSet):
    """For each generator, the consistent values and what they force on elements."""
    sk = A.skeleton
    out = []
    for gen in A.generators:
        s = sk.src[gen]
        reach = [(sk.compose(gen, f), f) for f in sk.into[s]]
        tables = {}
        for x in range(X.size(s)):
            forced: Dict[int, int] = {}
            ok = True
            for elem, f in reach:
                y = X.actions[f][x]
                if forced.setdefault(elem, y) != y:
                    ok = False
                    break
            if ok:
                tables[x] = forced
        out.append(tables)
    return out


def hom_from_sub(A: SubPresheaf, X: GraphicalSet) -> List[NaturalTransformation]:
    """All natural transformations ``A => X``, by backtracking over generator values."""
    if A.skeleton is not X.skeleton:
        raise PresheafError("sub-object and presheaf live on different skeletons")
    tables = _generator_tables(A, X)
    k = len(tables)
    # pairwise agreement on shared elements, bucketed by signature
    shared = {}
    for i in range(k):
        ki = set(next(iter(tables[i].values())).keys()) if tables[i] else set()
        for j in range(i + 1, k):
            kj = set(next(iter(tables[j].values())).keys()) if tables[j] else set()
            shared[(i, j)] = tuple(sorted(ki & kj))
    sig_index: Dict[Tuple[int, int], Dict[Tuple, set]] = {}
    for (i, j), keys in shared.items():
        buckets: Dict[Tuple, set] = {}
        for y, t in tables[j].items():
            buckets.setdefault(tuple(t[e] for e in keys), set()).add(y)
        sig_index[(i, j)] = buckets
    results: List[Tuple[int, ...]] = []

    def search(chosen: List[int]):
        j = len(chosen)
        if j == k:
            results.append(tuple(chosen))
            return
        cands = set(tables[j])
        for i, x in enumerate(chosen):
            keys = shared[(i, j)]
            cands &= sig_index[(i, j)].get(tuple(tables[i][x][e] for e in keys), set())
            if not cands:
                return
        for y in sorted(cands):
            chosen.append(y)
            search(chosen)
            chosen.pop()

    search([])
    return [NaturalTransformation(A, v) for v in results]


def restrict(X: GraphicalSet, A: SubPresheaf, x: int) -> Tuple[int, ...]:
    """Generator values of the restriction of ``x`` in ``X_G`` to ``A``."""
    return tuple(X.act(gen, x) for gen in A.generators)


# -- Segal and Kan -------------------------------------------------------------

@dataclass
class CheckReport:
    condition: str
    budget: Tuple
    checked: int = 0
    failures: List[dict] = field(default_factory=list)
    truncated: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {"condition": self.condition, "budget": list(self.budget), "ok": self.ok,
                "checked": self.checked, "failures": self.failures[:10],
                "failure_count": len(self.failures), "truncated": self.truncated}


def _compare(X: GraphicalSet, A: SubPresheaf, where: dict, strict: bool) -> List[dict]:
    horns = {t.values for t in hom_from_sub(A, X)}
    fill: Dict[Tuple, List] = {}
    for x in range(X.size(A.obj)):
        fill.setdefault(restrict(X, A, x), []).append(x)
    out = []
    for h in sorted(horns):
        n = len(fill.get(h, ()))
        if n == 0 or (strict and n > 1):
            out.append(dict(where, element=list(h), fillers=n))
    return out


def satisfies_segal(X: GraphicalSet) -> CheckReport:
    sk = X.skeleton
    rep = CheckReport("segal", sk.budget)
    for g, G in enumerate(sk.objects):
        if not G.vertices:
            continue
        core = segal_core(sk, g)
        if core.truncated:
            rep.truncated.append(sk.keys[g])
            continue
        rep.checked += 1
        rep.failures += _compare(X, core, {"object": sk.keys[g]}, strict=True)
    return rep


def fillers(X: GraphicalSet, g: int, e: str, horn: NaturalTransformation) -> List[int]:
    A = horn.sub
    if A.obj != g:
        raise PresheafError("horn belongs to a different object")
    return [x for x in range(X.size(g)) if restrict(X, A, x) == horn.values]


def satisfies_kan(X: GraphicalSet, strict: bool = True) -> CheckReport:
    sk = X.skeleton
    rep = CheckReport("strict-kan" if strict else "kan", sk.budget)
    for g, G in enumerate(sk.objects):
        for e in G.inner_edges():
            horn = inner_horn(sk, g, e)
            if horn.truncated:
                rep.truncated.append(f"{sk.keys[g]}:{e}")
                continue
            rep.checked += 1
            rep.failures += _compare(X, horn, {"object": sk.keys[g], "edge": e}, strict)
    return rep


# -- corruptions ---------------------------------------------------------------

def _rebuild(X: GraphicalSet, keep: List[List[int]], name: str) -> GraphicalSet:
    sk = X.skeleton
    pos = [{x: n for n, x in enumerate(xs)} for xs in keep]
    sets = [[X.sets[i][x] for x in xs] for i, xs in enumerate(keep)]
    actions = {}
    for f, table in X.actions.items():
        s, t = sk.src[f], sk.tgt[f]
        actions[f] = tuple(pos[s][table[x]] for x in keep[t])
    return GraphicalSet(sk, sets, actions, name)


def _upset(X: GraphicalSet, obj: int, x: int) -> set:
    """``(object, element)`` pairs that restrict to ``x`` along some morphism."""
    sk = X.skeleton
    up = {(obj, x)}
    frontier = [(obj, x)]
    while frontier:
        i, y = frontier.pop()
        for j in range(len(sk.objects)):
            for f in sk.hom[(i, j)]:
                for z, w in enumerate(X.actions[f]):
                    if w == y and (j, z) not in up:
                        up.add((j, z))
                        frontier.append((j, z))
    return up


def delete_upward(X: GraphicalSet, obj: int, x: int) -> GraphicalSet:
    """Remove ``x`` from ``X_obj`` together with every element restricting to it."""
    sk = X.skeleton
    dead = _upset(X, obj, x)
    keep = [[y for y in range(X.size(i)) if (i, y) not in dead] for i in range(len(sk.objects))]
    return _rebuild(X, keep, f"{X.name} minus {sk.keys[obj]}[{x}]")


def duplicate_upward(X: GraphicalSet, obj: int, x: int) -> GraphicalSet:
    """Double ``x`` and everything above it, glued along the rest of ``X``.

    A twin restricts to the twin of its restriction when that lies above
    ``x`` and to the original element otherwise.
    """
    sk = X.skeleton
    up = _upset(X, obj, x)
    twin: Dict[Tuple[int, int], int] = {}
    sets = [list(s) for s in X.sets]
    for i, y in sorted(up):
        twin[(i, y)] = len(sets[i])
        sets[i].append(f"{X.sets[i][y]}'")
    actions = {}
    for f, table in X.actions.items():
        s, t = sk.src[f], sk.tgt[f]
        extra = [twin.get((s, table[y]), table[y]) for i, y in sorted(up) if i == t]
        actions[f] = tuple(table) + tuple(extra)
    return GraphicalSet(sk, sets, actions, f"{X.name} doubled above {sk.keys[obj]}[{x}]")


def corruptions(X: GraphicalSet, limit: Optional[int] = None) -> Iterator[GraphicalSet]:
    """Systematic corrupted variants: one deletion and one doubling per object."""
    sk = X.skeleton
    made = 0
    for i in range(len(sk.objects)):
        if X.size(i) == 0:
            continue
        for variant in (delete_upward(X, i, 0), duplicate_upward(X, i, 0)):
            yield variant
            made += 1
            if limit is not None and made >= limit:
                return
