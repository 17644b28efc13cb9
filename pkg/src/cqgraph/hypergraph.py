"""Finite labelled hypergraphs and their morphism search.

A hypergraph has ``vcount`` vertices ``0..vcount-1`` and, per relation
symbol, an ordered list of hyperedges.  Each edge is a pair
``(source-tuple, target-tuple)`` of vertex ids whose lengths match the
symbol's sort.  Edge lists may contain duplicates: parallel edges with
identical tentacles are distinct edges, and morphisms carry explicit edge
maps for exactly that reason.

Morphism search is a backtracking enumeration over vertex images in index
order, pruning through edges as soon as all their tentacles are assigned.
The answer list is deterministic: vertex maps come out in lexicographic
order and edge images ascend within each vertex map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExhausted, ModelError


Edge = tuple  # (source vertex tuple, target vertex tuple)


class Hypergraph:
    """Immutable-by-convention hypergraph over dense vertex ids."""

    def __init__(self, vcount: int, edges: dict[str, list[Edge]] | None = None):
        if vcount < 0:
            raise ValueError("vcount must be a natural")
        self.vcount = vcount
        table: dict[str, tuple[Edge, ...]] = {}
        for sym in sorted(edges or {}):
            rows = tuple((tuple(s), tuple(t)) for s, t in edges[sym])
            for s, t in rows:
                if any(not (0 <= v < vcount) for v in s + t):
                    raise ValueError(f"edge of {sym!r} mentions a vertex out of range")
            if rows:
                table[sym] = rows
        self.edges = table

    def edge_count(self) -> int:
        return sum(len(rows) for rows in self.edges.values())

    def symbols(self) -> list[str]:
        return list(self.edges)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Hypergraph) and self.vcount == other.vcount
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.vcount, tuple(self.edges.items())))

    def __repr__(self) -> str:
        return f"Hypergraph({self.vcount} vertices, {self.edge_count()} edges)"


@dataclass(frozen=True)
class HgMorphism:
    """A vertex map plus one edge map per symbol, both total on the source."""

    vmap: tuple
    emaps: dict

    def __post_init__(self):
        object.__setattr__(self, "vmap", tuple(self.vmap))
        object.__setattr__(self, "emaps",
                           {k: tuple(v) for k, v in sorted(self.emaps.items())})

    def sort_key(self):
        return (self.vmap, tuple(self.emaps.items()))

    def __eq__(self, other):
        return (isinstance(other, HgMorphism) and self.vmap == other.vmap
                and self.emaps == other.emaps)

    def __hash__(self):
        return hash((self.vmap, tuple(self.emaps.items())))


def validate_morphism(f: HgMorphism, g: Hypergraph, h: Hypergraph) -> bool:
    """True iff f is a label-preserving morphism g -> h.

    Checks totality of both maps and commutation of the source/target
    squares on every edge.  Size mismatches are errors, not False.
    """
    if len(f.vmap) != g.vcount:
        raise ModelError("vertex map does not cover the source graph")
    if any(not (0 <= x < h.vcount) for x in f.vmap):
        raise ModelError("vertex map leaves the target graph")
    for sym, rows in g.edges.items():
        emap = f.emaps.get(sym, ())
        if len(emap) != len(rows):
            raise ModelError(f"edge map for {sym!r} does not cover the source graph")
        target_rows = h.edges.get(sym, ())
        if any(not (0 <= e < len(target_rows)) for e in emap):
            raise ModelError(f"edge map for {sym!r} leaves the target graph")
    for sym, rows in g.edges.items():
        emap = f.emaps.get(sym, ())
        target_rows = h.edges.get(sym, ())
        for i, (src, tgt) in enumerate(rows):
            img_src, img_tgt = target_rows[emap[i]]
            if tuple(f.vmap[v] for v in src) != img_src:
                return False
            if tuple(f.vmap[v] for v in tgt) != img_tgt:
                return False
    return True


def identity_morphism(g: Hypergraph) -> HgMorphism:
    return HgMorphism(tuple(range(g.vcount)),
                      {sym: tuple(range(len(rows))) for sym, rows in g.edges.items()})


def compose_morphisms(f: HgMorphism, k: HgMorphism) -> HgMorphism:
    """The composite g -> l of f: g -> h and k: h -> l."""
    vmap = tuple(k.vmap[x] for x in f.vmap)
    emaps = {}
    for sym, emap in f.emaps.items():
        outer = k.emaps.get(sym, ())
        emaps[sym] = tuple(outer[e] for e in emap)
    return HgMorphism(vmap, emaps)


class _Search:
    """Shared backtracking state for morphism and isomorphism search."""

    def __init__(self, g: Hypergraph, h: Hypergraph, pins, limit, budget, bijective):
        self.g = g
        self.h = h
        self.limit = limit
        self.budget = budget
        self.steps = 0
        self.bijective = bijective
        self.results: list[HgMorphism] = []

        self.vmap: list = [None] * g.vcount
        for v, img in (pins or {}).items():
            if not (0 <= v < g.vcount) or not (0 <= img < h.vcount):
                raise ModelError("pin outside the graphs")
            self.vmap[v] = img

        # image lookup: symbol -> tentacle tuple pair -> ascending edge ids
        self.h_index: dict[str, dict] = {}
        flat: dict[str, frozenset] = {}
        for sym, rows in h.edges.items():
            index: dict = {}
            for i, row in enumerate(rows):
                index.setdefault(row, []).append(i)
            self.h_index[sym] = index
            flat[sym] = frozenset(s + t for s, t in rows)

        # an edge becomes checkable at its last unpinned tentacle vertex;
        # precomputing that makes the hot loop a flat-set membership test
        self.fresh_at: list[list] = [[] for _ in range(g.vcount)]
        self.ready: list = []
        for sym, rows in g.edges.items():
            fset = flat.get(sym, frozenset())
            for i, (src, tgt) in enumerate(rows):
                verts = src + tgt
                ref = (sym, verts, fset)
                unpinned = [x for x in verts if self.vmap[x] is None]
                if unpinned:
                    self.fresh_at[max(unpinned)].append(ref)
                else:
                    self.ready.append(ref)

        self.root_break = None
        if not bijective and limit == 1 and not pins and g.vcount > 0 and h.vcount > 1:
            self.root_break = self.root_candidates()

        self.infeasible = False
        if bijective:
            self.used_vertex = [False] * h.vcount
            for img in self.vmap:
                if img is not None:
                    if self.used_vertex[img]:
                        self.infeasible = True  # two pins collide: no bijection
                    self.used_vertex[img] = True
            # class capacities per symbol, decremented as edges are committed
            self.capacity = {sym: {key: len(ids) for key, ids in index.items()}
                             for sym, index in self.h_index.items()}

    def tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExhausted(f"morphism search exceeded {self.budget} steps")

    def check_new_edges(self, refs) -> tuple[bool, list]:
        """Prune on edges whose tentacles are now fully assigned.

        In bijective mode the per-class capacities are decremented and the
        commitments returned so the caller can roll them back.
        """
        vmap = self.vmap
        if not self.bijective:
            for _, verts, fset in refs:
                if tuple(vmap[x] for x in verts) not in fset:
                    return False, ()
            return True, ()
        committed = []
        for sym, verts, _ in refs:
            arity = len(self.g.edges[sym][0][0])
            imgs = tuple(vmap[x] for x in verts)
            key = (imgs[:arity], imgs[arity:])
            cap = self.capacity.get(sym, {}).get(key, 0)
            if cap == 0:
                self.rollback(committed)
                return False, ()
            self.capacity[sym][key] = cap - 1
            committed.append((sym, key))
        return True, committed

    def rollback(self, committed):
        for sym, key in committed:
            self.capacity[sym][key] += 1

    def emit(self):
        """All edge maps compatible with the completed vertex map."""
        per_edge: dict[str, list[list[int]]] = {}
        for sym, rows in self.g.edges.items():
            cands = []
            index = self.h_index.get(sym, {})
            for src, tgt in rows:
                key = (tuple(self.vmap[v] for v in src), tuple(self.vmap[v] for v in tgt))
                ids = index.get(key)
                if not ids:
                    return False
                cands.append(ids)
            per_edge[sym] = cands

        if self.bijective:
            # capacities guarantee class counts match; pick the order-preserving
            # bijection inside each tentacle class
            emaps = {}
            for sym, cands in per_edge.items():
                taken: dict = {}
                emap = []
                for ids in cands:
                    k = taken.get(id(ids), 0)
                    # ids lists are shared objects per class, so id() keys the class
                    taken[id(ids)] = k + 1
                    emap.append(ids[k])
                emaps[sym] = tuple(emap)
            self.results.append(HgMorphism(tuple(self.vmap), emaps))
            return self.limit is not None and len(self.results) >= self.limit

        syms = list(per_edge)
        flat = [cands for sym in syms for cands in per_edge[sym]]
        sizes = [len(self.g.edges[sym]) for sym in syms]
        for combo in product(*flat):
            self.tick()
            emaps = {}
            pos = 0
            for sym, size in zip(syms, sizes):
                emaps[sym] = tuple(combo[pos:pos + size])
                pos += size
            self.results.append(HgMorphism(tuple(self.vmap), emaps))
            if self.limit is not None and len(self.results) >= self.limit:
                return True
        return False

    def run(self) -> list[HgMorphism]:
        if self.infeasible:
            return []
        # edges entirely inside the pinned region are checked once, up front
        ok, committed = self.check_new_edges(self.ready)
        if not ok:
            return []
        try:
            self.assign(0)
        finally:
            if self.bijective:
                self.rollback(committed)
        return self.results

    def root_candidates(self) -> list[int]:
        """Class representatives for the very first branching vertex.

        Only used for existence checks (limit 1, no pins): when exchanging
        two target vertices is an automorphism, any morphism through one
        can be rerouted through the other, so one representative suffices.
        Classes are the transitive closure over such transpositions.
        """
        h = self.h
        parent = list(range(h.vcount))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def is_swap_automorphism(a: int, b: int) -> bool:
            sub = {a: b, b: a}
            for rows in h.edges.values():
                swapped = sorted((tuple(sub.get(v, v) for v in s),
                                  tuple(sub.get(v, v) for v in t)) for s, t in rows)
                if swapped != sorted(rows):
                    return False
            return True

        for a in range(h.vcount):
            for b in range(a + 1, h.vcount):
                if find(a) != find(b) and is_swap_automorphism(a, b):
                    parent[find(b)] = find(a)
        return sorted({find(v) for v in range(h.vcount)})

    def assign(self, v: int) -> bool:
        if v == self.g.vcount:
            return self.emit()
        vmap = self.vmap
        if vmap[v] is not None:
            return self.assign(v + 1)
        fresh = self.fresh_at[v]
        if self.bijective:
            used = self.used_vertex
            for img in range(self.h.vcount):
                if used[img]:
                    continue
                self.tick()
                vmap[v] = img
                ok, committed = self.check_new_edges(fresh)
                if ok:
                    used[img] = True
                    stop = self.assign(v + 1)
                    used[img] = False
                    self.rollback(committed)
                    if stop:
                        vmap[v] = None
                        return True
                vmap[v] = None
            return False
        budget = self.budget
        images = range(self.h.vcount)
        if self.root_break and all(u is None for u in vmap[:v]):
            images = self.root_break
            self.root_break = None  # applies to the first branch only
        for img in images:
            self.steps += 1
            if budget is not None and self.steps > budget:
                raise BudgetExhausted(f"morphism search exceeded {budget} steps")
            vmap[v] = img
            ok = True
            for _, verts, fset in fresh:
                if tuple(vmap[x] for x in verts) not in fset:
                    ok = False
                    break
            if ok and self.assign(v + 1):
                vmap[v] = None
                return True
            vmap[v] = None
        return False


def find_morphisms(g: Hypergraph, h: Hypergraph,
                   pins: dict | None = None,
                   limit: int | None = None,
                   budget: int | None = None) -> list[HgMorphism]:
    """All morphisms g -> h extending pins, up to limit, in lexicographic order.

    ``pins`` partially pre-assigns the vertex map.  ``budget`` bounds the
    number of search steps; exceeding it raises :class:`BudgetExhausted`.
    An empty list means no morphism exists — never a cancelled search.
    """
    return _Search(g, h, pins, limit, budget, bijective=False).run()


def _degree_signature(g: Hypergraph):
    sigs: list[dict] = [dict() for _ in range(g.vcount)]
    for sym, rows in g.edges.items():
        for src, tgt in rows:
            for pos, v in enumerate(src):
                key = (sym, "s", pos)
                sigs[v][key] = sigs[v].get(key, 0) + 1
            for pos, v in enumerate(tgt):
                key = (sym, "t", pos)
                sigs[v][key] = sigs[v].get(key, 0) + 1
    return [frozenset(s.items()) for s in sigs]


def is_isomorphic(g: Hypergraph, h: Hypergraph,
                  pins: dict | None = None,
                  budget: int | None = None) -> HgMorphism | None:
    """An isomorphism g -> h (bijective vertex and edge maps), or None."""
    if g.vcount != h.vcount:
        return None
    if {s: len(r) for s, r in g.edges.items()} != {s: len(r) for s, r in h.edges.items()}:
        return None
    sig_g = _degree_signature(g)
    sig_h = _degree_signature(h)
    # frozensets only order by inclusion, so compare multisets by item lists
    if sorted(map(sorted, sig_g)) != sorted(map(sorted, sig_h)):
        return None
    if pins and any(sig_g[v] != sig_h[img] for v, img in pins.items()):
        return None
    search = _Search(g, h, pins, limit=1, budget=budget, bijective=True)
    found = search.run()
    return found[0] if found else None


def disjoint_union(g: Hypergraph, h: Hypergraph):
    """Coproduct g + h with its two injections; h's vertices are offset."""
    off = g.vcount
    edges: dict[str, list[Edge]] = {sym: list(rows) for sym, rows in g.edges.items()}
    for sym, rows in h.edges.items():
        edges.setdefault(sym, [])
        edges[sym].extend((tuple(v + off for v in s), tuple(v + off for v in t))
                          for s, t in rows)
    out = Hypergraph(g.vcount + h.vcount, edges)
    inl = HgMorphism(tuple(range(g.vcount)),
                     {sym: tuple(range(len(rows))) for sym, rows in g.edges.items()})
    inr_emaps = {}
    for sym, rows in h.edges.items():
        base = len(g.edges.get(sym, ()))
        inr_emaps[sym] = tuple(base + i for i in range(len(rows)))
    inr = HgMorphism(tuple(off + v for v in range(h.vcount)), inr_emaps)
    return out, inl, inr


def hypergraph_to_json(g: Hypergraph) -> str:
    doc = {"vcount": g.vcount,
           "edges": {sym: [[list(s), list(t)] for s, t in rows]
                     for sym, rows in g.edges.items()}}
    return json.dumps(doc)


def hypergraph_from_json(text: str) -> Hypergraph:
    doc = json.loads(text)
    return Hypergraph(doc["vcount"],
                      {sym: [(tuple(s), tuple(t)) for s, t in rows]
                       for sym, rows in doc.get("edges", {}).items()})


def hypergraph_to_dot(g: Hypergraph, name: str = "G") -> str:
    """DOT rendering: vertices as points, hyperedges as labelled boxes.

    Tentacles are drawn as arrows vertex -> box (sources, labelled s0, s1,
    ...) and box -> vertex (targets, labelled t0, t1, ...).
    """
    lines = [f"digraph {name} {{"]
    for v in range(g.vcount):
        lines.append(f'  v{v} [shape=point, xlabel="{v}"];')
    for sym, rows in g.edges.items():
        for i, (src, tgt) in enumerate(rows):
            box = f"e_{sym}_{i}"
            lines.append(f'  {box} [shape=box, label="{sym}"];')
            for pos, v in enumerate(src):
                lines.append(f'  v{v} -> {box} [label="s{pos}"];')
            for pos, v in enumerate(tgt):
                lines.append(f'  {box} -> v{v} [label="t{pos}"];')
    lines.append("}")
    return "\n".join(lines)
