"""Hypergraphs with interfaces: cospans, pushout composition, and the
compiler between diagram terms and cospans.

A cospan ``n -> apex <- m`` is a hypergraph together with two boundary
maps from the finite ordinals ``n`` and ``m`` into its vertices.
Composition glues two cospans along the shared boundary by quotienting
vertices (a pushout over discrete boundaries, computed with union-find);
tensor is disjoint union.  ``term_to_cospan`` compiles a diagram term to
its cospan; ``cospan_to_term`` writes any cospan back as a term whose
compilation is isomorphic to the input.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ModelError, SortError
from .gcq import (
    Copy,
    Discard,
    Gen,
    GcqTerm,
    Id0,
    Id1,
    Merge,
    Seq,
    Spawn,
    Swap,
    Tensor,
    identity,
    seq,
    tensor,
)
from .hypergraph import Hypergraph, disjoint_union, hypergraph_to_dot, is_isomorphic
from .sigmodel import Sort


@dataclass(frozen=True)
class Cospan:
    n: int
    m: int
    apex: Hypergraph
    iota: tuple
    omega: tuple

    def __post_init__(self):
        object.__setattr__(self, "iota", tuple(self.iota))
        object.__setattr__(self, "omega", tuple(self.omega))
        if len(self.iota) != self.n or len(self.omega) != self.m:
            raise ModelError("boundary maps must cover the ordinals")
        for v in self.iota + self.omega:
            if not (0 <= v < self.apex.vcount):
                raise ModelError("boundary map leaves the apex")

    @property
    def sort(self) -> Sort:
        return Sort(self.n, self.m)


class _UnionFind:
    """Union-find with path compression; the smallest id is the root."""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra


def pushout(f: tuple, g: tuple, a: Hypergraph, b: Hypergraph):
    """Pushout of the discrete span a <-f- k -g-> b.

    ``f`` and ``g`` are vertex maps from the same ordinal k.  Returns the
    apex hypergraph together with the two quotient vertex maps a -> P and
    b -> P.  Vertices are quotiented; edge lists are concatenated (a's
    first) with tentacles re-indexed through the quotient.
    """
    if len(f) != len(g):
        raise ModelError("pushout legs must share their source ordinal")
    total = a.vcount + b.vcount
    uf = _UnionFind(total)
    off = a.vcount
    for x, y in zip(f, g):
        uf.union(x, off + y)
    # densify class representatives in ascending order
    reps = sorted({uf.find(v) for v in range(total)})
    dense = {rep: i for i, rep in enumerate(reps)}
    qa = tuple(dense[uf.find(v)] for v in range(a.vcount))
    qb = tuple(dense[uf.find(off + v)] for v in range(b.vcount))
    edges: dict[str, list] = {}
    for sym, rows in a.edges.items():
        edges.setdefault(sym, []).extend(
            (tuple(qa[v] for v in s), tuple(qa[v] for v in t)) for s, t in rows)
    for sym, rows in b.edges.items():
        edges.setdefault(sym, []).extend(
            (tuple(qb[v] for v in s), tuple(qb[v] for v in t)) for s, t in rows)
    return Hypergraph(len(reps), edges), qa, qb


def compose_cospans(a: Cospan, b: Cospan) -> Cospan:
    """Glue a and b along their shared boundary: apex is the pushout."""
    if a.m != b.n:
        raise SortError(f"cannot compose cospans {a.sort} ; {b.sort}")
    apex, qa, qb = pushout(a.omega, b.iota, a.apex, b.apex)
    return Cospan(a.n, b.m, apex,
                  tuple(qa[v] for v in a.iota),
                  tuple(qb[v] for v in b.omega))


def tensor_cospans(a: Cospan, b: Cospan) -> Cospan:
    apex, _, _ = disjoint_union(a.apex, b.apex)
    off = a.apex.vcount
    return Cospan(a.n + b.n, a.m + b.m, apex,
                  a.iota + tuple(off + v for v in b.iota),
                  a.omega + tuple(off + v for v in b.omega))


def identity_cospan(n: int) -> Cospan:
    return Cospan(n, n, Hypergraph(n), tuple(range(n)), tuple(range(n)))


def term_to_cospan(t: GcqTerm) -> Cospan:
    """Compile a term to its cospan of hypergraphs.

    Wiring constants become discrete cospans; a box becomes a single
    hyperedge whose left boundary lists the source tentacles in order and
    whose right boundary lists the target tentacles in order.
    """
    if isinstance(t, Copy):
        return Cospan(1, 2, Hypergraph(1), (0,), (0, 0))
    if isinstance(t, Merge):
        return Cospan(2, 1, Hypergraph(1), (0, 0), (0,))
    if isinstance(t, Discard):
        return Cospan(1, 0, Hypergraph(1), (0,), ())
    if isinstance(t, Spawn):
        return Cospan(0, 1, Hypergraph(1), (), (0,))
    if isinstance(t, Id0):
        return Cospan(0, 0, Hypergraph(0), (), ())
    if isinstance(t, Id1):
        return identity_cospan(1)
    if isinstance(t, Swap):
        return Cospan(2, 2, Hypergraph(2), (0, 1), (1, 0))
    if isinstance(t, Gen):
        apex = Hypergraph(t.n + t.m, {t.name: [(tuple(range(t.n)),
                                                tuple(range(t.n, t.n + t.m)))]})
        return Cospan(t.n, t.m, apex,
                      tuple(range(t.n)), tuple(range(t.n, t.n + t.m)))
    if isinstance(t, Seq):
        return compose_cospans(term_to_cospan(t.lhs), term_to_cospan(t.rhs))
    if isinstance(t, Tensor):
        return tensor_cospans(term_to_cospan(t.lhs), term_to_cospan(t.rhs))
    raise TypeError(f"not a term: {t!r}")


def is_isomorphic_cospan(a: Cospan, b: Cospan) -> bool:
    """True iff an apex isomorphism commutes with both boundary maps."""
    if a.sort != b.sort:
        raise SortError(f"cospan sorts differ: {a.sort} vs {b.sort}")
    pins: dict[int, int] = {}
    for src, dst in zip(a.iota + a.omega, b.iota + b.omega):
        if pins.get(src, dst) != dst:
            return False
        pins[src] = dst
    return is_isomorphic(a.apex, b.apex, pins) is not None


# -- writing a cospan back as a term ----------------------------------------

def _perm_term(perm: list[int]) -> GcqTerm:
    """A wiring term sending input wire i to output position perm[i]."""
    k = len(perm)
    if perm == list(range(k)):
        return identity(k)
    layers = []
    arr = list(range(k))  # arr[pos] = input wire currently at pos
    # bubble until every wire sits at its target position
    changed = True
    while changed:
        changed = False
        for pos in range(k - 1):
            if perm[arr[pos]] > perm[arr[pos + 1]]:
                arr[pos], arr[pos + 1] = arr[pos + 1], arr[pos]
                layers.append(tensor(identity(pos), Swap(), identity(k - pos - 2)))
                changed = True
    return seq(*layers) if layers else identity(k)


def _merge_fan(d: int) -> GcqTerm:
    """d wires into one: spawn for d=0, folded binary merges otherwise."""
    if d == 0:
        return Spawn()
    if d == 1:
        return Id1()
    return Seq(Tensor(_merge_fan(d - 1), Id1()), Merge())


def _copy_fan(d: int) -> GcqTerm:
    """One wire into d: discard for d=0, folded binary copies otherwise."""
    if d == 0:
        return Discard()
    if d == 1:
        return Id1()
    return Seq(Copy(), Tensor(_copy_fan(d - 1), Id1()))


def _discrete_term(f: tuple, g: tuple, vcount: int) -> GcqTerm:
    """A term whose cospan is (len(f) -> vcount <- len(g)) with legs f, g.

    Inputs are routed to their vertex, merged per vertex, fanned back out,
    and routed to the outputs: perm ; merges ; copies ; perm.
    """
    p, q = len(f), len(g)
    order_in = sorted(range(p), key=lambda i: (f[i], i))
    perm_in = [0] * p
    for pos, wire in enumerate(order_in):
        perm_in[wire] = pos
    merges = tensor(*(_merge_fan(sum(1 for x in f if x == v)) for v in range(vcount))) \
        if vcount else Id0()
    copies = tensor(*(_copy_fan(sum(1 for x in g if x == v)) for v in range(vcount))) \
        if vcount else Id0()
    order_out = sorted(range(q), key=lambda j: (g[j], j))
    perm_out = [0] * q
    for pos, wire in enumerate(order_out):
        perm_out[pos] = wire  # wire at grouped position pos must reach slot wire
    return seq(_perm_term(perm_in), merges, copies, _perm_term(perm_out))


def cospan_to_term(c: Cospan) -> GcqTerm:
    """A term t with term_to_cospan(t) isomorphic to c.

    Factorisation: route the left boundary onto the vertices, lay every
    hyperedge out in parallel next to identity wires on the vertices, and
    route back to the right boundary.  Isolated vertices survive as
    spawn ; discard pairs inside the two discrete layers.
    """
    v = c.apex.vcount
    boxes = []
    src_leg: list[int] = []
    tgt_leg: list[int] = []
    for sym in sorted(c.apex.edges):
        for srcs, tgts in c.apex.edges[sym]:
            boxes.append(Gen(sym, len(srcs), len(tgts)))
            src_leg.extend(srcs)
            tgt_leg.extend(tgts)
    left = _discrete_term(c.iota, tuple(range(v)) + tuple(src_leg), v)
    middle = tensor(identity(v), *boxes) if boxes else identity(v)
    right = _discrete_term(tuple(range(v)) + tuple(tgt_leg), c.omega, v)
    return seq(left, middle, right)


def cospan_to_json(c: Cospan) -> str:
    doc = {
        "n": c.n,
        "m": c.m,
        "apex": {"vcount": c.apex.vcount,
                 "edges": {sym: [[list(s), list(t)] for s, t in rows]
                           for sym, rows in c.apex.edges.items()}},
        "iota": list(c.iota),
        "omega": list(c.omega),
    }
    return json.dumps(doc)


def cospan_from_json(text: str) -> Cospan:
    doc = json.loads(text)
    apex = Hypergraph(doc["apex"]["vcount"],
                      {sym: [(tuple(s), tuple(t)) for s, t in rows]
                       for sym, rows in doc["apex"].get("edges", {}).items()})
    return Cospan(doc["n"], doc["m"], apex, tuple(doc["iota"]), tuple(doc["omega"]))


def cospan_to_dot(c: Cospan, name: str = "G") -> str:
    """Apex in DOT plus dotted arrows for the two boundary maps."""
    body = hypergraph_to_dot(c.apex, name)
    lines = body.splitlines()
    extra = []
    for i, v in enumerate(c.iota):
        extra.append(f'  in{i} [shape=plaintext, label="{i}"];')
        extra.append(f"  in{i} -> v{v} [style=dotted];")
    for j, v in enumerate(c.omega):
        extra.append(f'  out{j} [shape=plaintext, label="{j}"];')
        extra.append(f"  v{v} -> out{j} [style=dotted];")
    return "\n".join(lines[:-1] + extra + lines[-1:])
