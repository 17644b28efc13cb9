"""Shared random generators and independent oracles for the suite.

The oracles here deliberately avoid the library's own code paths: term
membership is decided by quantifying over middle tuples instead of
composing relation sets, judgment satisfaction by enumerating
assignments, and morphism counts by filtering all raw function pairs.
"""

from __future__ import annotations

import random
from itertools import product

import pytest

from cqgraph.ccq import CcqFormula, CcqJudgment, Conj, Eq, Exists, RelAtom, Top
from cqgraph.gcq import (
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
    generator_count,
    identity,
    seq,
    tensor,
)
from cqgraph.hypergraph import HgMorphism, Hypergraph, validate_morphism
from cqgraph.cospan import Cospan
from cqgraph.sigmodel import RelModel, Signature, random_model


@pytest.fixture
def rng():
    return random.Random(20240817)


# -- random generators -------------------------------------------------------

def base_atoms(sig: Signature) -> list[GcqTerm]:
    atoms: list[GcqTerm] = [Copy(), Discard(), Merge(), Spawn(), Id1(), Swap()]
    atoms.extend(Gen(name, s.n, s.m) for name, s in sig.items())
    return atoms


def random_layer(rng: random.Random, atoms, width_in: int, width_cap: int):
    parts = []
    remaining = width_in
    out = 0
    while remaining > 0:
        cands = [a for a in atoms if 0 < a.sort.n <= remaining]
        if out + remaining >= width_cap:
            narrower = [a for a in cands if a.sort.m <= a.sort.n]
            cands = narrower or cands
        atom = rng.choice(cands)
        parts.append(atom)
        remaining -= atom.sort.n
        out += atom.sort.m
    if rng.random() < 0.25 and out < width_cap:
        starts = [a for a in atoms if a.sort.n == 0]
        if starts:
            parts.insert(rng.randrange(len(parts) + 1), rng.choice(starts))
    if not parts:
        return Id0(), 0
    layer = tensor(*parts)
    return layer, layer.sort.m


def random_term(rng: random.Random, sig: Signature,
                max_nodes: int = 10, width_cap: int = 5) -> GcqTerm:
    atoms = base_atoms(sig)
    width = rng.randint(0, 3)
    if rng.random() < 0.1:
        layers = [identity(width)]
    else:
        first, width = random_layer(rng, atoms, width, width_cap)
        layers = [first]
    count = sum(generator_count(t) for t in layers)
    while count < max_nodes and rng.random() < 0.75:
        layer, width = random_layer(rng, atoms, width, width_cap)
        layers.append(layer)
        count += generator_count(layer)
    return seq(*layers)


def random_term_pairs(rng: random.Random, sig: Signature, want: int,
                      max_nodes: int = 10, apex_cap: int = 8):
    """Same-sort term pairs whose compiled apexes stay small."""
    from cqgraph.cospan import term_to_cospan

    buckets: dict = {}
    pairs = []
    attempts = 0
    while len(pairs) < want and attempts < want * 60:
        attempts += 1
        t = random_term(rng, sig, max_nodes=max_nodes)
        if generator_count(t) > max_nodes or term_to_cospan(t).apex.vcount > apex_cap:
            continue
        bucket = buckets.setdefault(t.sort, [])
        if bucket and rng.random() < 0.9:
            pairs.append((rng.choice(bucket), t))
        elif bucket and rng.random() < 0.3:
            pairs.append((t, t))
        bucket.append(t)
    if len(pairs) < want:
        raise RuntimeError("term pair generation starved")
    return pairs[:want]


def random_formula(rng: random.Random, sig: Signature, ctx: int, depth: int) -> CcqFormula:
    leaves = ["top"]
    if ctx >= 1:
        leaves.append("eq")
        leaves.extend(f"rel:{name}" for name, s in sig.items() if s.n <= max(ctx, 1))
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(leaves + ["conj", "conj", "exists", "exists"])
    if kind == "top":
        return Top()
    if kind == "eq":
        return Eq(rng.randrange(ctx), rng.randrange(ctx))
    if kind.startswith("rel:"):
        name = kind[4:]
        arity = sig.sort(name).n
        return RelAtom(name, tuple(rng.randrange(ctx) for _ in range(arity)))
    if kind == "conj":
        return Conj(random_formula(rng, sig, ctx, depth - 1),
                    random_formula(rng, sig, ctx, depth - 1))
    return Exists(random_formula(rng, sig, ctx + 1, depth - 1))


def random_judgment(rng: random.Random, sig: Signature,
                    max_ctx: int = 3, max_depth: int = 5) -> CcqJudgment:
    ctx = rng.randint(0, max_ctx)
    return CcqJudgment(ctx, random_formula(rng, sig, ctx, rng.randint(0, max_depth)))


def random_hypergraph(rng: random.Random, sig: Signature,
                      max_v: int = 3, max_edges: int = 3) -> Hypergraph:
    v = rng.randint(0, max_v)
    edges: dict = {}
    for name, sort in sig.items():
        if v == 0 and (sort.n or sort.m):
            continue
        rows = [(tuple(rng.randrange(v) for _ in range(sort.n)),
                 tuple(rng.randrange(v) for _ in range(sort.m)))
                for _ in range(rng.randint(0, max_edges))]
        if rows:
            edges[name] = rows
    return Hypergraph(v, edges)


def random_cospan(rng: random.Random, sig: Signature,
                  max_v: int = 5, max_edges: int = 4) -> Cospan:
    apex = random_hypergraph(rng, sig, max_v=max_v, max_edges=max_edges)
    if apex.vcount == 0:
        return Cospan(0, 0, apex, (), ())
    n = rng.randint(0, 3)
    m = rng.randint(0, 3)
    return Cospan(n, m, apex,
                  tuple(rng.randrange(apex.vcount) for _ in range(n)),
                  tuple(rng.randrange(apex.vcount) for _ in range(m)))


def model_battery(sig: Signature, rng: random.Random, sizes=(0, 1, 1, 2, 2, 2, 3, 3)):
    """The empty model plus a seeded spread of small random ones."""
    out = [RelModel(sig, [])]
    for size in sizes:
        out.append(random_model(sig, size, rng))
    return out


# -- independent oracles ------------------------------------------------------

def member_oracle(t: GcqTerm, a: tuple, b: tuple, model: RelModel) -> bool:
    """Non-compositional semantics: does (a, b) lie in the term's relation?

    Decides membership top-down, searching all middle tuples at every
    composition instead of building relation sets.
    """
    size = model.size
    if isinstance(t, Copy):
        return b == (a[0], a[0])
    if isinstance(t, Discard):
        return b == ()
    if isinstance(t, Merge):
        return a[0] == a[1] and b == (a[0],)
    if isinstance(t, Spawn):
        return a == ()
    if isinstance(t, Id0):
        return True
    if isinstance(t, Id1):
        return a == b
    if isinstance(t, Swap):
        return b == (a[1], a[0])
    if isinstance(t, Gen):
        return (a, b) in model.rho[t.name]
    if isinstance(t, Seq):
        mid = t.lhs.sort.m
        return any(member_oracle(t.lhs, a, w, model) and member_oracle(t.rhs, w, b, model)
                   for w in product(range(size), repeat=mid))
    if isinstance(t, Tensor):
        n1, m1 = t.lhs.sort
        return (member_oracle(t.lhs, a[:n1], b[:m1], model)
                and member_oracle(t.rhs, a[n1:], b[m1:], model))
    raise TypeError(t)


def relation_oracle(t: GcqTerm, model: RelModel) -> frozenset:
    size = model.size
    n, m = t.sort
    return frozenset((a, b)
                     for a in product(range(size), repeat=n)
                     for b in product(range(size), repeat=m)
                     if member_oracle(t, a, b, model))


def naive_eval_ccq(j: CcqJudgment, model: RelModel) -> frozenset:
    """Assignment-enumeration semantics for judgments."""
    size = model.size

    def sat(f: CcqFormula, env: tuple) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, Eq):
            return env[f.i] == env[f.j]
        if isinstance(f, RelAtom):
            return (tuple(env[x] for x in f.args), ()) in model.rho[f.symbol]
        if isinstance(f, Conj):
            return sat(f.lhs, env) and sat(f.rhs, env)
        if isinstance(f, Exists):
            return any(sat(f.body, env + (w,)) for w in range(size))
        raise TypeError(f)

    return frozenset(env for env in product(range(size), repeat=j.context)
                     if sat(j.formula, env))


def all_morphisms_oracle(g: Hypergraph, h: Hypergraph) -> list[HgMorphism]:
    """Every raw (vertex map, edge maps) pair, filtered by validity."""
    out = []
    for vmap in product(range(h.vcount), repeat=g.vcount):
        emap_spaces = []
        syms = list(g.edges)
        possible = True
        for sym in syms:
            targets = h.edges.get(sym, ())
            if g.edges[sym] and not targets:
                possible = False
                break
            emap_spaces.append(product(range(len(targets)), repeat=len(g.edges[sym])))
        if not possible:
            continue
        for combo in product(*emap_spaces):
            cand = HgMorphism(vmap, dict(zip(syms, combo)))
            if validate_morphism(cand, g, h):
                out.append(cand)
    return out
