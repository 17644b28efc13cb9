"""Query inclusion and equivalence, decided on compiled cospans.

The ordering is fixed once and for all: ``c <= d`` holds iff there is an
interface-preserving morphism from the apex of ``d``'s cospan to the apex
of ``c``'s.  The normative instance is the pair from the worked example in
the test-suite: the single-box query with its two inputs merged sits below
the four-box query, witnessed by a morphism out of the four-box graph.

``natural_model_check`` decides the same relation along a disjoint code
path: read ``c``'s own apex as a model, evaluate ``d`` on it relationally,
and test whether the canonical boundary assignment satisfies it.  The two
deciders agree everywhere; the suite enforces that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cospan import Cospan, term_to_cospan
from .errors import SortError
from .gcq import GcqTerm, eval_gcq, term_signature
from .hypergraph import HgMorphism, Hypergraph, find_morphisms
from .sigmodel import RelModel, Signature, dump_model


@dataclass
class InclusionVerdict:
    holds: bool
    witness: HgMorphism | None = None
    countermodel: RelModel | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = {"vmap": list(self.witness.vmap),
                              "emaps": {sym: list(e) for sym, e in self.witness.emaps.items()}}
        if self.countermodel is not None:
            out["countermodel"] = json.loads(dump_model(self.countermodel))
        return out


@dataclass
class EquivalenceVerdict:
    holds: bool
    forward: InclusionVerdict
    backward: InclusionVerdict


def _interface_pins(frm: Cospan, to: Cospan) -> dict | None:
    """Vertex pins forcing a morphism frm.apex -> to.apex to preserve both
    boundary maps; None when the boundaries already clash."""
    pins: dict[int, int] = {}
    for src, dst in zip(frm.iota + frm.omega, to.iota + to.omega):
        if pins.get(src, dst) != dst:
            return None
        pins[src] = dst
    return pins


def hypergraph_as_model(g: Hypergraph, sig: Signature | None = None) -> RelModel:
    """Read a hypergraph as a relational model: vertices become the carrier,
    the tentacle tuples of each symbol become its relation (a set, so
    parallel duplicate edges collapse)."""
    if sig is None:
        sig = Signature({sym: (len(rows[0][0]), len(rows[0][1]))
                         for sym, rows in g.edges.items()})
    carrier = [f"v{i}" for i in range(g.vcount)]
    rho = {sym: list(rows) for sym, rows in g.edges.items() if sym in sig}
    return RelModel(sig, carrier, rho)


def decide_inclusion(c: GcqTerm, d: GcqTerm,
                     budget: int | None = None) -> InclusionVerdict:
    """Decide c <= d; on success the witness morphism is returned, on
    failure the natural model of c is reported as a countermodel."""
    if c.sort != d.sort:
        raise SortError(f"cannot compare sorts {c.sort} and {d.sort}")
    ca = term_to_cospan(c)
    da = term_to_cospan(d)
    pins = _interface_pins(da, ca)
    if pins is not None:
        found = find_morphisms(da.apex, ca.apex, pins, limit=1, budget=budget)
        if found:
            return InclusionVerdict(True, witness=found[0])
    sig = term_signature(c).merged(term_signature(d))
    return InclusionVerdict(False, countermodel=hypergraph_as_model(ca.apex, sig))


def decide_equivalence(c: GcqTerm, d: GcqTerm,
                       budget: int | None = None) -> EquivalenceVerdict:
    forward = decide_inclusion(c, d, budget=budget)
    backward = decide_inclusion(d, c, budget=budget)
    return EquivalenceVerdict(forward.holds and backward.holds, forward, backward)


def natural_model_check(c: GcqTerm, d: GcqTerm) -> bool:
    """The evaluation oracle for c <= d: never searches for morphisms.

    Compile c, read its apex as a model, and ask whether the boundary
    assignment of c satisfies d there.
    """
    if c.sort != d.sort:
        raise SortError(f"cannot compare sorts {c.sort} and {d.sort}")
    ca = term_to_cospan(c)
    sig = term_signature(c).merged(term_signature(d))
    model = hypergraph_as_model(ca.apex, sig)
    return (ca.iota, ca.omega) in eval_gcq(d, model)


def span_semantics(t: GcqTerm, g: Hypergraph) -> dict:
    """Homomorphism-counting semantics of t over g.

    For each pair (a, b) of boundary assignments into g's vertices, the
    number of morphisms from t's apex to g restricting to a and b on the
    two interfaces.  Pairs with count zero are omitted; the support equals
    the relational evaluation of t over g read as a model.
    """
    cosp = term_to_cospan(t)
    counts: dict = {}
    for hom in find_morphisms(cosp.apex, g):
        key = (tuple(hom.vmap[v] for v in cosp.iota),
               tuple(hom.vmap[v] for v in cosp.omega))
        counts[key] = counts.get(key, 0) + 1
    return counts
