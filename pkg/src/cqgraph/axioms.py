"""The complete law catalog for diagram terms, with two verification routes.

Entries cover the strict symmetric-monoidal laws, the special Frobenius
bimonoid laws, the two adjunctions between the (co)monoid halves, and the
two lax-naturality inequalities instantiated per signature symbol.
Schematic laws are catalogued as representative closed instances built
from the wiring constants alone, so the catalog works over any signature.

Each entry can be verified semantically (inclusion of evaluations over a
battery of random models, the empty model always included) and
graphically (equalities become cospan isomorphisms, inequalities become
reversed interface-preserving morphisms).  A reading of a law that fails
semantic verification is a transcription bug by definition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .containment import decide_inclusion
from .cospan import is_isomorphic_cospan, term_to_cospan
from .errors import SignatureError
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
    eval_gcq,
    n_copy,
    n_discard,
    n_swap,
    seq,
    tensor,
)
from .sigmodel import RelModel, Signature, dump_model, random_model

EQUALITY = "eq"
LEFT_LEQ_RIGHT = "leq"


@dataclass(frozen=True)
class AxiomEntry:
    name: str
    lhs: GcqTerm
    rhs: GcqTerm
    kind: str  # EQUALITY or LEFT_LEQ_RIGHT
    symbol: str | None = None  # set for the per-symbol law families

    def __post_init__(self):
        if self.lhs.sort != self.rhs.sort:
            raise SignatureError(f"axiom {self.name}: sides have different sorts")


def _smc_entries() -> list[AxiomEntry]:
    id2 = Tensor(Id1(), Id1())
    return [
        # associativity and unitality of composition
        AxiomEntry("smc-i",
                   Seq(Seq(Copy(), Swap()), Merge()),
                   Seq(Copy(), Seq(Swap(), Merge())), EQUALITY),
        AxiomEntry("smc-ii", Seq(Id1(), Copy()), Seq(Copy(), id2), EQUALITY),
        # associativity and unitality of tensor
        AxiomEntry("smc-iii",
                   Tensor(Tensor(Copy(), Discard()), Swap()),
                   Tensor(Copy(), Tensor(Discard(), Swap())), EQUALITY),
        AxiomEntry("smc-iv", Tensor(Id0(), Merge()), Tensor(Merge(), Id0()), EQUALITY),
        # interchange of ; and (+)
        AxiomEntry("smc-v",
                   Tensor(Seq(Copy(), Swap()), Seq(Merge(), Discard())),
                   Seq(Tensor(Copy(), Merge()), Tensor(Swap(), Discard())), EQUALITY),
        # naturality of the crossing, on both sides
        AxiomEntry("smc-vi",
                   Seq(Tensor(Merge(), Id1()), Swap()),
                   Seq(n_swap(2, 1), Tensor(Id1(), Merge())), EQUALITY),
        AxiomEntry("smc-vii",
                   Seq(Tensor(Id1(), Copy()), n_swap(1, 2)),
                   Seq(Swap(), Tensor(Copy(), Id1())), EQUALITY),
        # the crossing is involutive
        AxiomEntry("smc-viii", Seq(Swap(), Swap()), id2, EQUALITY),
    ]


def _frobenius_entries() -> list[AxiomEntry]:
    return [
        AxiomEntry("A",
                   Seq(Tensor(Merge(), Id1()), Merge()),
                   Seq(Tensor(Id1(), Merge()), Merge()), EQUALITY),
        AxiomEntry("C", Seq(Swap(), Merge()), Merge(), EQUALITY),
        AxiomEntry("U", Seq(Tensor(Spawn(), Id1()), Merge()), Id1(), EQUALITY),
        AxiomEntry("Aop",
                   Seq(Copy(), Tensor(Copy(), Id1())),
                   Seq(Copy(), Tensor(Id1(), Copy())), EQUALITY),
        AxiomEntry("Cop", Seq(Copy(), Swap()), Copy(), EQUALITY),
        AxiomEntry("Uop", Seq(Copy(), Tensor(Discard(), Id1())), Id1(), EQUALITY),
        AxiomEntry("S", Seq(Copy(), Merge()), Id1(), EQUALITY),
        AxiomEntry("F",
                   Seq(Tensor(Id1(), Copy()), Tensor(Merge(), Id1())),
                   Seq(Merge(), Copy()), EQUALITY),
    ]


def _adjointness_entries() -> list[AxiomEntry]:
    return [
        AxiomEntry("UC", Seq(Spawn(), Discard()), Id0(), LEFT_LEQ_RIGHT),
        AxiomEntry("CU", Id1(), Seq(Discard(), Spawn()), LEFT_LEQ_RIGHT),
        AxiomEntry("MC", Seq(Merge(), Copy()), Tensor(Id1(), Id1()), LEFT_LEQ_RIGHT),
        AxiomEntry("CM", Id1(), Seq(Copy(), Merge()), LEFT_LEQ_RIGHT),
    ]


def _lax_entries(sig: Signature) -> list[AxiomEntry]:
    out = []
    for name, sort in sig.items():
        box = Gen(name, sort.n, sort.m)
        out.append(AxiomEntry(f"L1[{name}]",
                              Seq(box, n_discard(sort.m)),
                              n_discard(sort.n),
                              LEFT_LEQ_RIGHT, symbol=name))
        out.append(AxiomEntry(f"L2[{name}]",
                              Seq(box, n_copy(sort.m)),
                              Seq(n_copy(sort.n), Tensor(box, box)),
                              LEFT_LEQ_RIGHT, symbol=name))
    return out


def axiom_catalog(sig: Signature) -> list[AxiomEntry]:
    """All laws: 8 monoidal equalities, 8 (co)monoid/Frobenius equalities,
    4 adjointness inequalities, and 2 lax-naturality inequalities per
    signature symbol."""
    return (_smc_entries() + _frobenius_entries() + _adjointness_entries()
            + _lax_entries(sig))


@dataclass
class AxiomReport:
    name: str
    passed: bool
    detail: str = ""
    countermodel: RelModel | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"{self.name}: {status}"
        if self.detail and not self.passed:
            out += f" ({self.detail})"
        if self.countermodel is not None:
            out += " countermodel " + dump_model(self.countermodel)
        return out


def _axiom_signature(entry: AxiomEntry, sig: Signature | None) -> Signature:
    from .gcq import term_signature
    spanned = term_signature(entry.lhs).merged(term_signature(entry.rhs))
    return spanned if sig is None else sig.merged(spanned)


def verify_axiom_semantic(entry: AxiomEntry, trials: int = 100,
                          max_carrier: int = 3, seed: int = 0,
                          sig: Signature | None = None) -> AxiomReport:
    """Check the claimed inclusion(s) of evaluations on random models.

    The first trials are a fixed battery (the empty model, then all-empty
    interpretations over one and two elements); the rest are random with
    carriers up to max_carrier.  Any violation is reported together with
    the offending model.
    """
    full_sig = _axiom_signature(entry, sig)
    rng = random.Random(seed)
    canned = [
        RelModel(full_sig, []),
        RelModel(full_sig, ["e0"]),
        RelModel(full_sig, ["e0", "e1"]),
    ]
    for k in range(trials):
        if k < len(canned):
            model = canned[k]
        else:
            model = random_model(full_sig, rng.randint(0, max_carrier), rng)
        lhs = eval_gcq(entry.lhs, model)
        rhs = eval_gcq(entry.rhs, model)
        if not lhs.pairs <= rhs.pairs:
            return AxiomReport(entry.name, False, "left not included in right", model)
        if entry.kind == EQUALITY and not rhs.pairs <= lhs.pairs:
            return AxiomReport(entry.name, False, "right not included in left", model)
    return AxiomReport(entry.name, True, f"{trials} models")


def verify_axiom_graphical(entry: AxiomEntry) -> AxiomReport:
    """Check the combinatorial form of the law on compiled cospans.

    An equality must compile to isomorphic cospans; an inequality must be
    witnessed by an interface-preserving morphism from the right-hand
    apex to the left-hand one.
    """
    if entry.kind == EQUALITY:
        ok = is_isomorphic_cospan(term_to_cospan(entry.lhs), term_to_cospan(entry.rhs))
        return AxiomReport(entry.name, ok, "cospan isomorphism")
    verdict = decide_inclusion(entry.lhs, entry.rhs)
    return AxiomReport(entry.name, verdict.holds, "reversed morphism witness")


def reversed_entry(entry: AxiomEntry) -> AxiomEntry:
    """The converse inequality, used as a direction-flip guard."""
    return AxiomEntry(f"{entry.name}-reversed", entry.rhs, entry.lhs,
                      entry.kind, entry.symbol)


# -- the relational algebra with converse, encoded as diagram terms ----------

@dataclass(frozen=True)
class CpTerm:
    pass


@dataclass(frozen=True)
class CpTop(CpTerm):
    pass


@dataclass(frozen=True)
class CpMeet(CpTerm):
    lhs: CpTerm
    rhs: CpTerm


@dataclass(frozen=True)
class CpId(CpTerm):
    pass


@dataclass(frozen=True)
class CpComp(CpTerm):
    lhs: CpTerm
    rhs: CpTerm


@dataclass(frozen=True)
class CpConverse(CpTerm):
    arg: CpTerm


@dataclass(frozen=True)
class CpRel(CpTerm):
    symbol: str


def encode_cp(t: CpTerm) -> GcqTerm:
    """Encode a converse-algebra term as a diagram term of sort (1, 1).

    Relation symbols are read at sort (1, 1).  Converse conjugates by the
    wire-bending pair: a spawn-copy cap on the left and a merge-discard
    cup on the right.
    """
    if isinstance(t, CpTop):
        return Seq(Discard(), Spawn())
    if isinstance(t, CpMeet):
        return seq(Copy(), Tensor(encode_cp(t.lhs), encode_cp(t.rhs)), Merge())
    if isinstance(t, CpId):
        return Id1()
    if isinstance(t, CpComp):
        return Seq(encode_cp(t.lhs), encode_cp(t.rhs))
    if isinstance(t, CpConverse):
        cap = Seq(Spawn(), Copy())
        cup = Seq(Merge(), Discard())
        return seq(Tensor(cap, Id1()),
                   tensor(Id1(), encode_cp(t.arg), Id1()),
                   Tensor(Id1(), cup))
    if isinstance(t, CpRel):
        return Gen(t.symbol, 1, 1)
    raise TypeError(f"not a converse-algebra term: {t!r}")
