"""Semantics-preserving translations between query formulas and diagram terms.

``theta`` turns a judgment ``n |- f`` into a term of sort ``(n, 0)`` by
recursion on its canonical derivation: each of the eight judgment rules has
a fixed wiring.  ``lambda_term`` goes the other way, producing a two-sided
judgment whose left variables are the term's inputs and right variables its
outputs; composition introduces existentially quantified middle variables.

The translations are inverse only up to logical equivalence, never
syntactically, so all round-trip guarantees here are semantic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ccq import (
    AddVar,
    CcqDerivation,
    CcqFormula,
    CcqJudgment,
    Conj,
    ConjIntro,
    Eq,
    EqIntro,
    Exists,
    ExistsIntro,
    MergeVars,
    RelAtom,
    RelIntro,
    SwapVars,
    Top,
    TopIntro,
    derive,
    format_formula,
    rename,
)
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
    identity,
    is_identity_term,
)
from .sigmodel import RelModel, Signature


@dataclass(frozen=True)
class TwoSidedJudgment:
    """A formula over left variables x0..x{left-1} and right ones y0..y{right-1}.

    Stored over a single context of size left+right, with the y block at
    indices left..left+right-1; bound variables sit above that.
    """

    left: int
    right: int
    formula: CcqFormula

    def as_judgment(self) -> CcqJudgment:
        return CcqJudgment(self.left + self.right, self.formula)

    def __str__(self) -> str:
        return f"{self.left},{self.right} |- " + \
            format_formula(self.formula, self.left, self.right)


def _seq(a: GcqTerm, b: GcqTerm) -> GcqTerm:
    # drop identity factors so the translation of small judgments stays small
    if is_identity_term(a):
        return b
    if is_identity_term(b):
        return a
    return Seq(a, b)


def _tens(a: GcqTerm, b: GcqTerm) -> GcqTerm:
    if isinstance(a, Id0):
        return b
    if isinstance(b, Id0):
        return a
    return Tensor(a, b)


def theta(j: CcqJudgment) -> GcqTerm:
    """Translate a judgment to a term of sort (n, 0).

    Requires a relational reading of the symbols: each arity-k symbol is
    used as a box of sort (k, 0).
    """
    return _theta(derive(j))


def _theta(d: CcqDerivation) -> GcqTerm:
    if isinstance(d, TopIntro):
        return Id0()
    if isinstance(d, EqIntro):
        return Seq(Merge(), Discard())
    if isinstance(d, RelIntro):
        return Gen(d.symbol, d.arity, 0)
    if isinstance(d, ConjIntro):
        return _tens(_theta(d.left), _theta(d.right))
    if isinstance(d, ExistsIntro):
        n = d.conclusion.context
        return _seq(_tens(identity(n), Spawn()), _theta(d.child))
    if isinstance(d, AddVar):
        n = d.child.conclusion.context
        return _seq(_tens(identity(n), Discard()), _theta(d.child))
    if isinstance(d, MergeVars):
        n = d.child.conclusion.context
        return _seq(_tens(identity(n - 2), Copy()), _theta(d.child))
    if isinstance(d, SwapVars):
        n = d.conclusion.context
        layer = _tens(_tens(identity(d.k), Swap()), identity(n - d.k - 2))
        return _seq(layer, _theta(d.child))
    raise TypeError(f"not a derivation: {d!r}")


def lambda_term(t: GcqTerm) -> TwoSidedJudgment:
    """Translate a term of sort (n, m) to a two-sided judgment n,m |- f."""
    if isinstance(t, Copy):
        return TwoSidedJudgment(1, 2, Conj(Eq(0, 1), Eq(0, 2)))
    if isinstance(t, Discard):
        return TwoSidedJudgment(1, 0, Top())
    if isinstance(t, Merge):
        return TwoSidedJudgment(2, 1, Conj(Eq(0, 2), Eq(1, 2)))
    if isinstance(t, Spawn):
        return TwoSidedJudgment(0, 1, Top())
    if isinstance(t, Id0):
        return TwoSidedJudgment(0, 0, Top())
    if isinstance(t, Id1):
        return TwoSidedJudgment(1, 1, Eq(0, 1))
    if isinstance(t, Swap):
        return TwoSidedJudgment(2, 2, Conj(Eq(0, 3), Eq(1, 2)))
    if isinstance(t, Gen):
        return TwoSidedJudgment(t.n, t.m, RelAtom(t.name, tuple(range(t.n + t.m))))
    if isinstance(t, Tensor):
        a = lambda_term(t.lhs)
        b = lambda_term(t.rhs)
        l1, r1, l2, r2 = a.left, a.right, b.left, b.right
        total = l1 + l2 + r1 + r2
        fa = rename(a.formula, l1 + r1, total,
                    {l1 + i: l1 + l2 + i for i in range(r1)})
        fb = rename(b.formula, l2 + r2, total,
                    {**{i: l1 + i for i in range(l2)},
                     **{l2 + i: l1 + l2 + r1 + i for i in range(r2)}})
        return TwoSidedJudgment(l1 + l2, r1 + r2, Conj(fa, fb))
    if isinstance(t, Seq):
        a = lambda_term(t.lhs)
        b = lambda_term(t.rhs)
        k, mid, n = a.left, a.right, b.right
        total = k + n + mid  # middle variables become the topmost indices
        fa = rename(a.formula, k + mid, total,
                    {k + i: k + n + i for i in range(mid)})
        fb = rename(b.formula, mid + n, total,
                    {**{i: k + n + i for i in range(mid)},
                     **{mid + i: k + i for i in range(n)}})
        body: CcqFormula = Conj(fa, fb)
        for _ in range(mid):
            body = Exists(body)
        return TwoSidedJudgment(k, n, body)
    raise TypeError(f"not a term: {t!r}")


def relational_signature(sig: Signature) -> Signature:
    """The signature Lambda expects: each (n, m) symbol read at arity n+m."""
    return Signature({name: (s.n + s.m, 0) for name, s in sig.items()})


def theta_model(model: RelModel) -> RelModel:
    """Read a relational model as a diagrammatic one.

    An arity-k symbol interpreted by k-tuples becomes a sort-(k,0) symbol
    interpreted by (k-tuple, empty-tuple) pairs; with the shared model
    representation this is the identity on the data.
    """
    if not model.signature.is_relational():
        raise SignatureError("theta_model needs a relational (coarity-0) signature")
    return RelModel(model.signature, model.carrier, model.rho)


def lambda_model(model: RelModel) -> RelModel:
    """Flatten a model over (n, m) symbols to one over arity-(n+m) symbols."""
    sig = relational_signature(model.signature)
    rho = {name: [(a + b, ()) for a, b in pairs] for name, pairs in model.rho.items()}
    return RelModel(sig, model.carrier, rho)
