"""Diagrammatic query terms: sorted syntax, sugar, parsing, and semantics.

Terms are plain trees built from seven wiring constants, boxes drawn from a
signature, sequential composition ``;`` and parallel composition ``(+)``.
Every node carries its sort ``(n, m)``: the number of dangling wires on the
left and on the right.  No quotienting happens at the data level; equality
up to the diagrammatic laws lives in :mod:`cqgraph.containment`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SignatureError, SortError
from .sigmodel import (
    Relation,
    RelModel,
    Signature,
    Sort,
    identity_relation,
    relation_compose,
    relation_tensor,
    unit_relation,
)


@dataclass(frozen=True)
class GcqTerm:
    """Base class for term nodes; immutable, sort available as ``.sort``."""

    @property
    def sort(self) -> Sort:
        raise NotImplementedError


@dataclass(frozen=True)
class Copy(GcqTerm):
    """Comonoid multiplication: one wire in, two out."""

    @property
    def sort(self) -> Sort:
        return Sort(1, 2)


@dataclass(frozen=True)
class Discard(GcqTerm):
    """Comonoid counit: one wire in, none out."""

    @property
    def sort(self) -> Sort:
        return Sort(1, 0)


@dataclass(frozen=True)
class Merge(GcqTerm):
    """Monoid multiplication: two wires in, one out."""

    @property
    def sort(self) -> Sort:
        return Sort(2, 1)


@dataclass(frozen=True)
class Spawn(GcqTerm):
    """Monoid unit: no wires in, one out."""

    @property
    def sort(self) -> Sort:
        return Sort(0, 1)


@dataclass(frozen=True)
class Id0(GcqTerm):
    @property
    def sort(self) -> Sort:
        return Sort(0, 0)


@dataclass(frozen=True)
class Id1(GcqTerm):
    @property
    def sort(self) -> Sort:
        return Sort(1, 1)


@dataclass(frozen=True)
class Swap(GcqTerm):
    @property
    def sort(self) -> Sort:
        return Sort(2, 2)


@dataclass(frozen=True)
class Gen(GcqTerm):
    """A box labelled with a relation symbol of the given sort."""

    name: str
    n: int
    m: int

    @property
    def sort(self) -> Sort:
        return Sort(self.n, self.m)


@dataclass(frozen=True)
class Seq(GcqTerm):
    lhs: GcqTerm
    rhs: GcqTerm

    def __post_init__(self):
        if self.lhs.sort.m != self.rhs.sort.n:
            raise SortError(
                f"cannot compose {self.lhs.sort} ; {self.rhs.sort}: "
                f"{self.lhs.sort.m} != {self.rhs.sort.n}")
        object.__setattr__(self, "_sort", Sort(self.lhs.sort.n, self.rhs.sort.m))

    @property
    def sort(self) -> Sort:
        return self._sort


@dataclass(frozen=True)
class Tensor(GcqTerm):
    lhs: GcqTerm
    rhs: GcqTerm

    def __post_init__(self):
        a, b = self.lhs.sort, self.rhs.sort
        object.__setattr__(self, "_sort", Sort(a.n + b.n, a.m + b.m))

    @property
    def sort(self) -> Sort:
        return self._sort


def seq(*terms: GcqTerm) -> GcqTerm:
    """Left-associated sequential composition of one or more terms."""
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def tensor(*terms: GcqTerm) -> GcqTerm:
    """Left-associated parallel composition; empty product is id0."""
    if not terms:
        return Id0()
    out = terms[0]
    for t in terms[1:]:
        out = Tensor(out, t)
    return out


def identity(n: int) -> GcqTerm:
    """A bundle of n parallel wires."""
    if n == 0:
        return Id0()
    return tensor(*(Id1() for _ in range(n)))


def is_identity_term(t: GcqTerm) -> bool:
    if isinstance(t, (Id0, Id1)):
        return True
    if isinstance(t, Tensor):
        return is_identity_term(t.lhs) and is_identity_term(t.rhs)
    return False


def n_copy(n: int) -> GcqTerm:
    """Bundle-wise copy: sort (n, 2n), duplicating the whole n-wire bundle."""
    if n == 0:
        return Id0()
    rest = n_copy(n - 1)
    # (copy_1 (+) copy_{n-1}) ; (id (+) swap_{1,n-1} (+) id_{n-1})
    return Seq(Tensor(Copy(), rest),
               tensor(Id1(), n_swap(1, n - 1), identity(n - 1)))


def n_merge(n: int) -> GcqTerm:
    """Bundle-wise merge: sort (2n, n)."""
    if n == 0:
        return Id0()
    rest = n_merge(n - 1)
    return Seq(tensor(Id1(), n_swap(n - 1, 1), identity(n - 1)),
               Tensor(Merge(), rest))


def n_discard(n: int) -> GcqTerm:
    """n parallel discards: sort (n, 0)."""
    if n == 0:
        return Id0()
    if n == 1:
        return Discard()
    return Tensor(Discard(), n_discard(n - 1))


def n_spawn(n: int) -> GcqTerm:
    """n parallel spawns: sort (0, n)."""
    if n == 0:
        return Id0()
    if n == 1:
        return Spawn()
    return Tensor(Spawn(), n_spawn(n - 1))


def n_swap(n: int, m: int) -> GcqTerm:
    """Block crossing of n wires over m wires: sort (n+m, m+n)."""
    if n == 0:
        return identity(m)
    if m == 0:
        return identity(n)
    if n == 1 and m == 1:
        return Swap()
    if n == 1:
        # (swap (+) id_{m-1}) ; (id (+) swap_{1,m-1})
        return Seq(Tensor(Swap(), identity(m - 1)),
                   Tensor(Id1(), n_swap(1, m - 1)))
    # (id (+) swap_{n-1,m}) ; (swap_{1,m} (+) id_{n-1})
    return Seq(Tensor(Id1(), n_swap(n - 1, m)),
               Tensor(n_swap(1, m), identity(n - 1)))


def generator_count(t: GcqTerm) -> int:
    """Number of leaf generators (constants and boxes) in the tree."""
    if isinstance(t, (Seq, Tensor)):
        return generator_count(t.lhs) + generator_count(t.rhs)
    return 1


def term_signature(t: GcqTerm) -> Signature:
    """The signature spanned by the boxes occurring in t."""
    table: dict[str, tuple[int, int]] = {}
    def walk(u: GcqTerm):
        if isinstance(u, Gen):
            prev = table.get(u.name)
            if prev is not None and prev != (u.n, u.m):
                raise SignatureError(f"symbol {u.name!r} used at two sorts")
            table[u.name] = (u.n, u.m)
        elif isinstance(u, (Seq, Tensor)):
            walk(u.lhs)
            walk(u.rhs)
    walk(t)
    return Signature(table)


def infer_sort(t: GcqTerm, sig: Signature) -> GcqTerm:
    """Check t against sig and return it with every node's sort validated.

    Sorts of composite nodes are recomputed bottom-up; a box whose recorded
    sort disagrees with the signature is an error.
    """
    if isinstance(t, Gen):
        declared = sig.sort(t.name)
        if declared != t.sort:
            raise SortError(f"symbol {t.name!r} has sort {declared}, not {t.sort}")
        return t
    if isinstance(t, Seq):
        infer_sort(t.lhs, sig)
        infer_sort(t.rhs, sig)
        if t.lhs.sort.m != t.rhs.sort.n:
            raise SortError("composition widths disagree")
        return t
    if isinstance(t, Tensor):
        infer_sort(t.lhs, sig)
        infer_sort(t.rhs, sig)
        return t
    return t


def eval_gcq(t: GcqTerm, model: RelModel) -> Relation:
    """The relation denoted by t in the given model.

    Structural recursion: constants get their fixed interpretation, boxes
    look up ``rho``, composition and tensor go to the relation algebra.
    """
    size = model.size
    if isinstance(t, Copy):
        return Relation(Sort(1, 2), size,
                        frozenset(((x,), (x, x)) for x in range(size)))
    if isinstance(t, Discard):
        return Relation(Sort(1, 0), size,
                        frozenset(((x,), ()) for x in range(size)))
    if isinstance(t, Merge):
        return Relation(Sort(2, 1), size,
                        frozenset(((x, x), (x,)) for x in range(size)))
    if isinstance(t, Spawn):
        return Relation(Sort(0, 1), size,
                        frozenset(((), (x,)) for x in range(size)))
    if isinstance(t, Id0):
        return unit_relation(size)
    if isinstance(t, Id1):
        return identity_relation(size, 1)
    if isinstance(t, Swap):
        return Relation(Sort(2, 2), size,
                        frozenset(((x, y), (y, x)) for x in range(size) for y in range(size)))
    if isinstance(t, Gen):
        if t.name not in model.signature:
            raise SignatureError(f"model does not interpret symbol {t.name!r}")
        rel = model.relation(t.name)
        if rel.sort != t.sort:
            raise SignatureError(
                f"model interprets {t.name!r} at sort {rel.sort}, term uses {t.sort}")
        return rel
    if isinstance(t, Seq):
        return relation_compose(eval_gcq(t.lhs, model), eval_gcq(t.rhs, model))
    if isinstance(t, Tensor):
        return relation_tensor(eval_gcq(t.lhs, model), eval_gcq(t.rhs, model))
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# Concrete syntax
#
#   seq    := ten (';' ten)*            composition, left-assoc, lowest
#   ten    := atom ('(+)' atom)*        tensor, left-assoc
#   atom   := '(' seq ')' | constant | symbol-name
#
# Constants: copy discard merge spawn id id0 swap.

_KEYWORDS = {
    "copy": Copy,
    "discard": Discard,
    "merge": Merge,
    "spawn": Spawn,
    "id": Id1,
    "id0": Id0,
    "swap": Swap,
}

_TOKEN = re.compile(r"\s*(\(\+\)|[();]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}")
            break
        tokens.append(match.group(1))
        pos = match.end()
    return tokens


def parse_gcq(text: str, sig: Signature) -> GcqTerm:
    """Parse a term; box names are resolved and sort-checked against sig."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def expect(tok):
        nonlocal pos
        if peek() != tok:
            raise ParseError(f"expected {tok!r}, found {peek()!r}")
        pos += 1

    def atom() -> GcqTerm:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        if tok == "(":
            pos += 1
            inner = seq_level()
            expect(")")
            return inner
        pos += 1
        if tok in _KEYWORDS:
            return _KEYWORDS[tok]()
        if tok in (";", ")", "(+)"):
            raise ParseError(f"unexpected token {tok!r}")
        sort = sig.sort(tok)
        return Gen(tok, sort.n, sort.m)

    def ten_level() -> GcqTerm:
        nonlocal pos
        out = atom()
        while peek() == "(+)":
            pos += 1
            out = Tensor(out, atom())
        return out

    def seq_level() -> GcqTerm:
        nonlocal pos
        out = ten_level()
        while peek() == ";":
            pos += 1
            out = Seq(out, ten_level())
        return out

    term = seq_level()
    if pos != len(tokens):
        raise ParseError(f"trailing input near {tokens[pos]!r}")
    return term


def print_gcq(t: GcqTerm) -> str:
    """Render with minimal parentheses; parse_gcq(print_gcq(t)) == t."""
    def prec(u: GcqTerm) -> int:
        if isinstance(u, Seq):
            return 0
        if isinstance(u, Tensor):
            return 1
        return 2

    def go(u: GcqTerm, min_prec: int) -> str:
        if prec(u) < min_prec:
            return f"({go(u, 0)})"
        if isinstance(u, Seq):
            return f"{go(u.lhs, 0)} ; {go(u.rhs, 1)}"
        if isinstance(u, Tensor):
            return f"{go(u.lhs, 1)} (+) {go(u.rhs, 2)}"
        if isinstance(u, Gen):
            return u.name
        for name, cls in _KEYWORDS.items():
            if isinstance(u, cls):
                return name
        raise TypeError(f"not a term: {u!r}")

    return go(t, 0)
