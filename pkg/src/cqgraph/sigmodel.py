"""Signatures, finite relational models, and relations as tuple sets.

A signature assigns every relation symbol a sort ``(n, m)``: ``n`` input
positions and ``m`` output positions.  A *relational* signature (every
``m = 0``) is the classical database case.  Models interpret each symbol
as a finite set of ``(in-tuple, out-tuple)`` pairs over a shared carrier.

Carrier elements are opaque string ids in the serialized form; internally
every tuple is over dense naturals ``0 .. size-1`` so that hashing and
comparison stay cheap and output stays canonical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import ModelError, SignatureError


class Sort(NamedTuple):
    n: int
    m: int


Pair = tuple  # an (in-tuple, out-tuple) pair over carrier indices


class Signature:
    """Immutable map from symbol names to sorts, kept in lexicographic order."""

    def __init__(self, symbols: Mapping[str, tuple[int, int]] | Iterable[tuple[str, tuple[int, int]]] = ()):
        raw = dict(symbols) if not isinstance(symbols, Mapping) else dict(symbols)
        table: dict[str, Sort] = {}
        for name in sorted(raw):
            n, m = raw[name]
            if not name:
                raise SignatureError("symbol names must be non-empty")
            if n < 0 or m < 0:
                raise SignatureError(f"negative arity for symbol {name!r}")
            table[name] = Sort(int(n), int(m))
        self._table = table

    def sort(self, name: str) -> Sort:
        try:
            return self._table[name]
        except KeyError:
            raise SignatureError(f"unknown symbol {name!r}") from None

    def arity(self, name: str) -> int:
        return self.sort(name).n

    def coarity(self, name: str) -> int:
        return self.sort(name).m

    def is_relational(self) -> bool:
        """True when every symbol has coarity 0 (the classical CQ case)."""
        return all(s.m == 0 for s in self._table.values())

    def merged(self, other: "Signature") -> "Signature":
        """Union of two signatures; clashing sorts for one name are an error."""
        table = dict(self._table)
        for name, sort in other.items():
            if name in table and table[name] != sort:
                raise SignatureError(f"symbol {name!r} used at two sorts")
            table[name] = sort
        return Signature(table)

    def items(self) -> Iterator[tuple[str, Sort]]:
        return iter(self._table.items())

    def __contains__(self, name: str) -> bool:
        return name in self._table

    def __iter__(self) -> Iterator[str]:
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._table == other._table

    def __hash__(self) -> int:
        return hash(tuple(self._table.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}:{v.n},{v.m}" for k, v in self._table.items())
        return f"Signature({{{inner}}})"


def _reject_duplicate_keys(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise SignatureError(f"duplicate symbol {key!r}")
        seen[key] = value
    return seen


def load_signature(text: str) -> Signature:
    """Parse a signature from JSON: an object mapping symbol -> [arity, coarity]."""
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SignatureError(f"malformed signature JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SignatureError("signature JSON must be an object")
    table = {}
    for name, sort in doc.items():
        if (not isinstance(sort, list) or len(sort) != 2
                or not all(isinstance(x, int) for x in sort)):
            raise SignatureError(f"sort of {name!r} must be a pair of naturals")
        table[name] = (sort[0], sort[1])
    return Signature(table)


def dump_signature(sig: Signature) -> str:
    return json.dumps({name: [s.n, s.m] for name, s in sig.items()}, indent=None)


@dataclass(frozen=True)
class Relation:
    """A finite relation of a fixed sort over a carrier of dense naturals.

    ``pairs`` is a set of ``(in-tuple, out-tuple)`` pairs.  Stored as a
    frozenset, so equality is structural and order-independent; use
    :meth:`sorted_pairs` for canonical output.
    """

    sort: Sort
    carrier_size: int
    pairs: frozenset

    def __post_init__(self):
        norm = frozenset((tuple(a), tuple(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", norm)
        n, m = self.sort
        for a, b in norm:
            if len(a) != n or len(b) != m:
                raise ModelError(f"tuple lengths {len(a)},{len(b)} do not match sort {self.sort}")
            if any(not (0 <= x < self.carrier_size) for x in a + b):
                raise ModelError("tuple element outside the carrier")

    def sorted_pairs(self) -> list:
        return sorted(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair) -> bool:
        return (tuple(pair[0]), tuple(pair[1])) in self.pairs


def identity_relation(size: int, n: int = 1) -> Relation:
    pairs = frozenset((t, t) for t in product(range(size), repeat=n))
    return Relation(Sort(n, n), size, pairs)


def unit_relation(size: int) -> Relation:
    """The sort-(0,0) relation {(•,•)}, the tensor unit."""
    return Relation(Sort(0, 0), size, frozenset({((), ())}))


def full_relation(size: int, n: int, m: int) -> Relation:
    pairs = frozenset(
        (a, b) for a in product(range(size), repeat=n) for b in product(range(size), repeat=m)
    )
    return Relation(Sort(n, m), size, pairs)


def relation_compose(r: Relation, s: Relation) -> Relation:
    """Relational composition: pairs (x, z) with a shared middle witness y."""
    if r.sort.m != s.sort.n:
        raise ModelError(f"cannot compose sorts {r.sort} ; {s.sort}")
    if r.carrier_size != s.carrier_size:
        raise ModelError("compose over different carriers")
    by_mid: dict = {}
    for mid, out in s.pairs:
        by_mid.setdefault(mid, []).append(out)
    pairs = set()
    for a, mid in r.pairs:
        for out in by_mid.get(mid, ()):
            pairs.add((a, out))
    return Relation(Sort(r.sort.n, s.sort.m), r.carrier_size, frozenset(pairs))


def relation_tensor(r: Relation, s: Relation) -> Relation:
    """Parallel product: tuple concatenation on both sides."""
    if r.carrier_size != s.carrier_size:
        raise ModelError("tensor over different carriers")
    pairs = frozenset(
        (a + c, b + d) for a, b in r.pairs for c, d in s.pairs
    )
    return Relation(Sort(r.sort.n + s.sort.n, r.sort.m + s.sort.m), r.carrier_size, pairs)


class RelModel:
    """A finite relational structure: a carrier plus one relation per symbol.

    The carrier may be empty; then ``X^0 = {()}`` still has one element, so
    sort-(0,0) relations distinguish the empty relation from ``{(•,•)}``.
    """

    def __init__(self, signature: Signature, carrier: Sequence[str],
                 rho: Mapping[str, Iterable[Pair]] | None = None):
        carrier = tuple(carrier)
        if len(set(carrier)) != len(carrier):
            raise ModelError("carrier ids must be unique")
        self.signature = signature
        self.carrier = carrier
        table: dict[str, frozenset] = {name: frozenset() for name in signature}
        if rho:
            for name, pairs in rho.items():
                if name not in signature:
                    raise SignatureError(f"unknown symbol {name!r} in model")
                table[name] = frozenset((tuple(a), tuple(b)) for a, b in pairs)
        self.rho = table
        size = len(carrier)
        for name, pairs in table.items():
            sort = signature.sort(name)
            for a, b in pairs:
                if len(a) != sort.n or len(b) != sort.m:
                    raise ModelError(f"tuple for {name!r} does not match sort {sort}")
                if any(not (0 <= x < size) for x in a + b):
                    raise ModelError(f"tuple for {name!r} mentions an element outside the carrier")

    @property
    def size(self) -> int:
        return len(self.carrier)

    def relation(self, name: str) -> Relation:
        sort = self.signature.sort(name)
        return Relation(sort, self.size, self.rho[name])

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, RelModel) and self.signature == other.signature
                and self.carrier == other.carrier and self.rho == other.rho)

    def __repr__(self) -> str:
        return f"RelModel(|X|={self.size}, {sum(map(len, self.rho.values()))} tuples)"


def load_model(text: str, sig: Signature) -> RelModel:
    """Parse a model from JSON: {"carrier": [ids...], "relations": {sym: [[[in...],[out...]], ...]}}."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"malformed model JSON: {exc}") from None
    if not isinstance(doc, dict) or "carrier" not in doc:
        raise ModelError('model JSON must be an object with a "carrier" field')
    carrier = doc["carrier"]
    if not isinstance(carrier, list) or not all(isinstance(x, str) for x in carrier):
        raise ModelError("carrier must be a list of string ids")
    index = {name: i for i, name in enumerate(carrier)}
    rho: dict[str, list] = {}
    for name, rows in (doc.get("relations") or {}).items():
        pairs = []
        for row in rows:
            if not isinstance(row, list) or len(row) != 2:
                raise ModelError(f"each tuple of {name!r} must be a pair [ins, outs]")
            try:
                a = tuple(index[x] for x in row[0])
                b = tuple(index[x] for x in row[1])
            except KeyError as exc:
                raise ModelError(f"element {exc.args[0]!r} not in carrier") from None
            pairs.append((a, b))
        rho[name] = pairs
    return RelModel(sig, carrier, rho)


def dump_model(model: RelModel) -> str:
    names = model.carrier
    relations = {}
    for sym in sorted(model.rho):
        rows = sorted(model.rho[sym])
        relations[sym] = [
            [[names[x] for x in a], [names[x] for x in b]] for a, b in rows
        ]
    return json.dumps({"carrier": list(names), "relations": relations})


def random_model(sig: Signature, carrier_size: int, rng, density: float | None = None) -> RelModel:
    """Draw a random model: each candidate tuple is kept independently.

    With ``density=None`` a per-symbol density is drawn from {0.2, 0.5, 0.8},
    which exercises sparse and dense interpretations alike.
    """
    carrier = [f"e{i}" for i in range(carrier_size)]
    rho = {}
    for name, sort in sig.items():
        p = density if density is not None else rng.choice((0.2, 0.5, 0.8))
        pairs = [
            (a, b)
            for a in product(range(carrier_size), repeat=sort.n)
            for b in product(range(carrier_size), repeat=sort.m)
            if rng.random() < p
        ]
        rho[name] = pairs
    return RelModel(sig, carrier, rho)
