"""Conjunctive-query formulas, sorted judgments, and their semantics.

A judgment ``n |- f`` pairs a formula with a variable context: every free
variable index is below ``n``.  Bound variables are positional: an
``Exists`` node at local context ``k`` always binds index ``k`` (its body
lives at context ``k+1``), so an index is free exactly when it is below
the top-level context and alpha-conversion never arises.

Two evaluators are provided: structural recursion on the formula, and
replay of a derivation built from the eight judgment rules (truth,
relation and equality introduction, conjunction, existential closure,
plus the structural swap / merge / weaken moves on the context).  They
agree, and the test-suite checks that.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from .errors import ParseError, SignatureError
from .sigmodel import RelModel, Signature


# -- formulas ----------------------------------------------------------------

@dataclass(frozen=True)
class CcqFormula:
    pass


@dataclass(frozen=True)
class Top(CcqFormula):
    pass


@dataclass(frozen=True)
class Conj(CcqFormula):
    lhs: CcqFormula
    rhs: CcqFormula


@dataclass(frozen=True)
class Eq(CcqFormula):
    i: int
    j: int


@dataclass(frozen=True)
class RelAtom(CcqFormula):
    symbol: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Exists(CcqFormula):
    body: CcqFormula


def _check(f: CcqFormula, ctx: int):
    if isinstance(f, Top):
        return
    if isinstance(f, Eq):
        if not (0 <= f.i < ctx and 0 <= f.j < ctx):
            raise ValueError(f"variable out of context {ctx} in {f}")
        return
    if isinstance(f, RelAtom):
        if any(not (0 <= a < ctx) for a in f.args):
            raise ValueError(f"variable out of context {ctx} in {f}")
        return
    if isinstance(f, Conj):
        _check(f.lhs, ctx)
        _check(f.rhs, ctx)
        return
    if isinstance(f, Exists):
        _check(f.body, ctx + 1)
        return
    raise TypeError(f"not a formula: {f!r}")


def free_vars(f: CcqFormula, ctx: int) -> set:
    """Free variable indices of f when read at context ctx."""
    out: set = set()

    def walk(u: CcqFormula):
        if isinstance(u, Eq):
            out.update(x for x in (u.i, u.j) if x < ctx)
        elif isinstance(u, RelAtom):
            out.update(x for x in u.args if x < ctx)
        elif isinstance(u, Conj):
            walk(u.lhs)
            walk(u.rhs)
        elif isinstance(u, Exists):
            walk(u.body)

    walk(f)
    return out


def rename(f: CcqFormula, old_ctx: int, new_ctx: int, fmap: dict) -> CcqFormula:
    """Simultaneously rename free variables and rebase bound ones.

    An index below ``old_ctx`` is free and goes through ``fmap`` (default:
    unchanged); an index at or above it was bound by some enclosing
    quantifier and is shifted by ``new_ctx - old_ctx``.
    """
    def m(i: int) -> int:
        if i < old_ctx:
            j = fmap.get(i, i)
            if not (0 <= j < new_ctx):
                raise ValueError(f"renaming sends x{i} outside context {new_ctx}")
            return j
        return i - old_ctx + new_ctx

    if isinstance(f, Top):
        return f
    if isinstance(f, Eq):
        return Eq(m(f.i), m(f.j))
    if isinstance(f, RelAtom):
        return RelAtom(f.symbol, tuple(m(a) for a in f.args))
    if isinstance(f, Conj):
        return Conj(rename(f.lhs, old_ctx, new_ctx, fmap),
                    rename(f.rhs, old_ctx, new_ctx, fmap))
    if isinstance(f, Exists):
        return Exists(rename(f.body, old_ctx, new_ctx, fmap))
    raise TypeError(f"not a formula: {f!r}")


def substitute(f: CcqFormula, pairs, context: int) -> CcqFormula:
    """Simultaneous substitution on free variables.

    ``pairs`` lists ``(replacement, replaced)`` index pairs; indices below
    ``context`` are the free ones.  Bound variables are untouched.
    """
    fmap = {old: new for new, old in pairs}
    return rename(f, context, context, fmap)


@dataclass(frozen=True)
class CcqJudgment:
    context: int
    formula: CcqFormula

    def __post_init__(self):
        if self.context < 0:
            raise ValueError("context must be a natural")
        _check(self.formula, self.context)


# -- derivations -------------------------------------------------------------

@dataclass(frozen=True)
class CcqDerivation:
    @property
    def conclusion(self) -> CcqJudgment:
        return self._conclusion

    @property
    def children(self):
        return ()


@dataclass(frozen=True)
class TopIntro(CcqDerivation):
    def __post_init__(self):
        object.__setattr__(self, "_conclusion", CcqJudgment(0, Top()))


@dataclass(frozen=True)
class EqIntro(CcqDerivation):
    def __post_init__(self):
        object.__setattr__(self, "_conclusion", CcqJudgment(2, Eq(0, 1)))


@dataclass(frozen=True)
class RelIntro(CcqDerivation):
    symbol: str
    arity: int

    def __post_init__(self):
        concl = CcqJudgment(self.arity, RelAtom(self.symbol, tuple(range(self.arity))))
        object.__setattr__(self, "_conclusion", concl)


@dataclass(frozen=True)
class ConjIntro(CcqDerivation):
    left: CcqDerivation
    right: CcqDerivation

    def __post_init__(self):
        lj, rj = self.left.conclusion, self.right.conclusion
        total = lj.context + rj.context
        # free variables of the left part keep their indices and the right
        # part's shift up; bound indices on both sides rebase to the wider
        # context (the named-variable reading leaves them untouched)
        lifted = rename(lj.formula, lj.context, total, {})
        shifted = rename(rj.formula, rj.context, total,
                         {i: lj.context + i for i in range(rj.context)})
        concl = CcqJudgment(total, Conj(lifted, shifted))
        object.__setattr__(self, "_conclusion", concl)

    @property
    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class ExistsIntro(CcqDerivation):
    child: CcqDerivation

    def __post_init__(self):
        j = self.child.conclusion
        if j.context < 1:
            raise ValueError("existential closure needs a variable to bind")
        concl = CcqJudgment(j.context - 1, Exists(j.formula))
        object.__setattr__(self, "_conclusion", concl)

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class SwapVars(CcqDerivation):
    """Swap free variables k and k+1 in the conclusion."""

    child: CcqDerivation
    k: int

    def __post_init__(self):
        j = self.child.conclusion
        if not (0 <= self.k < j.context - 1):
            raise ValueError(f"swap position {self.k} out of range for context {j.context}")
        swapped = rename(j.formula, j.context, j.context,
                         {self.k: self.k + 1, self.k + 1: self.k})
        object.__setattr__(self, "_conclusion", CcqJudgment(j.context, swapped))

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class MergeVars(CcqDerivation):
    """Identify the last two free variables, shrinking the context by one."""

    child: CcqDerivation

    def __post_init__(self):
        j = self.child.conclusion
        if j.context < 2:
            raise ValueError("merging needs at least two variables")
        merged = rename(j.formula, j.context, j.context - 1,
                        {j.context - 1: j.context - 2})
        object.__setattr__(self, "_conclusion", CcqJudgment(j.context - 1, merged))

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class AddVar(CcqDerivation):
    """Weaken: introduce a fresh last free variable."""

    child: CcqDerivation

    def __post_init__(self):
        j = self.child.conclusion
        widened = rename(j.formula, j.context, j.context + 1, {})
        object.__setattr__(self, "_conclusion", CcqJudgment(j.context + 1, widened))

    @property
    def children(self):
        return (self.child,)


RULE_NAMES = {
    TopIntro: "top",
    EqIntro: "eq",
    RelIntro: "rel",
    ConjIntro: "conj",
    ExistsIntro: "exists",
    SwapVars: "swap",
    MergeVars: "merge",
    AddVar: "weaken",
}


# -- constructing a derivation for any valid judgment ------------------------

def _apply_perm(d: CcqDerivation, perm: list[int]) -> CcqDerivation:
    """Rename free variable i to perm[i] via adjacent swaps."""
    k = len(perm)
    arr = list(range(k))  # arr[pos] = original variable currently named pos
    changed = True
    while changed:
        changed = False
        for pos in range(k - 1):
            if perm[arr[pos]] > perm[arr[pos + 1]]:
                arr[pos], arr[pos + 1] = arr[pos + 1], arr[pos]
                d = SwapVars(d, pos)
                changed = True
    return d


def _merge_positions(d: CcqDerivation, a: int, b: int):
    """Identify the variables at positions a and b.

    Returns the new derivation and a translation old-position -> new.
    The merged variable lands at min(a, b); everything else keeps its
    relative order.
    """
    if a > b:
        a, b = b, a
    ctx = d.conclusion.context
    others = [p for p in range(ctx) if p not in (a, b)]
    to_end = [0] * ctx
    for rank, p in enumerate(others):
        to_end[p] = rank
    to_end[a] = ctx - 2
    to_end[b] = ctx - 1
    d = _apply_perm(d, to_end)
    d = MergeVars(d)
    # survivor is now the last variable; put it back at slot a
    back = [0] * (ctx - 1)
    for rank, p in enumerate(others):
        back[rank] = p if p < b else p - 1
    back[ctx - 2] = a
    d = _apply_perm(d, back)

    def translate(p: int) -> int:
        if p in (a, b):
            return a
        return p if p < b else p - 1

    return d, translate


def derive(j: CcqJudgment) -> CcqDerivation:
    """A derivation of j using only the eight rules; deterministic.

    Grammar nodes are introduced in their canonical shape, variables are
    aligned with swap/merge/weaken moves, conjunctions are combined and
    existentials closed last.  Subformulas are derived over their own free
    variables and weakened afterwards, which keeps derivations small.
    """
    d = _derive(j.context, j.formula)
    if d.conclusion != j:
        raise AssertionError(f"derivation concluded {d.conclusion}, wanted {j}")
    return d


def _weaken_to(d: CcqDerivation, n: int) -> CcqDerivation:
    while d.conclusion.context < n:
        d = AddVar(d)
    return d


def _derive(n: int, f: CcqFormula) -> CcqDerivation:
    """Derive n |- f by compacting onto the free variables first."""
    fv = sorted(free_vars(f, n))
    if len(fv) == n:
        return _derive_full(n, f)
    d = _weaken_to(_derive_compact(n, f, fv), n)
    # send compact variable i back to position fv[i]
    perm = list(fv)
    perm.extend(sorted(set(range(n)) - set(fv)))
    return _apply_perm(d, perm)


def _derive_compact(n: int, f: CcqFormula, fv: list[int]) -> CcqDerivation:
    """Derive f over exactly its own free variables, renamed onto 0..|fv|-1."""
    if len(fv) == n:
        return _derive_full(n, f)
    compact = rename(f, n, len(fv), {v: i for i, v in enumerate(fv)})
    return _derive_full(len(fv), compact)


def _derive_full(n: int, f: CcqFormula) -> CcqDerivation:
    """Derive n |- f when every variable below n is free in f."""
    if isinstance(f, Top):
        return TopIntro()  # n == 0 after compaction
    if isinstance(f, Eq):
        if f.i == f.j:
            return MergeVars(EqIntro())  # 1 |- x0 = x0
        if (f.i, f.j) == (0, 1):
            return EqIntro()
        return SwapVars(EqIntro(), 0)  # 2 |- x1 = x0
    if isinstance(f, RelAtom):
        k = len(f.args)
        if f.args == tuple(range(k)):
            return RelIntro(f.symbol, k)
        d = RelIntro(f.symbol, k)
        pos = list(range(k))  # current position of argument slot s
        if n < k:  # repeated arguments: identify later slots with the first
            first: dict[int, int] = {}
            for s, v in enumerate(f.args):
                if v in first:
                    d, tr = _merge_positions(d, pos[first[v]], pos[s])
                    pos = [tr(p) for p in pos]
                else:
                    first[v] = s
        perm = [0] * n
        for s, v in enumerate(f.args):
            perm[pos[s]] = v
        return _apply_perm(d, perm)
    if isinstance(f, Conj):
        fvl = sorted(free_vars(f.lhs, n))
        fvr = sorted(free_vars(f.rhs, n))
        d = ConjIntro(_derive_compact(n, f.lhs, fvl),
                      _derive_compact(n, f.rhs, fvr))
        pos = {}
        for i, v in enumerate(fvl):
            pos[("l", v)] = i
        for i, v in enumerate(fvr):
            pos[("r", v)] = len(fvl) + i
        for v in sorted(set(fvl) & set(fvr)):
            d, tr = _merge_positions(d, pos[("l", v)], pos[("r", v)])
            pos = {key: tr(p) for key, p in pos.items()}
        perm = [0] * n
        for (side, v), p in pos.items():
            perm[p] = v
        return _apply_perm(d, perm)
    if isinstance(f, Exists):
        return ExistsIntro(_derive(n + 1, f.body))
    raise TypeError(f"not a formula: {f!r}")


# -- semantics ---------------------------------------------------------------

def _check_signature(f: CcqFormula, sig: Signature):
    if isinstance(f, RelAtom):
        sort = sig.sort(f.symbol)
        if sort.m != 0:
            raise SignatureError(f"symbol {f.symbol!r} has coarity {sort.m}, not a CQ symbol")
        if sort.n != len(f.args):
            raise SignatureError(f"symbol {f.symbol!r} expects {sort.n} arguments")
    elif isinstance(f, Conj):
        _check_signature(f.lhs, sig)
        _check_signature(f.rhs, sig)
    elif isinstance(f, Exists):
        _check_signature(f.body, sig)


def eval_ccq(j: CcqJudgment, model: RelModel) -> frozenset:
    """The set of context tuples satisfying the judgment in the model.

    Structural recursion on the formula; every subformula is evaluated as
    a set of assignments over its own free variables only (conjunction is
    a join, quantification a projection), then the result is padded out to
    the full context.  Keeps deeply quantified formulas tractable.
    """
    _check_signature(j.formula, model.signature)
    size = model.size
    vars_, rows = _eval_proj(j.formula, j.context, model)
    missing = [i for i in range(j.context) if i not in set(vars_)]
    slot = {v: k for k, v in enumerate(vars_)}
    out = set()
    for row in rows:
        for extra in product(range(size), repeat=len(missing)):
            pad = dict(zip(missing, extra))
            out.add(tuple(row[slot[i]] if i in slot else pad[i]
                          for i in range(j.context)))
    return frozenset(out)


def _join(avars, arows, bvars, brows):
    shared = tuple(v for v in avars if v in set(bvars))
    out_vars = tuple(sorted(set(avars) | set(bvars)))
    a_pos = {v: k for k, v in enumerate(avars)}
    b_pos = {v: k for k, v in enumerate(bvars)}
    index: dict = {}
    for row in brows:
        key = tuple(row[b_pos[v]] for v in shared)
        index.setdefault(key, []).append(row)
    out = set()
    for row in arows:
        key = tuple(row[a_pos[v]] for v in shared)
        for other in index.get(key, ()):
            out.add(tuple(row[a_pos[v]] if v in a_pos else other[b_pos[v]]
                          for v in out_vars))
    return out_vars, out


def _eval_proj(f: CcqFormula, ctx: int, model: RelModel):
    """Evaluate to (sorted free-variable tuple, assignment rows)."""
    size = model.size
    if isinstance(f, Top):
        return (), {()}
    if isinstance(f, Eq):
        if f.i == f.j:
            return (f.i,), {(v,) for v in range(size)}
        lo, hi = sorted((f.i, f.j))
        return (lo, hi), {(v, v) for v in range(size)}
    if isinstance(f, RelAtom):
        vars_ = tuple(sorted(set(f.args)))
        pos = {v: k for k, v in enumerate(vars_)}
        rows = set()
        for t, _ in model.rho[f.symbol]:
            env: dict = {}
            ok = True
            for a, val in zip(f.args, t):
                if env.setdefault(a, val) != val:
                    ok = False
                    break
            if ok:
                rows.add(tuple(env[v] for v in vars_))
        return vars_, rows
    if isinstance(f, Conj):
        avars, arows = _eval_proj(f.lhs, ctx, model)
        bvars, brows = _eval_proj(f.rhs, ctx, model)
        return _join(avars, arows, bvars, brows)
    if isinstance(f, Exists):
        cvars, crows = _eval_proj(f.body, ctx + 1, model)
        if ctx not in cvars:
            # vacuous quantifier: still needs a witness to exist
            return cvars, (crows if size > 0 else set())
        keep = tuple(k for k, v in enumerate(cvars) if v != ctx)
        return (tuple(v for v in cvars if v != ctx),
                {tuple(row[k] for k in keep) for row in crows})
    raise TypeError(f"not a formula: {f!r}")


def replay_eval(d: CcqDerivation, model: RelModel) -> frozenset:
    """Evaluate by recursion on a derivation, one clause per rule."""
    size = model.size
    if isinstance(d, TopIntro):
        return frozenset({()})
    if isinstance(d, EqIntro):
        return frozenset((v, v) for v in range(size))
    if isinstance(d, RelIntro):
        sort = model.signature.sort(d.symbol)
        if sort != (d.arity, 0):
            raise SignatureError(f"symbol {d.symbol!r} is not an arity-{d.arity} CQ symbol")
        return frozenset(a for a, _ in model.rho[d.symbol])
    if isinstance(d, ConjIntro):
        left = replay_eval(d.left, model)
        right = replay_eval(d.right, model)
        return frozenset(a + b for a in left for b in right)
    if isinstance(d, ExistsIntro):
        return frozenset(t[:-1] for t in replay_eval(d.child, model))
    if isinstance(d, SwapVars):
        k = d.k
        return frozenset(t[:k] + (t[k + 1], t[k]) + t[k + 2:]
                         for t in replay_eval(d.child, model))
    if isinstance(d, MergeVars):
        return frozenset(t[:-1] for t in replay_eval(d.child, model)
                         if t[-1] == t[-2])
    if isinstance(d, AddVar):
        return frozenset(t + (w,) for t in replay_eval(d.child, model)
                         for w in range(size))
    raise TypeError(f"not a derivation: {d!r}")


# -- concrete syntax ---------------------------------------------------------
#
#   judgment := ctx '|-' formula  |  ctx ',' ctx '|-' formula
#   formula  := conj;  conj := unit ('/\' unit)*
#   unit     := 'top' | var '=' var | Sym '(' var,* ')'
#             | 'exists' name '.' conj | '(' formula ')'
#
# In a one-sided judgment the free variables are x0..x{n-1}; a two-sided
# header "n,m |-" adds y0..y{m-1} (stored at indices n..n+m-1).  Quantifier
# names are arbitrary identifiers; shadowing is rejected.

_CCQ_TOKEN = re.compile(r"\s*(\|-|/\\|[(),.=]|[A-Za-z_][A-Za-z0-9_]*|\d+)")


def _ccq_tokens(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        match = _CCQ_TOKEN.match(text, pos)
        if not match:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos:].strip()[0]!r}")
            break
        out.append(match.group(1))
        pos = match.end()
    return out


def parse_ccq(text: str, sig: Signature) -> CcqJudgment:
    """Parse "n |- formula" (or "n,m |- formula") against a signature."""
    left, right, formula = parse_ccq_two_sided(text, sig)
    return CcqJudgment(left + right, formula)


def parse_ccq_two_sided(text: str, sig: Signature):
    tokens = _ccq_tokens(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        pos += 1
        return tok

    def expect(tok):
        got = take()
        if got != tok:
            raise ParseError(f"expected {tok!r}, found {got!r}")

    def natural():
        tok = take()
        if not tok.isdigit():
            raise ParseError(f"expected a context size, found {tok!r}")
        return int(tok)

    left = natural()
    right = 0
    if peek() == ",":
        take()
        right = natural()
    expect("|-")
    n_free = left + right

    bound: dict[str, int] = {}

    def resolve(name: str) -> int:
        if name in bound:
            return bound[name]
        mx = re.fullmatch(r"x(\d+)", name)
        if mx:
            i = int(mx.group(1))
            if i >= left:
                raise ParseError(f"free variable x{i} out of context {left}")
            return i
        my = re.fullmatch(r"y(\d+)", name)
        if my and right > 0:
            i = int(my.group(1))
            if i >= right:
                raise ParseError(f"free variable y{i} out of context {right}")
            return left + i
        raise ParseError(f"unbound variable {name!r}")

    def variable() -> int:
        tok = take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok):
            raise ParseError(f"expected a variable, found {tok!r}")
        return resolve(tok)

    def unit(depth: int) -> CcqFormula:
        tok = peek()
        if tok == "(":
            take()
            out = conj(depth)
            expect(")")
            return out
        if tok == "top":
            take()
            return Top()
        if tok == "exists":
            take()
            name = take()
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in ("top", "exists"):
                raise ParseError(f"bad quantifier variable {name!r}")
            if name in bound:
                raise ParseError(f"shadowed variable {name!r}")
            if re.fullmatch(r"x(\d+)", name) and int(name[1:]) < left:
                raise ParseError(f"shadowed variable {name!r}")
            if right > 0 and re.fullmatch(r"y(\d+)", name) and int(name[1:]) < right:
                raise ParseError(f"shadowed variable {name!r}")
            expect(".")
            bound[name] = n_free + depth
            body = conj(depth + 1)
            del bound[name]
            return Exists(body)
        if tok is not None and re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) and \
                pos + 1 < len(tokens) and tokens[pos + 1] == "(":
            name = take()
            try:
                sort = sig.sort(name)
            except SignatureError as exc:
                raise ParseError(str(exc)) from None
            if sort.m != 0:
                raise ParseError(f"symbol {name!r} has coarity {sort.m}; CQ atoms need 0")
            expect("(")
            args = []
            if peek() != ")":
                args.append(variable())
                while peek() == ",":
                    take()
                    args.append(variable())
            expect(")")
            if len(args) != sort.n:
                raise ParseError(f"symbol {name!r} expects {sort.n} arguments, got {len(args)}")
            return RelAtom(name, tuple(args))
        # bare variable must open an equation
        i = variable()
        expect("=")
        jdx = variable()
        return Eq(i, jdx)

    def conj(depth: int) -> CcqFormula:
        out = unit(depth)
        while peek() == "/\\":
            take()
            out = Conj(out, unit(depth))
        return out

    formula = conj(0)
    if pos != len(tokens):
        raise ParseError(f"trailing input near {tokens[pos]!r}")
    try:
        _check(formula, n_free)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return left, right, formula


def print_ccq(j: CcqJudgment) -> str:
    return f"{j.context} |- {format_formula(j.formula, j.context, 0)}"


def format_formula(f: CcqFormula, left: int, right: int) -> str:
    """Render with x/y free variables and z-named bound variables."""
    n_free = left + right

    def var(i: int) -> str:
        if i < left:
            return f"x{i}"
        if i < n_free:
            return f"y{i - left}"
        return f"z{i - n_free}"

    def go(u: CcqFormula, depth: int, outer: bool) -> str:
        if isinstance(u, Top):
            return "top"
        if isinstance(u, Eq):
            body = f"{var(u.i)} = {var(u.j)}"
            return body if outer else f"({body})"
        if isinstance(u, RelAtom):
            return f"{u.symbol}({', '.join(var(a) for a in u.args)})"
        if isinstance(u, Conj):
            body = f"{go(u.lhs, depth, False)} /\\ {go(u.rhs, depth, False)}"
            return body if outer else f"({body})"
        if isinstance(u, Exists):
            body = f"exists z{depth}. {go(u.body, depth + 1, True)}"
            return body if outer else f"({body})"
        raise TypeError(f"not a formula: {u!r}")

    return go(f, 0, True)
