"""Command-line front end.

Subcommands: check, eval, translate, export-dot, axioms-verify.
Query files are UTF-8; a leading ``signature: <path>`` line names the
signature file (relative to the query file), and the ``--sig`` flag wins
over the header.  Files containing ``|-`` are judgments, anything else is
a diagram term.

Exit codes: 0 the requested relation holds / success, 1 it fails to hold,
2 parse or usage error.  Nothing is printed on stdout for exit 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .axioms import axiom_catalog, verify_axiom_graphical, verify_axiom_semantic
from .ccq import eval_ccq, parse_ccq
from .containment import decide_equivalence, decide_inclusion
from .cospan import cospan_to_dot, term_to_cospan
from .errors import CqError
from .gcq import eval_gcq, parse_gcq, print_gcq
from .sigmodel import Signature, dump_model, load_model, load_signature, random_model
from .translate import lambda_model, lambda_term, theta, theta_model


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_query_file(path: str, sig_flag: str | None):
    text = _read(path)
    lines = text.splitlines()
    sig_path = None
    if lines and lines[0].strip().startswith("signature:"):
        sig_path = lines[0].split(":", 1)[1].strip()
        lines = lines[1:]
    body = "\n".join(lines).strip()
    if sig_flag:
        sig = load_signature(_read(sig_flag))
    elif sig_path:
        sig = load_signature(_read(str(Path(path).parent / sig_path)))
    else:
        raise CqError(f"no signature for {path}: pass --sig or add a signature: header")
    return body, sig


def _parse_query(body: str, sig: Signature):
    """Returns ('ccq', judgment) or ('gcq', term)."""
    if "|-" in body:
        return "ccq", parse_ccq(body, sig)
    return "gcq", parse_gcq(body, sig)


def cmd_check(args) -> int:
    body_a, sig = _load_query_file(args.lhs, args.sig)
    body_b, sig_b = _load_query_file(args.rhs, args.sig)
    sig = sig.merged(sig_b)
    kind_a, qa = _parse_query(body_a, sig)
    kind_b, qb = _parse_query(body_b, sig)
    ta = theta(qa) if kind_a == "ccq" else qa
    tb = theta(qb) if kind_b == "ccq" else qb
    if args.mode == "equivalence":
        verdict = decide_equivalence(ta, tb, budget=args.budget)
        holds = verdict.holds
        doc = {"holds": holds,
               "forward": verdict.forward.to_json_dict(),
               "backward": verdict.backward.to_json_dict()}
    else:
        inc = decide_inclusion(ta, tb, budget=args.budget)
        holds = inc.holds
        doc = inc.to_json_dict()
    if args.format == "json":
        print(json.dumps(doc))
    else:
        rel = "equivalent to" if args.mode == "equivalence" else "included in"
        print(f"{'HOLDS' if holds else 'FAILS'}: lhs {rel} rhs")
        if not holds and doc.get("countermodel"):
            print("countermodel:", json.dumps(doc["countermodel"]))
        if holds and doc.get("witness"):
            print("witness:", json.dumps(doc["witness"]))
    return 0 if holds else 1


def cmd_eval(args) -> int:
    body, sig = _load_query_file(args.query, args.sig)
    model = load_model(_read(args.model), sig)
    kind, q = _parse_query(body, sig)
    names = model.carrier
    if kind == "ccq":
        rows = sorted(eval_ccq(q, model))
        doc = [[names[x] for x in row] for row in rows]
        lines = [", ".join(row) for row in doc]
    else:
        rel = eval_gcq(q, model)
        doc = [[[names[x] for x in a], [names[x] for x in b]]
               for a, b in rel.sorted_pairs()]
        lines = [f"({', '.join(a)}) -> ({', '.join(b)})" for a, b in doc]
    if args.format == "text":
        for line in lines:
            print(line)
    else:
        print(json.dumps(doc))
    return 0


def _spot_check_theta(j, term, sig, trials, seed) -> bool:
    rng = random.Random(seed)
    for _ in range(trials):
        model = random_model(sig, rng.randint(0, 3), rng)
        left = eval_ccq(j, model)
        gm = theta_model(model)
        rel = eval_gcq(term, gm)
        if left != frozenset(a for a, _ in rel.pairs):
            return False
    return True


def _spot_check_lambda(term, tsj, sig, trials, seed) -> bool:
    from .ccq import eval_ccq as eval_j
    rng = random.Random(seed)
    for _ in range(trials):
        model = random_model(sig, rng.randint(0, 3), rng)
        rel = eval_gcq(term, model)
        flat = eval_j(tsj.as_judgment(), lambda_model(model))
        if frozenset(a + b for a, b in rel.pairs) != flat:
            return False
    return True


def cmd_translate(args) -> int:
    body, sig = _load_query_file(args.query, args.sig)
    kind, q = _parse_query(body, sig)
    if kind == "ccq":
        term = theta(q)
        print(print_gcq(term))
        if args.verify and not _spot_check_theta(q, term, sig, args.trials, args.seed):
            print("verification failed", file=sys.stderr)
            return 1
    else:
        tsj = lambda_term(q)
        print(str(tsj))
        if args.verify and not _spot_check_lambda(q, tsj, sig, args.trials, args.seed):
            print("verification failed", file=sys.stderr)
            return 1
    return 0


def cmd_export_dot(args) -> int:
    body, sig = _load_query_file(args.query, args.sig)
    kind, q = _parse_query(body, sig)
    term = theta(q) if kind == "ccq" else q
    dot = cospan_to_dot(term_to_cospan(term))
    if args.output:
        Path(args.output).write_text(dot + "\n", encoding="utf-8")
    else:
        print(dot)
    return 0


def cmd_axioms_verify(args) -> int:
    sig = load_signature(_read(args.sig)) if args.sig else Signature({"R": (1, 1)})
    entries = axiom_catalog(sig)
    all_passed = True
    for entry in entries:
        semantic = verify_axiom_semantic(entry, trials=args.trials,
                                         max_carrier=args.max_carrier,
                                         seed=args.seed, sig=sig)
        graphical = verify_axiom_graphical(entry)
        passed = semantic.passed and graphical.passed
        all_passed &= passed
        line = f"{entry.name}: {'PASS' if passed else 'FAIL'}"
        if not semantic.passed and semantic.countermodel is not None:
            line += " countermodel " + dump_model(semantic.countermodel)
        if not graphical.passed:
            line += " (graphical check failed)"
        print(line)
    return 0 if all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqgraph",
                                     description="conjunctive query toolbox")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide inclusion or equivalence of two queries")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--sig")
    p.add_argument("--mode", choices=["inclusion", "equivalence"], default="inclusion")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eval", help="evaluate a query over a model")
    p.add_argument("query")
    p.add_argument("model")
    p.add_argument("--sig")
    p.add_argument("--format", choices=["text", "json"], default="json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("translate", help="translate between formulas and terms")
    p.add_argument("query")
    p.add_argument("--sig")
    p.add_argument("--verify", action="store_true",
                   help="spot-check semantics preservation on random models")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("export-dot", help="export the compiled cospan as DOT")
    p.add_argument("query")
    p.add_argument("--sig")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("axioms-verify", help="verify the whole law catalog")
    p.add_argument("--sig")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-carrier", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_axioms_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        for flag in ("budget", "trials", "max_carrier"):
            value = getattr(args, flag, None)
            if value is not None and value <= 0:
                raise CqError(f"--{flag.replace('_', '-')} must be positive")
        return args.func(args)
    except (CqError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
