"""The ``irew`` command: one subcommand per library capability.

Exit codes: 0 affirmative, 1 negative/invalid/exhausted, 2 input error,
3 resource exceeded. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from .compression import compress, linearize, ored_from_json, ored_to_json, validate_ored
from .errors import (
    InputError,
    IrewError,
    NotLeftLinear,
    NotOmega,
    NotProductive,
    ReplayError,
    ResourceExceeded,
    TermSyntaxError,
    WrongKind,
)
from .proofs import ProofCert, cert_from_json, cert_to_json, check_valid
from .search import Exhausted, SearchBudget, search_proof
from .semantics import canonical_prefix, prefix_agreement, steps_at_depth
from .sequences import (
    canonical_tree_of,
    permutation_equiv,
    permutation_equiv_bruteforce,
    seq_from_json,
    seq_to_json,
)
from .terms import Signature, Term, bisimilar, parse_term, parse_with_inference, tokenize
from .trs import Trs, parse_trs, with_symbols

OK, NEGATIVE, INPUT_ERROR, RESOURCE = 0, 1, 2, 3


class _Negative(Exception):
    """A well-formed request with a negative answer."""


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


def _read_trs(path: str) -> Trs:
    try:
        return parse_trs(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _emit(doc: Any, out: str | None = None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _infer_terms(texts: Sequence[str], sig: Signature = Signature()) -> tuple[list[Term], dict[str, int]]:
    """Parse terms, inferring arities of symbols missing from ``sig`` by first use."""
    arities: dict[str, int] = {}
    out = []
    for text in texts:
        toks = tokenize(text)
        term, end = parse_with_inference(toks, 0, sig, arities)
        if end != len(toks):
            raise TermSyntaxError(f"trailing input at {toks[end]!r}")
        out.append(term)
    return out, arities


def _seq_texts(doc: Any) -> list[str]:
    """Term texts inside a sequence document, for signature inference."""
    if not isinstance(doc, dict) or not isinstance(doc.get("source"), str):
        return []
    texts = [doc["source"]]
    for st in doc.get("steps") or []:
        if isinstance(st, dict) and isinstance(st.get("subst"), dict):
            texts.extend(v for v in st["subst"].values() if isinstance(v, str))
    return texts


def _with_term_symbols(trs: Trs, texts: Sequence[str]) -> Trs:
    """The TRS with rule-free symbols used in ``texts`` added to its signature.

    TRS files only declare symbols through rules, so constructors such as a
    binary pairing symbol would otherwise be unknown.
    """
    _, extra = _infer_terms(texts, trs.signature)
    return with_symbols(trs, extra) if extra else trs


def _valid_cert(path: str, trs: Trs) -> ProofCert:
    cert = cert_from_json(_read_json(path))
    verdict = check_valid(cert, trs)
    if not verdict:
        raise _Negative(f"invalid certificate: {verdict}")
    return cert


def _steps_json(steps) -> list[dict]:
    return [{"pos": list(p), "rule": r} for p, r in steps]


# -- subcommands -----------------------------------------------------------------------


def cmd_check(args) -> int:
    trs = _read_trs(args.trs)
    cert = cert_from_json(_read_json(args.cert))
    verdict = check_valid(cert, trs)
    print(str(verdict))
    return OK if verdict else NEGATIVE


def cmd_search(args) -> int:
    trs = _with_term_symbols(_read_trs(args.trs), [args.source, args.target])
    s, t = parse_term(args.source, trs.signature), parse_term(args.target, trs.signature)
    budget = SearchBudget(args.max_goals, args.max_segment, args.max_new_terms)
    result = search_proof(s, t, args.kind, trs, budget)
    if isinstance(result, Exhausted):
        _emit({"result": "exhausted", "reason": result.reason, "goals": result.goals, "terms": result.terms})
        print(str(result), file=sys.stderr)
        return NEGATIVE
    doc = cert_to_json(result)
    if args.emit:
        _emit(doc, args.emit)
        _emit({"result": "found", "nodes": len(result), "file": args.emit})
    else:
        _emit(doc)
    return OK


def cmd_compress(args) -> int:
    trs = _read_trs(args.trs)
    cert = _valid_cert(args.cert, trs)
    _emit(ored_to_json(compress(cert, trs), trs), args.out)
    return OK


def cmd_prefix(args) -> int:
    trs = _read_trs(args.trs)
    doc = _read_json(args.cert)
    if isinstance(doc, dict) and "kind" not in doc:
        if args.steps is None:
            raise InputError("ored certificates support --steps only")
        ored = ored_from_json(doc, trs)
        verdict = validate_ored(ored, trs)
        if not verdict:
            raise _Negative(f"invalid ored certificate: {verdict}")
        _emit(seq_to_json(linearize(ored, args.steps), trs))
        return OK
    cert = cert_from_json(doc)
    verdict = check_valid(cert, trs)
    if not verdict:
        raise _Negative(f"invalid certificate: {verdict}")
    if args.steps is not None:
        _emit(seq_to_json(canonical_prefix(cert, args.steps), trs))
        return OK
    red, agrees = prefix_agreement(cert, args.depth, trs)
    _emit({"sequence": seq_to_json(red, trs), "agrees": agrees})
    return OK if agrees else NEGATIVE


def cmd_equiv(args) -> int:
    trs = _read_trs(args.trs)
    if len(args.seq) != 2:
        raise InputError("equiv needs exactly two --seq files")
    docs = [_read_json(p) for p in args.seq]
    trs = _with_term_symbols(trs, [x for d in docs for x in _seq_texts(d)])
    a, b = (seq_from_json(d, trs.signature) for d in docs)
    if args.oracle == "brute":
        w = permutation_equiv_bruteforce(a, b, trs)
        _emit({"equivalent": w is not None, "witness": None if w is None else list(w.mapping)})
        return OK if w is not None else NEGATIVE
    same = permutation_equiv(a, b, trs)
    _emit({"equivalent": same})
    return OK if same else NEGATIVE


def cmd_canon(args) -> int:
    doc = _read_json(args.seq)
    trs = _with_term_symbols(_read_trs(args.trs), _seq_texts(doc))
    red = seq_from_json(doc, trs.signature)
    _emit(cert_to_json(canonical_tree_of(red, trs)), args.out)
    return OK


def cmd_bisim(args) -> int:
    if args.sig:
        sig = _read_trs(args.sig).signature
        s, t = parse_term(args.left, sig), parse_term(args.right, sig)
    else:
        (s, t), _ = _infer_terms([args.left, args.right])
    same = bisimilar(s, t)
    print("true" if same else "false")
    return OK if same else NEGATIVE


def cmd_steps_at_depth(args) -> int:
    trs = _read_trs(args.trs)
    cert = _valid_cert(args.cert, trs)
    _emit(_steps_json(steps_at_depth(cert, args.depth)))
    return OK


# -- parser ------------------------------------------------------------------------------


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = _nonneg(text)
    if value == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irew", description="Coinductive infinitary rewriting toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate a certificate")
    c.add_argument("--trs", required=True)
    c.add_argument("--cert", required=True)
    c.set_defaults(func=cmd_check)

    defaults = SearchBudget()
    c = sub.add_parser("search", help="search for a certificate")
    c.add_argument("--trs", required=True)
    c.add_argument("--kind", required=True, choices=["ired", "ibi", "ieq"])
    c.add_argument("--from", dest="source", required=True)
    c.add_argument("--to", dest="target", required=True)
    c.add_argument("--emit", help="write the certificate to this file")
    c.add_argument("--max-goals", type=_positive, default=defaults.max_goals)
    c.add_argument("--max-segment", type=_positive, default=defaults.max_segment)
    c.add_argument("--max-new-terms", type=_positive, default=defaults.max_new_terms)
    c.set_defaults(func=cmd_search)

    c = sub.add_parser("compress", help="compress an ired certificate to ored form")
    c.add_argument("--trs", required=True)
    c.add_argument("--cert", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compress)

    c = sub.add_parser("prefix", help="canonical prefix of a certificate")
    c.add_argument("--trs", required=True)
    c.add_argument("--cert", required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--steps", type=_nonneg)
    g.add_argument("--depth", type=_nonneg)
    c.set_defaults(func=cmd_prefix)

    c = sub.add_parser("equiv", help="parallel permutation equivalence of two sequences")
    c.add_argument("--trs", required=True)
    c.add_argument("--seq", action="append", required=True)
    c.add_argument("--oracle", choices=["brute", "canonical"], default="canonical")
    c.set_defaults(func=cmd_equiv)

    c = sub.add_parser("canon", help="canonical certificate of a finite sequence")
    c.add_argument("--trs", required=True)
    c.add_argument("--seq", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_canon)

    c = sub.add_parser("bisim", help="bisimilarity of two rational terms")
    c.add_argument("left")
    c.add_argument("right")
    c.add_argument("--sig", help="TRS file supplying the signature")
    c.set_defaults(func=cmd_bisim)

    c = sub.add_parser("steps-at-depth", help="canonical steps at positions of bounded length")
    c.add_argument("--trs", required=True)
    c.add_argument("--cert", required=True)
    c.add_argument("--depth", type=_nonneg, required=True)
    c.set_defaults(func=cmd_steps_at_depth)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Negative as e:
        print(str(e), file=sys.stderr)
        return NEGATIVE
    except (InputError, ReplayError, WrongKind) as e:
        print(f"input error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except ResourceExceeded as e:
        print(f"resource exceeded: {e}", file=sys.stderr)
        return RESOURCE
    except (NotLeftLinear, NotOmega, NotProductive) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return NEGATIVE
    except IrewError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))
