"""Command line front end.

Every command writes JSON (or DOT for ``poset dot``) to stdout or ``--output``.
Failures print a JSON error object on stderr and exit with the code of the
exception class.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import barriers as bar
from .constructions import domination_order, downset_lattice, lex_sum, product, rado_truncation, seq_embed_order
from .coverability import Verdict, backward_cover, forward_oracle
from .dress_schiffels import antilex_relation, ds_fragment
from .errors import OrdercraftError, ParseError
from .formats import (
    barrier_from_json,
    barrier_to_json,
    colouring_from_json,
    dumps,
    family_from_json,
    loads,
    parse_vector,
    poset_from_json,
    poset_to_dot,
    poset_to_json,
    vass_from_json,
)
from .poset import Poset, cones, label_of, maximals, minimals, size_cap, width
from .structure import antichain_rank, check_decomposition, decompose, spine_of
from .suites import MUTANTS, SUITES, run_suite

EXIT_CODES = """exit codes:
  0  success
  1  other ordercraft error
  2  unreadable or malformed input
  3  invariant violation (including cycles in a declared order)
  4  size cap exceeded (--cap, or ORDERCRAFT_CAP in the environment)
  5  property suite failure
  6  precondition not met by the arguments
  7  bounded search exhausted (base too small, iteration cap)
"""


def _read_json(path: str | None) -> Any:
    if path is None:
        raise ParseError("--input is required")
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def _labels(P: Poset, xs) -> list[str]:
    return sorted(label_of(x) for x in xs)


# poset


def cmd_poset(args: argparse.Namespace) -> Any:
    P = poset_from_json(_read_json(args.input))
    if args.action == "build":
        return poset_to_json(P)
    if args.action == "dot":
        return poset_to_dot(P)
    D = decompose(P, coalesce=True)
    return {
        "size": len(P),
        "minimals": _labels(P, minimals(P)),
        "maximals": _labels(P, maximals(P)),
        "width": width(P),
        "antichain_rank": antichain_rank(P, args.cap),
        "cones": {
            label_of(q): {"comparable": _labels(P, c), "incomparable": _labels(P, i)}
            for q in P for c, i in [cones(P, q)]
        },
        "decomposition": {
            **D.to_json(),
            "check": check_decomposition(P, D).to_json(),
            "spine_order": poset_to_json(spine_of(D)),
        },
    }


# order


def cmd_order(args: argparse.Namespace) -> Any:
    cap = args.cap
    if args.action == "rado":
        return poset_to_json(rado_truncation(args.n, cap))
    if args.action == "product":
        if len(args.input or []) != 2:
            raise ParseError("product needs exactly two --input files")
        P, Q = (poset_from_json(_read_json(p)) for p in args.input)
        return poset_to_json(product(P, Q, cap))
    if args.action == "lexsum":
        doc = _read_json(_single(args.input))
        if not isinstance(doc, dict) or not isinstance(doc.get("parts"), dict):
            raise ParseError("lexsum input needs an object with 'index' and 'parts'")
        index = poset_from_json(doc.get("index"), "index")
        parts = {q: poset_from_json(p, f"part {q}") for q, p in doc["parts"].items()}
        return poset_to_json(lex_sum(index, parts, cap))
    if args.action == "ds":
        fam = family_from_json(_read_json(_single(args.input)))
        F = ds_fragment(fam, args.caps, cap)
        if args.antilex:
            F = Poset(F.elements, antilex_relation(fam, list(F.elements)))
        return poset_to_json(F)
    P = poset_from_json(_read_json(_single(args.input)))
    if args.action == "powerdom":
        return poset_to_json(domination_order(P, cap))
    if args.action == "downsets":
        return poset_to_json(downset_lattice(P, cap))
    S = seq_embed_order(P, args.length, cap)
    out = poset_to_json(S)
    out["sequences"] = [[label_of(x) for x in s] for s in S.elements]
    return out


def _single(paths: list[str] | None) -> str | None:
    if paths and len(paths) > 1:
        raise ParseError("this command takes a single --input")
    return paths[0] if paths else None


# barriers


def _barrier_seq(args: argparse.Namespace) -> bar.BarrierSeq:
    if args.rado is not None:
        return bar.rado_bad_array(args.rado)
    B = barrier_from_json(_read_json(args.input))
    if args.target is None or args.values is None:
        raise ParseError("give --rado N, or --input with --target and --values")
    P = poset_from_json(_read_json(args.target))
    return bar.BarrierSeq(B, P, colouring_from_json(_read_json(args.values)))


def cmd_barrier(args: argparse.Namespace) -> Any:
    enc = bar.encode_block
    if args.action == "square":
        return barrier_to_json(bar.barrier_square(barrier_from_json(_read_json(args.input))))
    if args.action == "successive":
        B = barrier_from_json(_read_json(args.input))
        seq = bar.successive_sequence(B, parse_vector(args.r), parse_vector(args.s))
        return {"sequence": [enc(b) for b in seq]}
    if args.action == "classify":
        c = bar.classify_sequence(_barrier_seq(args))
        return {
            "verdict": c.verdict,
            "perfect": c.perfect,
            "witness": None if c.witness is None else [enc(b) for b in c.witness],
        }
    if args.action == "dichotomy":
        H, tag = bar.dichotomy(_barrier_seq(args), args.m)
        return {"verdict": tag, "base": list(H.effective_base), "blocks": [enc(b) for b in H.blocks]}
    B = barrier_from_json(_read_json(args.input))
    if args.g is None or args.beta is None:
        raise ParseError("refine needs --g and --beta")
    beta = colouring_from_json(_read_json(args.beta))
    C, choice = bar.choice_refine(B, colouring_from_json(_read_json(args.g)), beta, args.m)
    return {"base": list(C.effective_base), "choice": {enc(a): v for a, v in sorted(choice.items())}}


# coverability


def cmd_cover(args: argparse.Namespace) -> Any:
    v = vass_from_json(_read_json(args.input))
    init, target = parse_vector(args.init), parse_vector(args.target)
    result = backward_cover(v, init, target, args.max_iterations)
    out = result.to_json()
    if args.oracle_depth:
        fwd = forward_oracle(v, init, target, args.oracle_depth, args.oracle_value_cap)
        out["oracle"] = {"verdict": fwd.verdict.value, "depth": fwd.depth, "explored": fwd.explored}
        if fwd.verdict is not Verdict.INCONCLUSIVE and fwd.verdict is not result.verdict:
            out["oracle"]["disagrees"] = True
    return out


# suites


class SuiteFailed(OrdercraftError):
    exit_code = 5


def cmd_suite(args: argparse.Namespace) -> Any:
    comparator = MUTANTS[args.mutant] if args.mutant else None
    report = run_suite(args.name, args.seed, args.budget, comparator)
    args.failed = not report["passed"]
    return report


def _suite_table(report: dict) -> str:
    rows = [f"suite {report['suite']}  seed {report['seed']}  budget {report['budget']}"]
    for name, r in report["properties"].items():
        mark = "pass" if r["passed"] else "FAIL"
        extra = "" if r["passed"] else f"  seed={r['seed']}  {json.dumps(r['counterexample'], sort_keys=True)}"
        rows.append(f"  {mark}  {name:40s} {r['instances']:>7}{extra}")
    rows.append("PASSED" if report["passed"] else "FAILED")
    return "\n".join(rows) + "\n"


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the result here instead of stdout")
    common.add_argument("--cap", type=int, help="element cap for exponential constructions "
                        f"(default: ORDERCRAFT_CAP or {size_cap()})")
    common.add_argument("--pretty", action="store_true", help="indented JSON; a table for suite reports")

    parser = argparse.ArgumentParser(
        prog="ordercraft",
        description="Finite partial orders, barriers and coverability.",
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    groups = parser.add_subparsers(dest="command", required=True)

    p = groups.add_parser("poset", parents=[common], help="build, analyze or draw a poset",
                          epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("action", choices=["build", "analyze", "dot"])
    p.add_argument("--input", "-i", help="poset JSON file, or - for stdin")
    p.set_defaults(run=cmd_poset)

    o = groups.add_parser("order", parents=[common], help="construct a derived order",
                          epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    o.add_argument("action", choices=["product", "lexsum", "ds", "powerdom", "downsets", "seqembed", "rado"])
    o.add_argument("--input", "-i", action="append", help="input file; product takes two")
    o.add_argument("--n", type=int, default=4, help="rado: largest coordinate")
    o.add_argument("--length", type=int, default=2, help="seqembed: longest sequence")
    o.add_argument("--caps", type=int, default=None, help="ds: non-zero values kept per coordinate")
    o.add_argument("--antilex", action="store_true", help="ds: order by top-down first difference")
    o.set_defaults(run=cmd_order)

    b = groups.add_parser("barrier", parents=[common], help="barrier combinatorics",
                          epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    b.add_argument("action", choices=["square", "successive", "classify", "dichotomy", "refine"])
    b.add_argument("--input", "-i", help="barrier JSON file")
    b.add_argument("--r", help="successive: first block, e.g. 3,7")
    b.add_argument("--s", help="successive: second block, e.g. 16,20")
    b.add_argument("--rado", type=int, help="classify/dichotomy: use the Rado array over {0..N}")
    b.add_argument("--target", help="classify/dichotomy: target poset JSON")
    b.add_argument("--values", help="classify/dichotomy: block-to-element JSON map")
    b.add_argument("--g", help="refine: square-block-to-value JSON map")
    b.add_argument("--beta", help="refine: block-to-list-of-values JSON map")
    b.add_argument("--m", type=int, default=3, help="minimum base size of the result")
    b.set_defaults(run=cmd_barrier)

    c = groups.add_parser("cover", parents=[common], help="coverability of a vector addition system",
                          epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    c.add_argument("--input", "-i", help="net JSON file")
    c.add_argument("--init", required=True, help="initial marking, e.g. 1,0")
    c.add_argument("--target", required=True, help="marking to cover, e.g. 0,1")
    c.add_argument("--max-iterations", type=int, default=10_000)
    c.add_argument("--oracle-depth", type=int, default=0, help="also run the forward search to this depth")
    c.add_argument("--oracle-value-cap", type=int, default=None)
    c.set_defaults(run=cmd_cover)

    s = groups.add_parser("suite", parents=[common], help="run property suites",
                          epilog=EXIT_CODES, formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("name", choices=["all", *SUITES])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=None, help="cap on random instances per property")
    s.add_argument("--mutant", choices=sorted(MUTANTS), help="swap in a broken comparator (self-test)")
    s.set_defaults(run=cmd_suite)
    return parser


def _emit(result: Any, args: argparse.Namespace) -> None:
    if isinstance(result, str):
        text = result
    elif args.command == "suite" and args.pretty:
        text = _suite_table(result)
    else:
        text = dumps(result, args.pretty)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.failed = False
    try:
        result = args.run(args)
        _emit(result, args)
    except OrdercraftError as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "message": str(exc)}))
        return exc.exit_code
    return SuiteFailed.exit_code if args.failed else 0


if __name__ == "__main__":
    sys.exit(main())
