"""Command-line interface.

Exit codes: 0 success, 2 parse error, 3 precondition failure,
4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import (ChainMapError, FiltrationError, HeaderMismatchError, NonAdmissibleError, ParseError,
                     VerificationError)
from .exterior import LOWER, UPPER, ExtOperator, format_terms, parse_operator
from .fields import Field, default_field, parse_field
from .homology import ConstrainedComplex, localized_homology
from .hypergraph import (VertexTable, classify, closure_by_name, density, parse_hypergraph, sample_random,
                         serialize_hypergraph)
from .io import parse_partition, parse_weights
from .koszul import build_koszul_complex, check_exactness, koszul_image
from .mayer_vietoris import mv_hypergraph
from .persistence import derived_filtration, load_filtration, persistent_homology, verify_barcode

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4


class CliFailure(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliFailure(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from None


def _field(args) -> Field:
    if args.coeff:
        return parse_field(args.coeff)
    return default_field()


def _index_range(text: str | None, default_top: int) -> range:
    if text is None:
        return range(0, default_top + 1)
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ParseError(f"bad index range {text!r}; expected a..b") from None
    if lo < 0 or hi < lo:
        raise ParseError(f"index range {text!r} is empty or negative")
    return range(lo, hi + 1)


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands ---------------------------------------------------------------

def cmd_closure(args) -> int:
    H = parse_hypergraph(_read(args.input))
    sys.stdout.write(serialize_hypergraph(closure_by_name(args.kind)(H)))
    return EXIT_OK


def cmd_classify(args) -> int:
    H = parse_hypergraph(_read(args.input))
    d = density(H).to_json()
    _emit({"vertices": list(H.ambient.names), "edges": len(H), "classification": classify(H), "density": d})
    return EXIT_OK


def cmd_koszul(args) -> int:
    field = _field(args)
    H = parse_hypergraph(_read(args.input))
    table = H.ambient
    weights = parse_weights(_read(args.weights), table, field, default=1) if args.weights else \
        {v: field.one for v in range(len(table))}
    K = build_koszul_complex(H, weights, args.variance, field)
    report = {
        "coefficients": field.name,
        "variance": args.variance,
        "admissible": [table.names[v] for v in K.generators],
    }
    if K.is_trivial:
        report.update({"trivial": True, "notice": "trivial complex", "exact": True, "nodes": []})
        _emit(report)
        return EXIT_OK
    ex = check_exactness(K.complex)
    report["trivial"] = False
    report["nodes"] = [{"degree": n.label, "dim": n.dim, "defect": d, "exact": d == 0}
                       for n, d in zip(K.complex.nodes, ex.defects)]
    report["exact"] = ex.exact
    # generators of the kernel at exterior degree 1
    if len(K.generators) >= 2:
        pairs = [mono for mono in K.complex.nodes[-3].basis]
        images = [koszul_image(K.weights, mono, field) for mono in pairs]
        report["kernel_degree_1"] = [format_terms(t, args.variance, field, table) for t in images if t]
    _emit(report)
    nonvanishing = all(K.weights[v] for v in K.generators)
    if nonvanishing and not ex.exact:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_homology(args) -> int:
    field = _field(args)
    H = parse_hypergraph(_read(args.input))
    table = H.ambient
    if args.part:
        weights = parse_weights(_read(args.weights), table, field, default=1) if args.weights else \
            {v: field.one for v in range(len(table))}
        blocks = parse_partition(_read(args.part), table)
        variance = args.variance or LOWER
        top = len(table) - 1
        rng = _index_range(args.range, top)
        out = []
        for block in blocks:
            sums = [localized_homology(H, weights, block, n, field, variance).to_json() for n in rng]
            out.append({"block": [table.names[v] for v in block], "homology": sums})
        _emit({"coefficients": field.name, "variance": variance, "blocks": out})
        return EXIT_OK
    if not args.op:
        raise CliFailure("--op is required unless --part is given", EXIT_PARSE)
    op = parse_operator(args.op, table, field)
    if args.variance and op.degree and args.variance != op.variance:
        raise CliFailure("--variance contradicts the operator", EXIT_PRECONDITION)
    C = ConstrainedComplex(H, op, args.m)
    rng = _index_range(args.range, C.top_index)
    sums = [C.homology(n).to_json() for n in rng]
    _emit({
        "coefficients": field.name,
        "operator": op.format(table),
        "variance": op.variance,
        "m": args.m,
        "betti": [s["betti"] for s in sums],
        "homology": sums,
    })
    return EXIT_OK


def cmd_mv(args) -> int:
    field = _field(args)
    A = parse_hypergraph(_read(args.a))
    B = parse_hypergraph(_read(args.b))
    if A.ambient != B.ambient:
        raise HeaderMismatchError("the two files declare different vertex tables")
    op = parse_operator(args.op, A.ambient, field)
    if args.variance and args.variance != op.variance:
        raise CliFailure("--variance contradicts the operator", EXIT_PRECONDITION)
    ladder = mv_hypergraph(A, B, op, args.m)
    report = {"coefficients": field.name, "operator": op.format(A.ambient), "m": args.m}
    report.update(ladder.to_json())
    _emit(report)
    return EXIT_OK if ladder.exact and ladder.commuting else EXIT_VERIFY


def cmd_persist(args) -> int:
    field = _field(args)
    F = load_filtration(_read(args.filtration))
    if args.closure:
        F = derived_filtration(F, args.closure)
    op = parse_operator(args.op, F.ambient, field)
    bars = persistent_homology(F, op, args.m)
    if args.range:
        rng = set(_index_range(args.range, 0))
        bars.bars = [b for b in bars.bars if b.index in rng]
    if args.verify:
        full = persistent_homology(F, op, args.m)
        bad = verify_barcode(F, op, args.m, full)
        if bad:
            sys.stderr.write(f"barcode disagrees with the rank oracle at {len(bad)} interval(s)\n")
            return EXIT_VERIFY
    if args.format == "tsv":
        text = bars.to_tsv()
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        _emit(bars.to_json(args.representatives), args.out)
    if args.verify:
        (sys.stdout if args.out else sys.stderr).write("verified\n")
    return EXIT_OK


def cmd_random(args) -> int:
    try:
        p = Fraction(args.p)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad probability {args.p!r}") from None
    if not 0 <= p <= 1:
        raise CliFailure(f"probability {args.p} is outside [0, 1]", EXIT_PRECONDITION)
    if args.vertices < 0:
        raise CliFailure("vertex count must be non-negative", EXIT_PRECONDITION)
    table = VertexTable.range(args.vertices)
    H = sample_random(table, p, args.model, args.seed)
    sys.stdout.write(serialize_hypergraph(H))
    return EXIT_OK


# -- parser --------------------------------------------------------------------

CLOSURE_KINDS = ["delta", "Delta", "bar-delta", "bar-Delta", "complement"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperkoszul", description="Exact topology of hypergraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def coeff(p):
        p.add_argument("--coeff", help="'rational' or 'gf:p' (default: $HG_COEFF or gf:65521)")

    p = sub.add_parser("closure", help="apply a closure operator to a .hg file")
    p.add_argument("input")
    p.add_argument("--kind", required=True, choices=CLOSURE_KINDS)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("classify", help="classification and density of a .hg file")
    p.add_argument("input")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("koszul", help="exactness of the Koszul complex")
    p.add_argument("input")
    p.add_argument("--weights")
    p.add_argument("--variance", choices=[LOWER, UPPER], default=LOWER)
    coeff(p)
    p.set_defaults(func=cmd_koszul)

    p = sub.add_parser("homology", help="constrained or localized (co)homology")
    p.add_argument("input")
    p.add_argument("--op")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--range")
    p.add_argument("--weights")
    p.add_argument("--part")
    p.add_argument("--variance", choices=[LOWER, UPPER])
    coeff(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("mv", help="Mayer-Vietoris ladder of two hypergraphs")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--op", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--variance", choices=[LOWER, UPPER])
    coeff(p)
    p.set_defaults(func=cmd_mv)

    p = sub.add_parser("persist", help="persistence barcode of a filtration")
    p.add_argument("--filtration", required=True)
    p.add_argument("--closure", choices=["delta", "Delta", "bar-delta", "bar-Delta"])
    p.add_argument("--op", required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--range")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--representatives", action="store_true")
    p.add_argument("--verify", action="store_true")
    coeff(p)
    p.set_defaults(func=cmd_persist)

    p = sub.add_parser("random", help="sample a random hypergraph")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--model", default="bar-p", choices=["bar-p", "p-complex", "q-independence"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_random)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (NonAdmissibleError, HeaderMismatchError, FiltrationError) as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except (VerificationError, ChainMapError) as exc:
        sys.stderr.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except ValueError as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
