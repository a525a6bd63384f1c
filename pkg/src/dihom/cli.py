"""The ``dihom`` command line.

Exit codes: 0 success, 1 invalid input or a failed verification,
2 precondition violation (cyclic 1-skeleton, not a relative pair, not a
good cover), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures
from .bimodule import (build_fq, dim_bisimulation, homology_bimodule, rank_invariant,
                       all_intervals, to_representation)
from .chains import BlockComplex, top_degree
from .linalg import parse_field
from .pcs import (PcsError, PrecubicalSet, PreconditionError, closure, parse_ids,
                  parse_pcs, serialize_pcs, validate)
from .relative import profile_is_consistent, verify_les_mv, verify_les_relative
from .tensor import kunneth_check, tensor_product

EXIT_OK, EXIT_INVALID, EXIT_PRECONDITION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class InvalidInput(Exception):
    def __init__(self, report):
        super().__init__("validation failed")
        self.report = report


def load_pcs(arg: str) -> PrecubicalSet:
    """Read a .pcs file, or a bundled set written as ``fixture:<name>``."""
    if arg.startswith("fixture:"):
        try:
            return fixtures.emit_fixture(arg[len("fixture:"):])
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    try:
        text = Path(arg).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {arg}: {e.strerror}") from None
    return parse_pcs(text)


def load_checked(arg: str) -> PrecubicalSet:
    X = load_pcs(arg)
    rep = validate(X)
    if not rep.ok:
        raise InvalidInput(rep)
    if not rep.is_dag:
        raise PreconditionError(f"{arg}: the 1-skeleton has a directed cycle")
    return X


def load_ids(arg: str, X: PrecubicalSet) -> set:
    """Subcomplex from ``@file``, a JSON array, ``sub:<name>`` or ``a,b,c``; face-closed."""
    if arg.startswith("@"):
        try:
            _, ids = parse_ids(Path(arg[1:]).read_text(encoding="utf-8"))
        except OSError as e:
            raise UsageError(f"cannot read {arg[1:]}: {e.strerror}") from None
    elif arg.startswith("sub:"):
        try:
            _, ids = fixtures.emit_subcomplex(arg[4:])
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    elif arg.lstrip().startswith(("[", "{")):
        _, ids = parse_ids(arg)
    else:
        ids = [t.strip() for t in arg.split(",") if t.strip()]
    return closure(X, ids)


def _pairs(args):
    if not args.pairs:
        return None
    out = []
    for p in args.pairs:
        parts = [t.strip() for t in p.split(",")]
        if len(parts) != 2 or not all(parts):
            raise UsageError(f"--pairs expects v,w; got {p!r}")
        out.append(tuple(parts))
    return out


def _check_pairs(X, pairs):
    for v, w in pairs or ():
        for u in (v, w):
            if u not in X or X[u].dim != 0:
                raise UsageError(f"{u!r} is not a vertex of {X.name or 'the input'}")


def _degrees(args, X) -> list[int]:
    if args.degree is not None:
        return [args.degree]
    top = args.max_degree if args.max_degree is not None else max(top_degree(X), 1)
    return list(range(1, top + 1))


def _dumps(obj):
    return json.dumps(obj, ensure_ascii=False, indent=2)


# -- commands -----------------------------------------------------------------

def cmd_check(args, out):
    X = load_pcs(args.file)
    rep = validate(X)
    if args.json:
        print(_dumps(rep.to_json()), file=out)
    else:
        counts = ", ".join(f"{n} in dim {k}" for k, n in enumerate(X.counts()))
        print(f"{X.name or args.file}: {counts or 'no cells'}", file=out)
        for v in rep.violations:
            print(f"  [{v.rule}] {v.message}", file=out)
        print(f"ok={str(rep.ok).lower()} is_dag={str(rep.is_dag).lower()} "
              f"is_proper={'n/a' if rep.is_proper is None else str(rep.is_proper).lower()}", file=out)
    if not rep.ok:
        return EXIT_INVALID
    return EXIT_OK if rep.is_dag else EXIT_PRECONDITION


def cmd_homology(args, out):
    X = load_checked(args.file)
    F = parse_field(args.field)
    pairs = _pairs(args)
    _check_pairs(X, pairs)
    degs = _degrees(args, X)
    C = BlockComplex(X, max(degs), F, pairs)
    mods = [homology_bimodule(C, i) for i in degs]
    if args.json:
        doc = [m.to_json(args.generators) for m in mods]
        print(_dumps(doc[0] if len(doc) == 1 else doc), file=out)
        return EXIT_OK
    order = sorted({v for p in pairs for v in p}) if pairs else X.vertices
    for m in mods:
        print(f"HM_{m.degree}", file=out)
        print(m.table(order), file=out)
        if args.generators:
            for (v, w), b in m.blocks.items():
                print(f"  ({v},{w}): " + "; ".join(b.generators()), file=out)
        print(file=out)
    return EXIT_OK


def _parse_expect(text):
    try:
        pair, dims = text.split("=")
        v, w = pair.split(",")
        return (v.strip(), w.strip()), [int(x) for x in dims.split(",")]
    except ValueError:
        raise UsageError(f"--expect wants v,w=d1,d2,...; got {text!r}") from None


def _report_sequences(rep, args, out):
    expect = [_parse_expect(e) for e in args.expect or []]
    flags = []
    for pair, dims in expect:
        b = rep.blocks.get(pair)
        got = b.dims if b else []
        flags.append({"pair": list(pair), "expected": dims, "computed": got,
                      "matches": dims == got,
                      "expected_profile_consistent": profile_is_consistent(dims)})
    if args.json:
        doc = rep.to_json()
        if flags:
            doc["expected"] = flags
        print(_dumps(doc), file=out)
    else:
        for (v, w), b in rep.blocks.items():
            print(f"({v},{w}): {b.render(labels=args.labels)}", file=out)
            if b.short_exact is False:
                print("  chain-level short sequence is not exact", file=out)
        for f in flags:
            note = "matches" if f["matches"] else "differs from computed " + ",".join(map(str, f["computed"]))
            cons = "" if f["expected_profile_consistent"] else "; its alternating sum is non-zero, so no exact sequence has that profile"
            print(f"expected ({','.join(f['pair'])}) = {','.join(map(str, f['expected']))}: {note}{cons}", file=out)
        print(f"exact: {str(rep.ok).lower()}", file=out)
    return EXIT_OK if rep.ok else EXIT_INVALID


def _top(args):
    return args.degree if args.degree is not None else args.max_degree


def cmd_relative(args, out):
    X = load_checked(args.file)
    Y = load_ids(args.y, X)
    pairs = _pairs(args)
    _check_pairs(X, pairs)
    rep = verify_les_relative(X, Y, _top(args), parse_field(args.field), pairs)
    return _report_sequences(rep, args, out)


def cmd_mv(args, out):
    X = load_checked(args.file)
    X1, X2 = load_ids(args.x1, X), load_ids(args.x2, X)
    pairs = _pairs(args)
    _check_pairs(X, pairs)
    rep = verify_les_mv(X, X1, X2, _top(args), parse_field(args.field), pairs)
    return _report_sequences(rep, args, out)


def cmd_tensor(args, out):
    X, Y = load_checked(args.left), load_checked(args.right)
    text = serialize_pcs(tensor_product(X, Y))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_kunneth(args, out):
    X, Y = load_checked(args.left), load_checked(args.right)
    top = _top(args)
    if top is None:
        top = max(top_degree(tensor_product(X, Y)), 1)
    rep = kunneth_check(X, Y, top, parse_field(args.field))
    if args.json:
        print(_dumps(rep.to_json()), file=out)
    else:
        for n, rows in rep.degrees.items():
            bad = [r for r in rows if r[1] != r[2]]
            print(f"degree {n}: {len(rows) - len(bad)}/{len(rows)} blocks agree", file=out)
            for (v, w), a, b in bad:
                print(f"  ({v},{w}): direct {a}, box tensor {b}", file=out)
    return EXIT_OK if rep.ok else EXIT_INVALID


def _representation(X, degree, F):
    C = BlockComplex(X, degree, F)
    B = homology_bimodule(C, degree)
    G = build_fq(X)
    return B, G, to_representation(B, G, X)


def cmd_fq(args, out):
    X = load_checked(args.file)
    degree = args.degree or 1
    B, G, rep = _representation(X, degree, parse_field(args.field))
    if args.dot:
        out.write(G.to_dot(B.dims()))
    elif args.json:
        doc = G.to_json()
        doc["degree"] = degree
        doc["dims"] = {f"{v},{w}": B.dim(v, w) for v, w in G.nodes}
        doc["matrices"] = [m.to_json() for _, _, m in rep.arrows]
        print(_dumps(doc), file=out)
    else:
        for v, w in G.nodes:
            print(f"({v},{w}) dim {B.dim(v, w)}", file=out)
        for a in G.arrows:
            how = f"{a.left}·-" if a.left else f"-·{a.right}"
            print(f"({a.source[0]},{a.source[1]}) -> ({a.target[0]},{a.target[1]}) by {how}", file=out)
    return EXIT_OK


def _node(text):
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 2:
        raise UsageError(f"a node is v,w; got {text!r}")
    return tuple(parts)


def cmd_rank(args, out):
    X = load_checked(args.file)
    degree = args.degree or 1
    _, _, rep = _representation(X, degree, parse_field(args.field))
    if args.interval:
        intervals = []
        for text in args.interval:
            if ":" not in text:
                raise UsageError(f"--interval wants p1,p2:q1,q2; got {text!r}")
            p, q = text.split(":", 1)
            intervals.append((_node(p), _node(q)))
    else:
        intervals = all_intervals(rep)
    for p, q in intervals:
        for n in (p, q):
            if n not in rep.nodes:
                raise UsageError(f"{n} is not a reachable pair")
    try:
        ranks = rank_invariant(rep, intervals)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.json:
        print(_dumps([{"from": list(p), "to": list(q), "rank": r} for (p, q), r in ranks.items()]), file=out)
    else:
        for (p, q), r in ranks.items():
            print(f"[({p[0]},{p[1]}), ({q[0]},{q[1]})]: {r}", file=out)
    return EXIT_OK


def cmd_bisim(args, out):
    X, Y = load_checked(args.left), load_checked(args.right)
    F = parse_field(args.field)
    degree = args.degree or 1
    _, _, a = _representation(X, degree, F)
    _, _, b = _representation(Y, degree, F)
    result = dim_bisimulation(a, b)
    if args.json:
        print(_dumps({"degree": degree, "dim_bisimilar": result}), file=out)
    else:
        print(str(result).lower(), file=out)
    return EXIT_OK


def cmd_examples(args, out):
    if args.action == "list":
        for n in fixtures.fixture_names():
            print(n, file=out)
        for n in sorted(fixtures.SUBCOMPLEXES):
            print(f"{n} (subcomplex of {fixtures.SUBCOMPLEXES[n][0]})", file=out)
        return EXIT_OK
    if not args.name:
        raise UsageError("examples emit needs a fixture name")
    name = args.name
    if name in fixtures.SUBCOMPLEXES:
        of, ids = fixtures.emit_subcomplex(name)
        text = json.dumps({"of": of, "ids": ids}, ensure_ascii=False) + "\n"
    else:
        try:
            text = serialize_pcs(fixtures.emit_fixture(name))
        except KeyError as e:
            raise UsageError(e.args[0]) from None
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="rational", help="rational (default) or fp:<p>")
    deg = common.add_mutually_exclusive_group()
    deg.add_argument("--degree", type=int, help="a single degree N >= 1")
    deg.add_argument("--max-degree", type=int, help="all degrees 1..N")
    common.add_argument("--pairs", action="append", metavar="v,w",
                        help="restrict to this vertex pair (repeatable)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output")
    fmt.add_argument("--table", action="store_true", help="matrix-of-spaces tables (default)")
    fmt.add_argument("--dot", action="store_true", help="Graphviz output (fq only)")
    common.add_argument("--generators", action="store_true", help="include class representatives")

    p = _Parser(prog="dihom", description="Directed homology bimodules of finite precubical sets.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", parents=[common], help="validate a .pcs file")
    s.add_argument("file")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("homology", parents=[common], help="HM_i dimension tables")
    s.add_argument("file")
    s.set_defaults(run=cmd_homology)

    for name, fn, extra in (("relative", cmd_relative, ("--y",)),
                            ("mv", cmd_mv, ("--x1", "--x2"))):
        s = sub.add_parser(name, parents=[common],
                           help="relative exact sequence" if name == "relative" else "Mayer-Vietoris sequence")
        s.add_argument("file")
        for flag in extra:
            s.add_argument(flag, required=True, help="subcomplex: @file, JSON array, sub:<name> or a,b,c")
        s.add_argument("--expect", action="append", metavar="v,w=d1,...",
                       help="compare a claimed dimension profile with the computed one")
        s.add_argument("--labels", action="store_true", help="name every space in the sequence")
        s.set_defaults(run=fn)

    s = sub.add_parser("tensor", parents=[common], help="tensor product of two sets")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_tensor)

    s = sub.add_parser("kunneth", parents=[common], help="compare HM of a product with the box tensor")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(run=cmd_kunneth)

    s = sub.add_parser("fq", parents=[common], help="FQ graph and the HM_i representation")
    s.add_argument("file")
    s.set_defaults(run=cmd_fq)

    s = sub.add_parser("rank-invariants", parents=[common], help="rank invariants on FQ intervals")
    s.add_argument("file")
    s.add_argument("--interval", action="append", metavar="p1,p2:q1,q2")
    s.set_defaults(run=cmd_rank)

    s = sub.add_parser("bisim", parents=[common], help="dimension-level bisimulation of HM_i representations")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(run=cmd_bisim)

    s = sub.add_parser("examples", help="bundled fixtures")
    s.add_argument("action", choices=["list", "emit"])
    s.add_argument("name", nargs="?")
    s.add_argument("-o", "--output")
    s.set_defaults(run=cmd_examples)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    for attr in ("degree", "max_degree"):
        val = getattr(args, attr, None)
        if val is not None and val < 1:
            print(f"dihom: error: --{attr.replace('_', '-')} must be >= 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        if hasattr(args, "field"):
            parse_field(args.field)
        return args.run(args, out)
    except UsageError as e:
        print(f"dihom: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInput as e:
        print("dihom: invalid precubical set:", file=sys.stderr)
        for v in e.report.violations:
            print(f"  [{v.rule}] {v.message}", file=sys.stderr)
        return EXIT_INVALID
    except PcsError as e:
        print(f"dihom: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    except PreconditionError as e:
        print(f"dihom: precondition violated: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as e:
        print(f"dihom: error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
