"""``bisimp`` command line: load a JSON file or a named fixture and run a check suite.

Exit codes: 0 no FAIL, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fixtures, io
from .bisimplicial import (
    BisimplicialGroupTrunc, IdentityViolation, diagonal, moore_bicomplex_check,
    order_factorization_check, verify_bisimplicial,
)
from .crossed import (
    CONE_LIFTING, AxiomViolation, CrossedSquareData, HypothesisViolated, TwoCrossedModuleData,
    check_crossed_module, check_crossed_square, check_two_crossed_module, extract_crossed_module,
    extract_crossed_square, lifting_vs_pairing, mapping_cone, two_crossed_from_cols,
    two_crossed_from_rows, two_crossed_from_simplicial,
)
from .fingroup import DEFAULT_ORDER_CAP, GroupError, OrderCapExceeded
from .peiffer import TABLE_ROWS, boundary_equalities_check, projection_laws_check, table_check
from .report import PASS, VerificationReport, jsonable
from .simplicial import CrossedModuleData, SimplicialGroupTrunc, TruncationExceeded, verify_simplicial
from .surjections import ParseError


class InputError(Exception):
    pass


def _pair(text):
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'p,q', got {text!r}") from None
    return a, b


def resolve(target, args, verify=True):
    """A path to a JSON document, or the name of a built-in fixture."""
    path = Path(target)
    if path.exists():
        obj = io.load(path, cap=args.order_cap, verify=verify)
    elif target in fixtures.FIXTURES:
        obj = fixtures.FIXTURES[target]()
    elif target in fixtures.MUTATIONS:
        obj = fixtures.MUTATIONS[target]()
    else:
        raise InputError(f"{target}: no such file or fixture")
    if args.truncation is not None:
        if not isinstance(obj, BisimplicialGroupTrunc):
            raise InputError("--truncation applies to bisimplicial input only")
        obj = obj.truncated(*args.truncation)
    return obj


def _need_grid(obj):
    if not isinstance(obj, BisimplicialGroupTrunc):
        raise InputError(f"expected a bisimplicial grid, got {type(obj).__name__}")
    return obj


# -- commands: each returns (report, extra payload) -------------------------------------------


def cmd_verify(args):
    obj = resolve(args.target, args, verify=False)
    if isinstance(obj, BisimplicialGroupTrunc):
        return verify_bisimplicial(obj), {}
    if isinstance(obj, SimplicialGroupTrunc):
        return verify_simplicial(obj), {}
    if isinstance(obj, CrossedModuleData):
        return check_crossed_module(obj), {}
    if isinstance(obj, CrossedSquareData):
        return check_crossed_square(obj), {}
    if isinstance(obj, TwoCrossedModuleData):
        return check_two_crossed_module(obj), {}
    raise InputError(f"cannot verify {type(obj).__name__}")


def _moore_entry(G, sub, list_limit=64):
    out = {"order": sub.order}
    if sub.order <= list_limit:
        out["elements"] = G.perms[sub.indices]
    return out


def cmd_moore(args):
    obj = resolve(args.target, args)
    extra = {}
    if isinstance(obj, SimplicialGroupTrunc):
        levels = [args.level[0]] if args.level else range(obj.N + 1)
        rep = VerificationReport(f"Moore complex: {obj.name}")
        for n in levels:
            obj._level(n)
            extra[f"NG{n}"] = _moore_entry(obj.levels[n], obj.moore(n))
            rep.add(f"NG{n} has order {obj.moore(n).order}", PASS)
        return rep.finish(), {"moore": extra}
    g = _need_grid(obj)
    levels = [args.level] if args.level else sorted(g.levels)
    rep = moore_bicomplex_check(g)
    for p, q in levels:
        g._check_level(p, q)
        sub = g.moore(p, q)
        extra[f"{p},{q}"] = _moore_entry(g.G(p, q), sub)
    rep.info["moore"] = {k: v["order"] for k, v in extra.items()}
    lines = [f"NG({k}) order {v['order']}" for k, v in extra.items()]
    return rep, {"moore": extra, "_lines": lines}


def cmd_decompose(args):
    obj = resolve(args.target, args)
    if isinstance(obj, SimplicialGroupTrunc):
        rep = VerificationReport(f"order factorization: {obj.name}")
        for n in range(obj.N + 1):
            lhs, rhs = obj.order_factorization(n)
            rep.add(f"|G{n}| = {lhs} = product of Moore orders {rhs}", lhs == rhs,
                    witness=None if lhs == rhs else {"order": lhs, "product": rhs})
        return rep.finish(), {}
    return order_factorization_check(_need_grid(obj)), {}


def cmd_peiffer_table(args):
    g = _need_grid(resolve(args.target, args))
    rep = table_check(g)
    records = []
    for row, c in zip(TABLE_ROWS, rep.checks):
        rec = {"row": row.number, "spec": f"{row.alpha},{row.beta}", "status": c.status,
               "witnesses": [c.witness] if c.witness is not None else []}
        if c.detail:
            rec["detail"] = c.detail
        records.append(rec)
    return rep, {"rows": records}


def cmd_boundary_equalities(args):
    return boundary_equalities_check(_need_grid(resolve(args.target, args))), {}


def cmd_projection_laws(args):
    return projection_laws_check(_need_grid(resolve(args.target, args))), {}


def cmd_extract(args):
    obj = resolve(args.target, args)
    kind = args.kind
    if kind == "xmod":
        ex = extract_crossed_module(_need_grid(obj))
        rep = VerificationReport(f"crossed modules of {obj.name}")
        structures = []
        for label, x in (("vertical", ex.vertical), ("horizontal", ex.horizontal),
                         ("product", ex.product)):
            rep.extend(check_crossed_module(x), prefix=f"{label}: ")
            structures.append(x)
        return rep.finish(), {"structures": structures}
    if kind == "xsq":
        sq = extract_crossed_square(_need_grid(obj))
        return check_crossed_square(sq), {"structures": [sq]}
    if kind in ("x2mod-row", "x2mod-col"):
        g = _need_grid(obj)
        k = args.index
        direction = "v" if kind == "x2mod-row" else "h"
        x = two_crossed_from_rows(g, k) if direction == "v" else two_crossed_from_cols(g, k)
        rep = check_two_crossed_module(x)
        rep.extend(lifting_vs_pairing(g, direction, k, x))
        return rep.finish(), {"structures": [x]}
    if kind == "x2mod-simplicial":
        s = diagonal(obj) if isinstance(obj, BisimplicialGroupTrunc) else obj
        if not isinstance(s, SimplicialGroupTrunc):
            raise InputError("x2mod-simplicial needs a simplicial or bisimplicial input")
        x = two_crossed_from_simplicial(s)
        return check_two_crossed_module(x), {"structures": [x]}
    raise InputError(f"unknown extraction {kind!r}")


def cmd_mapping_cone(args):
    obj = resolve(args.target, args)
    if isinstance(obj, BisimplicialGroupTrunc):
        obj = extract_crossed_square(obj)
    if not isinstance(obj, CrossedSquareData):
        raise InputError("mapping-cone needs a crossed square or a grid")
    cone = mapping_cone(obj, lifting=args.lifting)
    rep = check_two_crossed_module(cone)
    comp = cone.d1.images[cone.d2.images]
    rep.add("d1 d2 is trivial on L", bool((comp == 0).all()),
            witness=None if (comp == 0).all() else {"z": cone.L.perms[int((comp != 0).argmax())]})
    rep.info["orders"] = cone.orders
    return rep.finish(), {"structures": [cone]}


def cmd_fixtures(args):
    rep = VerificationReport("fixtures")
    rep.info["fixtures"] = sorted(fixtures.FIXTURES)
    rep.info["mutations"] = sorted(fixtures.MUTATIONS)
    if args.name:
        if args.name in fixtures.FIXTURES:
            obj = fixtures.FIXTURES[args.name]()
        elif args.name in fixtures.MUTATIONS:
            obj = fixtures.MUTATIONS[args.name]()
        else:
            raise InputError(f"unknown fixture {args.name!r}")
        doc = io.to_json(obj)
        if args.output:
            Path(args.output).write_text(json.dumps(doc, sort_keys=True) + "\n")
            rep.info["written"] = args.output
        else:
            return rep.finish(), {"_raw": doc}
    return rep.finish(), {}


# -- plumbing ---------------------------------------------------------------------------------------


def _emit(rep, extra, fmt, output=None, out=sys.stdout):
    structures = extra.pop("structures", [])
    raw = extra.pop("_raw", None)
    lines = extra.pop("_lines", [])
    docs = [io.to_json(s) for s in structures]
    if output and docs:
        Path(output).write_text(json.dumps(docs[0] if len(docs) == 1 else docs, sort_keys=True) + "\n")
    if raw is not None:
        out.write(json.dumps(raw, sort_keys=True) + "\n")
        return
    if fmt == "json":
        payload = {"report": rep.to_dict(), **{k: jsonable(v) for k, v in extra.items()}}
        if docs and not output:
            payload["structures"] = docs
        out.write(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")
        out.write(rep.render_text(verbose=True) + "\n")


COMMANDS = {
    "verify": cmd_verify,
    "moore": cmd_moore,
    "decompose": cmd_decompose,
    "peiffer-table": cmd_peiffer_table,
    "boundary-equalities": cmd_boundary_equalities,
    "projection-laws": cmd_projection_laws,
    "extract": cmd_extract,
    "mapping-cone": cmd_mapping_cone,
    "fixtures": cmd_fixtures,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    common.add_argument("--truncation", type=_pair, default=None, metavar="P,Q")
    common.add_argument("-o", "--output", default=None,
                        help="write extracted structures (or a fixture) as JSON")

    parser = argparse.ArgumentParser(prog="bisimp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        return p

    add("verify", "run the identity or axiom suite matching the input kind").add_argument("target")
    p = add("moore", "Moore bicomplex orders and elements")
    p.add_argument("target")
    p.add_argument("--level", type=lambda t: _pair(t) if "," in t else (int(t),), default=None,
                   metavar="P,Q")
    add("decompose", "order factorization over degeneracy indices").add_argument("target")
    add("peiffer-table", "check every row of the pairing table").add_argument("target")
    add("boundary-equalities", "low-dimensional boundary images of pairings").add_argument("target")
    add("projection-laws", "projection onto the Moore cells").add_argument("target")
    p = add("extract", "extract a crossed structure from a grid")
    p.add_argument("kind", choices=("xmod", "xsq", "x2mod-row", "x2mod-col", "x2mod-simplicial"))
    p.add_argument("target")
    p.add_argument("--index", type=int, default=0, help="fixed index for x2mod-row / x2mod-col")
    p = add("mapping-cone", "2-crossed module of a crossed square")
    p.add_argument("target")
    p.add_argument("--lifting", default=CONE_LIFTING,
                   choices=("h(x,aba^-1)^-1", "h(x,ab)", "trivial"))
    p = add("fixtures", "list built-in fixtures, or dump one as JSON")
    p.add_argument("name", nargs="?")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        rep, extra = COMMANDS[args.command](args)
    except (ParseError, InputError, HypothesisViolated, TruncationExceeded, OrderCapExceeded,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IdentityViolation, AxiomViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            _emit(exc.report, {}, args.format, out=out)
        return 1
    except GroupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(rep, extra, args.format, output=args.output if args.command != "fixtures" else None,
          out=out)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
