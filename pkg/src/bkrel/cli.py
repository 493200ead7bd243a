"""Command-line front end.

Exit codes: 0 success / true, 1 false / counterexample / failed validation,
2 usage or input error.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import BKRelError
from .expr import Workspace, evaluate, parse
from .formats import lattice_from_spec, read_relation, relation_to_csv, relation_to_dict
from .lattice import validate_lattice
from .morphism import MorphismSquare, amphimorphism, solve
from .search import SOLVER_CASES, SearchSpace, run_property

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2

LATTICE_HELP = ("godel | lukasiewicz | product | nilmin | boolean | lukasiewicz3 | "
                "godel3 | table:<path>")


class UsageError(Exception):
    pass


def _emit_relation(rel, as_json: bool):
    if as_json:
        print(json.dumps(relation_to_dict(rel), indent=2))
    else:
        sys.stdout.write(relation_to_csv(rel))


def _emit_bool(value: bool, as_json: bool) -> int:
    print(json.dumps({"result": value}) if as_json else str(value).lower())
    return EXIT_OK if value else EXIT_FALSE


def _parse_binding(text: str) -> tuple[str, str]:
    name, sep, path = text.partition("=")
    if not sep or not name or not path:
        raise UsageError(f"--rel expects NAME=FILE, got {text!r}")
    return name.strip(), path.strip()


def cmd_eval(args) -> int:
    lat = lattice_from_spec(args.lattice)
    ws = Workspace(lat)
    for binding in args.rel:
        name, path = _parse_binding(binding)
        ws.add(name, read_relation(path, lat, name))
    result = evaluate(parse(args.expr), ws)
    if isinstance(result, bool):
        return _emit_bool(result, args.json)
    _emit_relation(result, args.json)
    return EXIT_OK


def _load_roles(args, lat, roles):
    rels = {}
    for role in roles:
        path = getattr(args, role)
        if path is None:
            raise UsageError(f"--{role} is required")
        rels[role] = read_relation(path, lat, role)
    return rels


def cmd_check(args) -> int:
    lat = lattice_from_spec(args.lattice)
    rels = _load_roles(args, lat, "RSFG")
    report = amphimorphism(MorphismSquare(**rels))
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if getattr(report, args.direction) else EXIT_FALSE


def cmd_solve(args) -> int:
    lat = lattice_from_spec(args.lattice)
    rels = _load_roles(args, lat, [r for r in "RSFG" if r != args.which])
    bound = solve(args.which, args.direction, **rels)
    if bound.kind == "lower":
        print(f"note: {args.which} solves the {args.direction} inequality iff it "
              "contains this relation (least solution)", file=sys.stderr)
    _emit_relation(bound.relation, args.json)
    return EXIT_OK


def cmd_lattice_validate(args) -> int:
    lat = lattice_from_spec(args.spec, check=False)
    report = validate_lattice(lat, grid=args.grid)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        mode = "exhaustive" if report.exhaustive else f"{args.grid}-point grid"
        print(f"lattice {report.lattice} ({mode}): {'OK' if report.ok else 'FAILED'}")
        print(report.format())
    return EXIT_OK if report.ok else EXIT_FALSE


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must look like 2,2,2,2, got {text!r}") from None


def cmd_search(args) -> int:
    lat = lattice_from_spec(args.lattice)
    space = SearchSpace.grid(lat, args.grid, args.sizes, args.budget)
    if args.property == "maximality":
        if args.which is None or args.direction is None:
            raise UsageError("maximality needs --which and --direction")
        if (args.which, args.direction) not in SOLVER_CASES:
            raise UsageError(f"no solver for {args.which} {args.direction}")
    outcome = run_property(args.property, space, args.which, args.direction)
    text = outcome.to_json(indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if outcome.ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bkrel", description="Fuzzy relational calculus with BK-products.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def lattice_opt(sp, default="godel"):
        sp.add_argument("--lattice", default=default, help=LATTICE_HELP)

    e = sub.add_parser("eval", help="evaluate a relational expression")
    lattice_opt(e)
    e.add_argument("--rel", action="append", default=[], metavar="NAME=FILE",
                   help="bind a relation file (CSV or .json) to a name")
    e.add_argument("--json", action="store_true", help="machine-readable output")
    e.add_argument("expr", help="e.g. \"F' o R o G <= S\"")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="check compatibility of a morphism square")
    c.add_argument("direction", choices=["forward", "backward", "bothways"])
    lattice_opt(c)
    for role in "RSFG":
        c.add_argument(f"--{role}", metavar="FILE")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", help="compute the extremal solution for one relation")
    s.add_argument("which", choices=list("RSFG"))
    s.add_argument("--direction", choices=["forward", "backward"], required=True)
    lattice_opt(s)
    for role in "RSFG":
        s.add_argument(f"--{role}", metavar="FILE")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)

    lat = sub.add_parser("lattice", help="lattice utilities")
    lsub = lat.add_subparsers(dest="lattice_command", required=True)
    v = lsub.add_parser("validate", help="check the residuated-lattice axioms")
    v.add_argument("spec", help="builtin name, table:<path> or a lattice .json file")
    v.add_argument("--grid", type=int, default=101, help="grid points for [0, 1] lattices")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_lattice_validate)

    q = sub.add_parser("search", help="exhaustive verification / counterexample search")
    q.add_argument("property", choices=["bootstrap", "assoc1", "assoc2", "assoc3", "maximality"])
    lattice_opt(q)
    q.add_argument("--grid", type=int, default=3, help="value grid on [0, 1] (ignored for tables)")
    q.add_argument("--sizes", type=_sizes, default=(2, 2, 2, 2), help="|A|,|B|,|C|,|D|")
    q.add_argument("--budget", type=int, default=10**7)
    q.add_argument("--which", choices=list("RSFG"))
    q.add_argument("--direction", choices=["forward", "backward"])
    q.add_argument("--out", help="also write the JSON report here")
    q.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BKRelError, UsageError, ValueError, OSError) as exc:
        print(f"bkrel: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
