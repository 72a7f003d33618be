"""Command-line surface.

Subcommands: enumerate, thermo, quenched, bounds, construct, knot,
decompose, repro.  Outputs are pure functions of (config, engine version):
CSV for humans and plotting, JSON with exact integer counts carried as
decimal strings.  Exit codes: 0 success, 2 validation, 3 budget, 4
internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import __version__, cache
from .constructs import (build_phi30, build_phi_chain, comb_decompose,
                         straight_comb_witness)
from .enumeration import (BudgetExceededError, EnsembleSpec, InvalidSpecError,
                          TopologyTable, count_by_topology, enumerate_ensemble)
from .lattice import from_line, to_line, validate
from .statmech import (BetaGrid, convexity_margins, growth_lower_bound_madras,
                       jensen_margins, submultiplicative_upper_bound,
                       thermo_curve)
from .topology import CombSignature, knot_invariant

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4

SCHEMA_VERSION = 1

THERMO_COLUMNS = ["class", "d", "N", "boundary", "convention", "beta", "Z",
                  "F", "FQ", "E_sigma", "EQ_sigma", "dF", "dFQ"]

#: JSON Schema (draft-07 subset) for the documents this CLI emits
SCHEMAS = {
    "enumeration": {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["schema_version", "kind", "engine", "spec", "total",
                     "visit_histogram"],
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "kind": {"const": "enumeration"},
            "engine": {"type": "string"},
            "spec": {"type": "object"},
            "total": {"type": "string", "pattern": "^[0-9]+$"},
            "visit_histogram": {
                "type": "object",
                "additionalProperties": {"type": "string", "pattern": "^[0-9]+$"},
            },
            "topology": {
                "type": "object",
                "additionalProperties": {
                    "type": "object",
                    "required": ["count", "visit_histogram"],
                    "properties": {
                        "count": {"type": "string", "pattern": "^[0-9]+$"},
                        "visit_histogram": {"type": "object"},
                    },
                },
            },
            "cache_hit": {"type": "boolean"},
            "wall_time": {"type": "number"},
        },
    },
    "thermo": {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["schema_version", "kind", "engine", "spec", "rows"],
        "properties": {
            "schema_version": {"const": SCHEMA_VERSION},
            "kind": {"const": "thermo"},
            "rows": {"type": "array", "items": {"type": "object"}},
        },
    },
}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _spec_from_args(args) -> EnsembleSpec:
    try:
        return EnsembleSpec(args.cls, args.dim, args.size, args.boundary,
                            args.convention)
    except InvalidSpecError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)


def _add_spec_arguments(sub):
    sub.add_argument("--class", dest="cls", required=True,
                     choices=["animal", "tree", "walk", "polygon", "comb"])
    sub.add_argument("--dim", type=int, required=True)
    sub.add_argument("--size", type=int, required=True)
    sub.add_argument("--boundary", default="penetrable",
                     choices=["penetrable", "impenetrable"])
    sub.add_argument("--convention", default="contains-origin",
                     choices=["translation-classes", "contains-origin",
                              "from-origin"])
    sub.add_argument("--threads", type=int, default=1)
    sub.add_argument("--budget", type=int, default=None,
                     help="override the per-class size cap")
    sub.add_argument("--cache-dir", default=None)
    sub.add_argument("--no-cache", action="store_true")


def _grid_from_args(args) -> BetaGrid:
    if args.betas:
        return BetaGrid(tuple(float(b) for b in args.betas.split(",")))
    return BetaGrid.regular(args.beta_start, args.beta_stop, args.beta_step)


def _add_grid_arguments(sub):
    sub.add_argument("--betas", default=None,
                     help="comma-separated grid (overrides start/stop/step)")
    sub.add_argument("--beta-start", type=float, default=-2.0)
    sub.add_argument("--beta-stop", type=float, default=4.0)
    sub.add_argument("--beta-step", type=float, default=0.25)


def _write_output(args, text: str):
    if getattr(args, "output", None):
        from pathlib import Path
        cache.atomic_write_text(Path(args.output), text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _enumeration_document(spec, summary, table=None, cache_hit=False) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "enumeration",
        "engine": __version__,
        "spec": spec.as_dict(),
        "total": str(summary.total),
        "visit_histogram": {str(k): str(v)
                            for k, v in sorted(summary.visit_histogram.items())},
        "cache_hit": cache_hit,
        "wall_time": round(summary.wall_time, 6),
    }
    if table is not None:
        doc["topology"] = {
            name: {"count": str(tc.count),
                   "visit_histogram": {str(k): str(v)
                                       for k, v in sorted(tc.visit_histogram.items())}}
            for name, tc in sorted(table.classes.items())
        }
    return doc


def _table_from_document(spec, doc) -> TopologyTable:
    from .topology import TopologyKey
    from .enumeration import TopologyClass
    classes = {}
    for name, data in doc["topology"].items():
        kind, _, payload = name.partition(":")
        key = TopologyKey(kind, bytes.fromhex(payload))
        classes[name] = TopologyClass(
            key, int(data["count"]),
            {int(k): int(v) for k, v in data["visit_histogram"].items()})
    return TopologyTable(spec, classes, int(doc["total"]))


def _run_enumerate(spec, args, want_table):
    """Shared cache-aware enumeration path for enumerate/thermo/quenched."""
    directory = args.cache_dir
    if not args.no_cache:
        doc = cache.load(spec, directory)
        if doc is not None and (not want_table or "topology" in doc):
            doc = dict(doc)
            doc["cache_hit"] = True
            return doc
    try:
        if want_table:
            table = count_by_topology(spec, size_limit=args.budget,
                                      threads=args.threads)
            from .enumeration import EnumerationSummary
            summary = EnumerationSummary(spec, table.total,
                                         table.total_histogram(),
                                         table.wall_time)
            doc = _enumeration_document(spec, summary, table)
        else:
            summary = enumerate_ensemble(spec, size_limit=args.budget,
                                         threads=args.threads)
            doc = _enumeration_document(spec, summary)
    except BudgetExceededError as exc:
        raise CliError(f"{exc} (estimate: {exc.estimate:.3g})", EXIT_BUDGET)
    if not args.no_cache:
        cache.store(spec, doc, directory)
    return doc


def cmd_enumerate(args) -> int:
    spec = _spec_from_args(args)
    doc = _run_enumerate(spec, args, want_table=False)
    _write_output(args, json.dumps(doc, indent=1, sort_keys=True))
    return EXIT_OK


def _thermo_rows(spec, table, grid):
    result = thermo_curve(table, grid)
    convex = convexity_margins(result)
    jensen = jensen_margins(result)
    rows = []
    for i, p in enumerate(result.points):
        rows.append({
            "class": spec.cls, "d": spec.d, "N": spec.size,
            "boundary": spec.boundary, "convention": spec.convention,
            "beta": p.beta, "Z": str(p.z) if p.beta == 0 else repr(float(p.z)),
            "F": repr(p.f), "FQ": repr(p.fq),
            "E_sigma": repr(p.e_sigma), "EQ_sigma": repr(p.eq_sigma),
            "dF": repr(p.df), "dFQ": repr(p.dfq),
            "jensen_margin": repr(jensen[i]),
            "convexity_margin": repr(min(convex)) if convex else "",
        })
    return rows


def _emit_thermo(args, spec, table, grid, with_topology) -> int:
    rows = _thermo_rows(spec, table, grid)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=THERMO_COLUMNS + ["jensen_margin", "convexity_margin"])
        writer.writeheader()
        writer.writerows(rows)
        _write_output(args, buf.getvalue())
    else:
        doc = {"schema_version": SCHEMA_VERSION, "kind": "thermo",
               "engine": __version__, "spec": spec.as_dict(), "rows": rows}
        if with_topology:
            doc["topology"] = {
                name: {"count": str(tc.count),
                       "visit_histogram": {str(k): str(v)
                                           for k, v in tc.visit_histogram.items()}}
                for name, tc in sorted(table.classes.items())}
        _write_output(args, json.dumps(doc, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_thermo(args, with_topology=False) -> int:
    spec = _spec_from_args(args)
    grid = _grid_from_args(args)
    doc = _run_enumerate(spec, args, want_table=True)
    table = _table_from_document(spec, doc)
    return _emit_thermo(args, spec, table, grid, with_topology)


def cmd_quenched(args) -> int:
    return cmd_thermo(args, with_topology=True)


def cmd_bounds(args) -> int:
    if args.madras:
        bound = growth_lower_bound_madras(args.dim, args.n, args.count)
    elif args.submult:
        seq = [float(x) for x in args.counts.split(",")]
        bound = submultiplicative_upper_bound(seq)
    else:
        raise CliError("choose --madras or --submult", EXIT_VALIDATION)
    doc = {"schema_version": SCHEMA_VERSION, "kind": "bound",
           "engine": __version__, "bound": bound.kind,
           "value": repr(bound.value), "inputs": bound.inputs}
    _write_output(args, json.dumps(doc, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.recipe == "phi30":
        polymer = build_phi30()
    elif args.recipe == "phi_chain":
        if args.t is None:
            raise CliError("phi_chain needs --t", EXIT_VALIDATION)
        polymer = build_phi_chain(args.t)
    elif args.recipe == "straight_comb":
        if not args.signature:
            raise CliError("straight_comb needs --signature", EXIT_VALIDATION)
        sig = CombSignature.parse(args.signature)
        polymer = straight_comb_witness(sig, args.dim)
    else:
        raise CliError(f"unknown recipe {args.recipe}", EXIT_VALIDATION)
    _write_output(args, to_line(polymer))
    return EXIT_OK


def _read_polymer(path: str):
    text = sys.stdin.read() if path == "-" else open(path).read()
    polymer = from_line(text.strip())
    check = validate(polymer)
    if not check:
        raise CliError(f"invalid polymer: {check.reason}", EXIT_VALIDATION)
    return polymer


def cmd_knot(args) -> int:
    polymer = _read_polymer(args.polymer)
    if polymer.cls != "polygon" or polymer.d != 3:
        raise CliError("knot invariants need a polygon in d=3", EXIT_VALIDATION)
    inv = knot_invariant(polymer)
    doc = {"schema_version": SCHEMA_VERSION, "kind": "knot",
           "engine": __version__, "determinant": inv.determinant,
           "alexander": list(inv.alexander) if inv.alexander else None}
    _write_output(args, json.dumps(doc, indent=1, sort_keys=True))
    return EXIT_OK


def cmd_decompose(args) -> int:
    polymer = _read_polymer(args.polymer)
    try:
        result = comb_decompose(polymer, args.split)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION)
    lines = [to_line(result.comb_a), to_line(result.comb_b),
             to_line(result.walk), f"case {result.case}"]
    _write_output(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_repro(args) -> int:
    from .acceptance import run_acceptance
    results = run_acceptance(quick=args.quick)
    failed = 0
    for item in results:
        status = "PASS" if item.ok else "FAIL"
        print(f"[{status}] {item.name}: {item.detail}")
        if not item.ok:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return EXIT_OK if failed == 0 else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polylat",
        description="exact lattice-polymer enumeration and adsorption "
                    "thermodynamics with quenched topology")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("enumerate", help="enumerate an ensemble")
    _add_spec_arguments(sub)
    sub.add_argument("--output", default=None)
    sub.set_defaults(func=cmd_enumerate)

    for name, func in (("thermo", cmd_thermo), ("quenched", cmd_quenched)):
        sub = subs.add_parser(name, help=f"{name} curves over a beta grid")
        _add_spec_arguments(sub)
        _add_grid_arguments(sub)
        sub.add_argument("--format", choices=["csv", "json"], default="csv")
        sub.add_argument("--output", default=None)
        sub.set_defaults(func=func)

    sub = subs.add_parser("bounds", help="rigorous growth-constant bounds")
    sub.add_argument("--madras", action="store_true")
    sub.add_argument("--submult", action="store_true")
    sub.add_argument("--dim", type=int, default=2)
    sub.add_argument("--n", type=int, default=1)
    sub.add_argument("--count", type=int, default=1)
    sub.add_argument("--counts", default="")
    sub.add_argument("--output", default=None)
    sub.set_defaults(func=cmd_bounds)

    sub = subs.add_parser("construct", help="build a named construction")
    sub.add_argument("recipe", choices=["phi30", "phi_chain", "straight_comb"])
    sub.add_argument("--t", type=int, default=None)
    sub.add_argument("--signature", default=None)
    sub.add_argument("--dim", type=int, default=3)
    sub.add_argument("--output", default=None)
    sub.set_defaults(func=cmd_construct)

    sub = subs.add_parser("knot", help="knot invariant of a polygon file")
    sub.add_argument("polymer", help="path or - for stdin")
    sub.add_argument("--output", default=None)
    sub.set_defaults(func=cmd_knot)

    sub = subs.add_parser("decompose", help="split a comb into comb+comb+walk")
    sub.add_argument("polymer", help="path or - for stdin")
    sub.add_argument("--split", type=int, required=True)
    sub.add_argument("--output", default=None)
    sub.set_defaults(func=cmd_decompose)

    sub = subs.add_parser("repro", help="run the acceptance table")
    sub.add_argument("--quick", action="store_true",
                     help="trim the slowest criteria to smaller sizes")
    sub.set_defaults(func=cmd_repro)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": {"message": str(exc), "code": exc.code}}),
              file=sys.stdout)
        return exc.code
    except BudgetExceededError as exc:
        print(json.dumps({"error": {"message": str(exc), "code": EXIT_BUDGET,
                                    "estimate": exc.estimate}}))
        return EXIT_BUDGET
    except InvalidSpecError as exc:
        print(json.dumps({"error": {"message": str(exc), "code": EXIT_VALIDATION}}))
        return EXIT_VALIDATION
    except Exception as exc:   # pragma: no cover - defensive
        print(json.dumps({"error": {"message": f"internal: {exc}",
                                    "code": EXIT_INTERNAL}}))
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
