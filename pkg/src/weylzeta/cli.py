"""Command-line front end: compute series, run the identity checks, and
emit tables and reports.

Every numeric output is exact (integers or rationals rendered as n/d);
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import coxeter, hecke, rootsys, strips, zeta
from .series import (
    RationalFunction,
    alt_product_rational,
    poincare_affine,
    series_to_json,
)


@dataclass
class RunConfig:
    command: str
    type_tag: str = None
    rank: int = None
    trunc: int = 24
    scale: int = 2
    q_mode: str = "formal"  # "formal" or a rational literal
    rep_path: str = None
    graph_path: str = None
    out_format: str = "text"
    out_path: str = None

    def validate(self):
        if self.out_format not in ("text", "json", "csv"):
            raise ValueError("unknown output format %r" % (self.out_format,))
        if self.trunc < 0:
            raise ValueError("truncation order must be nonnegative")
        if self.scale < 2:
            raise ValueError("scale must be at least 2")
        return self


def _jsonable(x):
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator] if x.denominator != 1 else x.numerator
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def _poly_json(p):
    return [_jsonable(c) for c in p.coeffs]


def _emit(config, text_lines, json_obj):
    if config.out_format == "json":
        payload = json.dumps(_jsonable(json_obj), sort_keys=True, indent=2) + "\n"
    else:
        payload = "\n".join(text_lines) + "\n"
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


# ---------------------------------------------------------------------------
# subcommands


def cmd_poincare(config):
    system = coxeter.build_system(config.type_tag)
    if system.is_affine:
        rf, ps = poincare_affine(system, config.trunc)
        rf = rf.reduced()
    else:
        # closed form via the height product; exact even for E8
        rs = rootsys.positive_roots(config.type_tag[0], system.rank)
        finite, _ = rootsys.macdonald_series(rs)
        poly = finite.as_polynomial()
        rf = RationalFunction(poly)
        ps = poly.truncate(min(config.trunc, poly.degree))
    lines = [
        "type: %s" % config.type_tag,
        "rational: %s" % rf,
        "coefficients (to u^%d): %s" % (ps.order, " ".join(str(c) for c in ps.coeffs)),
    ]
    return 0, lines, {"type": config.type_tag, "series": series_to_json(rf, ps)}


def cmd_alt(config):
    system = coxeter.build_system(config.type_tag)
    alt = alt_product_rational(system)
    inv = alt.inverse().reduced()
    factors = inv.binomial_factors()
    lines = ["type: %s" % config.type_tag, "alt_inverse: %s" % inv]
    obj = {
        "type": config.type_tag,
        "alt_inverse": {"num": _poly_json(inv.num), "den": _poly_json(inv.den)},
        "binomial_factors": factors,
    }
    return 0, lines, obj


def cmd_factorize(config):
    system = coxeter.build_system(config.type_tag)
    bound = max(coxeter.DEFAULT_BOUND, config.trunc)
    table = coxeter.enumerate_elements(system, bound)
    report = strips.factorization_census(table, strips.scheme_for(config.type_tag), config.trunc)
    lines = [
        "type: %s  L=%d" % (config.type_tag, config.trunc),
        "slice counts: %s" % " ".join(str(c) for c in report.counts),
        "pass: %s" % report.ok,
    ]
    if report.witness:
        lines.append("witness: %s" % json.dumps(_jsonable(report.witness), sort_keys=True))
    return (0 if report.ok else 1), lines, report.as_json()


def _parse_q(config):
    if config.q_mode == "formal":
        return None  # formal parameter
    f = Fraction(config.q_mode)
    return f.numerator if f.denominator == 1 else f


def cmd_det_identity(config):
    system = coxeter.build_system(config.type_tag)
    table = coxeter.enumerate_elements(system, coxeter.DEFAULT_BOUND)
    results = []
    ok = True
    if config.rep_path:
        with open(config.rep_path) as fh:
            rep = hecke.representation_from_json(system, fh.read())
        report = strips.verify_determinant_identity(system, rep, table)
        ok = report.ok
        results.append({"representation": config.rep_path, **report.as_json()})
    elif config.q_mode == "torus":
        tq = zeta.torus_quotient_rep(system, config.scale, table)
        report = strips.verify_determinant_identity(system, tq.representation, table)
        ok = report.ok
        results.append({"representation": "torus k=%d" % config.scale, **report.as_json()})
    else:
        qval = _parse_q(config)
        for ch in hecke.characters(system):
            rep = ch.as_representation(hecke.formal_q() if qval is None else qval)
            report = strips.verify_determinant_identity(system, rep, table)
            ok = ok and report.ok
            results.append({"representation": "character %s" % ch.name(), **report.as_json()})
    lines = ["type: %s" % config.type_tag]
    for r in results:
        lines.append("%-24s pass=%s  alt_det=%s" % (r["representation"], r["pass"], r["alt_det"]))
    lines.append("all pass: %s" % ok)
    return (0 if ok else 1), lines, {"type": config.type_tag, "pass": ok, "results": results}


def cmd_macdonald_table(config):
    if config.type_tag and config.type_tag.lower() != "all":
        fam = config.type_tag[0].upper()
        rank = int(config.type_tag[1:])
        specs = [(fam, rank)]
    else:
        specs = rootsys.DEFAULT_TABLE_SPECS
    rows = rootsys.exponent_rows(specs)
    csv_lines = ["type,rank,h,exponents"]
    for tag, rank, h, ds in rows:
        csv_lines.append("%s,%d,%d,%s" % (tag, rank, h, ",".join(str(d) for d in ds)))
    obj = {
        "rows": [
            {"type": tag, "rank": rank, "h": h, "exponents": list(ds)}
            for tag, rank, h, ds in rows
        ]
    }
    return 0, csv_lines, obj


def cmd_ihara(config):
    if not config.graph_path:
        raise ValueError("ihara needs --graph <edge list file>")
    with open(config.graph_path) as fh:
        graph = zeta.Graph.from_edge_list(fh.read())
    report = zeta.ihara_zeta(graph, config.trunc if config.trunc > 0 else 16)
    obj = report.as_json()
    lines = [
        "vertices: %d  edges: %d" % (graph.num_vertices, graph.num_edges),
        "zeta inverse: %s" % report.inverse_poly,
        "N: %s" % " ".join(str(n) for n in report.closed_counts),
        "primitive classes: %s" % " ".join(str(p) for p in report.primitive_counts),
    ]
    status = 0
    if config.q_mode not in ("formal", None):
        q = int(Fraction(config.q_mode))
        check = zeta.ihara_formula_check(graph, q)
        obj["formula_check"] = check.as_json()
        lines.append("formula check (q=%d): %s" % (q, check.ok))
        status = 0 if check.ok else 1
    return status, lines, obj


def cmd_torus(config):
    system = coxeter.build_system(config.type_tag)
    table = coxeter.enumerate_elements(system, coxeter.DEFAULT_BOUND)
    tq = zeta.torus_quotient_rep(system, config.scale, table)
    report = zeta.verify_strip_zeta_identity(tq)
    lines = [
        "type: %s  k=%d  chambers=%d" % (config.type_tag, config.scale, tq.chamber_count()),
        "determinant identity: %s" % report.det_identity_ok,
        "strip zeta product match: %s" % report.zeta_match_ok,
        "trace oracle match: %s" % report.trace_match_ok,
        "alt det: %s" % report.alt_det,
        "pass: %s" % report.ok,
    ]
    obj = report.as_json()
    obj["chambers"] = tq.chamber_count()
    return (0 if report.ok else 1), lines, obj


_COMMANDS = {
    "poincare": cmd_poincare,
    "alt": cmd_alt,
    "factorize": cmd_factorize,
    "det-identity": cmd_det_identity,
    "macdonald-table": cmd_macdonald_table,
    "ihara": cmd_ihara,
    "torus": cmd_torus,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="weylzeta",
        description="Exact Poincare series, strip factorizations, and zeta functions",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--type", dest="type_tag", help="type tag, e.g. A2t, C2t, G2t, E8, all")
    parser.add_argument("--rank", type=int, default=None)
    parser.add_argument("--trunc", type=int, default=24, help="truncation order")
    parser.add_argument("--scale", type=int, default=2, help="torus scale k")
    parser.add_argument("--q", dest="q_mode", default="formal",
                        help="'formal', a rational like 2 or 1/2, or 'torus'")
    parser.add_argument("--rep", dest="rep_path", help="representation JSON file")
    parser.add_argument("--graph", dest="graph_path", help="edge list file")
    parser.add_argument("--format", dest="out_format", default="text",
                        choices=("text", "json", "csv"))
    parser.add_argument("--out", dest="out_path", default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        type_tag=args.type_tag,
        rank=args.rank,
        trunc=args.trunc,
        scale=args.scale,
        q_mode=args.q_mode,
        rep_path=args.rep_path,
        graph_path=args.graph_path,
        out_format=args.out_format,
        out_path=args.out_path,
    ).validate()
    if config.rank is not None and config.type_tag:
        config.type_tag = "%s%d%s" % (
            config.type_tag.rstrip("0123456789t"),
            config.rank,
            "t" if config.type_tag.endswith("t") else "",
        )
    try:
        status, lines, obj = _COMMANDS[config.command](config)
    except Exception as exc:  # structured failure for scripting
        _emit(config, ["error: %s" % exc], {"error": str(exc)})
        return 2
    _emit(config, lines, obj)
    return status


if __name__ == "__main__":
    sys.exit(main())
