"""Command-line front end.

Subcommands:
  spectrum      eigenvalue table + characteristic polynomial of a gcd-graph
  pst           perfect-state-transfer verdict with an exact certificate
  unitary       PST classification of the unitary Cayley graph of a ring
  scan          every divisor set of a local ring, one JSON line each
  verify-paper  run the embedded golden-value suite
  describe-ring structural summary of a ring

Exit codes: 0 success, 2 bad input, 3 resource cap exceeded.  Verdict content
never affects the exit code.  Output is deterministic for fixed flags; no
environment variables are read.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional

from . import dsl, duality, goldens, graphs, oracle, pst, spectra
from .errors import InputError, ResourceCapError, RingwalkError
from .rings import Ring, build_ring


def _ring_from_args(args) -> Ring:
    return build_ring(args.ring)


def _graph_from_args(args, ring: Ring) -> graphs.GcdGraph:
    return graphs.build_graph(ring, args.divisors)


def _print_json(data) -> None:
    print(json.dumps(data))


# -------------------------------------------------------------------------
# spectrum
# -------------------------------------------------------------------------


def _factored_char_poly(spectrum: spectra.Spectrum) -> list[dict]:
    return [
        {"root": value, "multiplicity": len(members)}
        for value, members in spectrum.eigenvalue_classes()
    ]


def _render_factored(classes) -> str:
    parts = []
    for value, members in classes:
        mult = len(members)
        base = f"(t - {value})" if value >= 0 else f"(t + {-value})"
        parts.append(base if mult == 1 else f"{base}^{mult}")
    return " ".join(parts)


def cmd_spectrum(args) -> int:
    ring = _ring_from_args(args)
    graph = _graph_from_args(args, ring)
    spectrum = spectra.spectrum_from_ramanujan(graph)
    components, _ = graphs.connected_components(graph)
    if args.edges_csv:
        count = graphs.edges_csv(graph, args.edges_csv)
        print(f"wrote {count} edges to {args.edges_csv}", file=sys.stderr)
    if args.json:
        _print_json(
            {
                "ring": dsl.format_ring(ring.expr),
                "divisors": graph.divisors.to_json(),
                "order": ring.size,
                "degree": graph.degree,
                "components": components,
                "spectrum": spectrum.to_json(),
                "char_poly": {
                    "expanded": spectrum.char_poly(),
                    "factored": _factored_char_poly(spectrum),
                },
            }
        )
        return 0
    classes = spectrum.eigenvalue_classes()
    print(f"ring: {dsl.format_ring(ring.expr)}")
    print(f"divisors: {graph.divisors.describe()}")
    print(f"order {ring.size}, degree {graph.degree}, {components} component(s)")
    print()
    width = max(len(str(v)) for v, _ in classes)
    for value, members in classes:
        names = ", ".join(ring.element_name(int(m)) for m in members)
        print(f"  {value:>{width}}  (x{len(members)})  {names}")
    print()
    print(f"char poly: {_render_factored(classes)}")
    print(f"expanded:  {spectrum.char_poly()}")
    return 0


# -------------------------------------------------------------------------
# pst
# -------------------------------------------------------------------------


def cmd_pst(args) -> int:
    ring = _ring_from_args(args)
    graph = _graph_from_args(args, ring)
    psi = duality.build_psi(ring)
    spectrum = spectra.spectrum_from_ramanujan(graph)
    if args.target is not None:
        target = ring.element_index(args.target)
        if target == 0:
            raise InputError("--target must be a nonzero element")
        verdict = pst.solve_pst(graph, spectrum, psi, target)
    else:
        verdict = pst.has_pst(graph, spectrum, psi)
    out = verdict.to_json()
    out["ring"] = dsl.format_ring(ring.expr)
    out["divisors"] = graph.divisors.describe()
    if args.verify:
        ok = oracle.verify_verdict(graph, verdict, spectrum, psi)
        check: dict = {"verified": ok}
        if verdict.exists:
            t = 2 * math.pi * float(verdict.certificate.tau)
            check["modulus_at_minimal_time"] = oracle.walk_amplitude(
                graph, spectrum, psi, verdict.target, t
            ).modulus
        else:
            targets = (
                [verdict.target]
                if verdict.target is not None
                else pst.candidate_targets(graph, psi)
            )
            if targets:
                check["max_sweep_modulus"] = max(
                    oracle.sweep_max_modulus(graph, spectrum, psi, s) for s in targets
                )
        out["oracle"] = check
    if args.sweep_csv:
        s = verdict.target
        if s is None:
            cands = pst.candidate_targets(graph, psi)
            if not cands:
                raise InputError("no candidate target to sweep")
            s = cands[0]
        rows = oracle.sweep_csv(args.sweep_csv, graph, spectrum, psi, s)
        print(f"wrote {rows} sweep rows to {args.sweep_csv}", file=sys.stderr)
    _print_json(out)
    return 0


# -------------------------------------------------------------------------
# unitary
# -------------------------------------------------------------------------


def cmd_unitary(args) -> int:
    ring = _ring_from_args(args)
    classification = pst.classify_unitary(ring)
    verdict = pst.has_pst(graphs.unitary_graph(ring))
    if classification.has_pst != verdict.exists:
        raise RingwalkError("classification disagrees with the solver")  # pragma: no cover
    _print_json(
        {
            "ring": dsl.format_ring(ring.expr),
            "classification": classification.to_json(),
            "verdict": verdict.to_json(),
        }
    )
    return 0


# -------------------------------------------------------------------------
# scan
# -------------------------------------------------------------------------


def cmd_scan(args) -> int:
    ring = _ring_from_args(args)
    if not ring.is_local() or ring.residue_field_order() != 2:
        raise InputError("scan needs a local ring with residue field F_2")
    report = pst.scan_divisor_sets(
        ring, max_size=args.max_divisors, max_sets=args.max_sets, jobs=args.jobs
    )
    for row in report.rows:
        print(json.dumps(row.to_json()))
    print(json.dumps({"summary": report.counts()}), file=sys.stderr)
    return 0


# -------------------------------------------------------------------------
# verify-paper / describe-ring
# -------------------------------------------------------------------------


def cmd_verify_paper(_args) -> int:
    failures = goldens.run()
    return 0 if failures == 0 else 1


def cmd_describe_ring(args) -> int:
    ring = _ring_from_args(args)
    dec = ring.local_decomposition()
    info = {
        "ring": dsl.format_ring(ring.expr),
        "order": ring.size,
        "exponent": ring.exponent,
        "units": ring.unit_count,
        "is_local": ring.is_local(),
        "is_field": ring.is_field(),
        "local_factors": dec.to_json(),
        "principal_ideals": [
            {"generator": ring.element_name(i.generator), "size": i.size}
            for i in ring.all_principal_ideals(include_zero=True)
        ],
    }
    if ring.is_local():
        info["residue_field_order"] = ring.residue_field_order()
        if ring.residue_field_order() == 2:
            e = duality.minimal_element(ring)
            info["minimal_element"] = ring.element_name(e)
            info["socle2_ideals"] = [
                {"generator": ring.element_name(i.generator), "size": i.size}
                for i in ring.socle2_ideals()
            ]
    if args.json:
        _print_json(info)
        return 0
    print(f"ring: {info['ring']}")
    print(f"order {info['order']}, exponent {info['exponent']}, {info['units']} unit(s)")
    kind = "field" if info["is_field"] else "local ring" if info["is_local"] else "product"
    print(f"structure: {kind}")
    for f in info["local_factors"]["factors"]:
        extra = f", minimal element {f['minimal_element']}" if f["minimal_element"] else ""
        print(
            f"  factor at idempotent {f['idempotent']}: order {f['order']}, "
            f"residue field F_{f['residue_field_order']}{extra}"
        )
    ideals = ", ".join(
        f"{i['generator']}({i['size']})" for i in info["principal_ideals"]
    )
    print(f"principal ideals: {ideals}")
    if "minimal_element" in info:
        print(f"minimal element: {info['minimal_element']}")
        soc2 = ", ".join(
            f"{i['generator']}({i['size']})" for i in info["socle2_ideals"]
        )
        print(f"second-socle ideals: {soc2}")
    return 0


# -------------------------------------------------------------------------
# parser / dispatch
# -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringwalk",
        description="gcd-graphs over finite commutative rings: exact spectra "
        "and perfect state transfer",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and characteristic polynomial")
    p.add_argument("--ring", required=True, help='ring text, e.g. "F2[x,y]/(x^2,y^2)"')
    p.add_argument("--divisors", required=True, help='divisor list, e.g. "R, x*y"')
    style = p.add_mutually_exclusive_group()
    style.add_argument("--json", action="store_true", help="machine-readable output")
    style.add_argument("--table", action="store_true", help="human-readable table (default)")
    p.add_argument("--edges-csv", metavar="PATH", help="also write the edge list as CSV")
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("pst", help="perfect state transfer verdict")
    p.add_argument("--ring", required=True)
    p.add_argument("--divisors", required=True)
    p.add_argument("--target", help="decide a specific nonzero target element")
    p.add_argument("--verify", action="store_true", help="numerically confirm the verdict")
    p.add_argument("--sweep-csv", metavar="PATH", help="write an amplitude sweep as CSV")
    p.set_defaults(fn=cmd_pst)

    p = sub.add_parser("unitary", help="classify PST on the unitary Cayley graph")
    p.add_argument("--ring", required=True)
    p.set_defaults(fn=cmd_unitary)

    p = sub.add_parser("scan", help="verdicts for every divisor set (JSON lines)")
    p.add_argument("--ring", required=True)
    p.add_argument("--max-divisors", type=int, default=None, metavar="K",
                   help="largest divisor-set size (default: no limit)")
    p.add_argument("--jobs", type=int, default=1, metavar="N",
                   help="parallel worker processes")
    p.add_argument("--max-sets", type=int, default=100_000,
                   help="abort if the enumeration exceeds this many sets")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("verify-paper", help="run the embedded golden-value suite")
    p.set_defaults(fn=cmd_verify_paper)

    p = sub.add_parser("describe-ring", help="structural summary of a ring")
    p.add_argument("--ring", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_describe_ring)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
