"""Built-in reference suite.

Frozen expected values for the bundled worked examples — two spectrum tables
over the order-16 ring F2[x,y]/(x^2, y^2), their characteristic polynomials,
the matching transfer verdicts, the chain-ring classification, and the
unitary-graph classification over a small ring list.  `run()` checks each
one end to end and emits one PASS/FAIL line per check.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from . import duality, graphs, oracle, pst, spectra
from .rings import build_ring

TABLE_RING = "F2[x,y]/(x^2, y^2)"

# Eigenvalue -> exact set of elements attaining it, in canonical names.
TABLE_A_DIVISORS = "R, x*y"
TABLE_A = {
    9: {"0"},
    -1: {
        "1", "x*y + x + 1", "x*y + x + y + 1", "x + y + 1",
        "x + 1", "x*y + 1", "x*y + y + 1", "y + 1",
    },
    1: {"x*y + x + y", "x*y + x", "x + y", "x", "x*y + y", "y"},
    -7: {"x*y"},
}
TABLE_A_FACTORS = [(9, 1), (-7, 1), (1, 6), (-1, 8)]

TABLE_B_DIVISORS = "R, x, x*y"
TABLE_B = {
    11: {"0"},
    -1: {
        "1", "x*y + x + y", "x*y + x + 1", "x*y + x + y + 1",
        "x + y", "x + y + 1", "x + 1", "x*y + y",
        "x*y + 1", "x*y + y + 1", "y", "y + 1",
    },
    3: {"x*y + x", "x"},
    -5: {"x*y"},
}
TABLE_B_FACTORS = [(11, 1), (-5, 1), (3, 2), (-1, 12)]

# Unitary Cayley graph: ring text -> does PST exist?
UNITARY_EXPECTED = [
    ("Z4", True),
    ("GF(4)", False),
    ("Z4 x GF(4)", True),
    ("F2", True),
    ("F2[x]/(x^2)", True),
    ("Z8", False),
    ("F3", False),
    ("Z4 x F3", False),
    ("F2 x GF(4)", True),
    ("GF(9)", False),
]

CHAIN_RINGS = ["Z8", "Z16", "F2[x]/(x^3)"]


def expand_factors(factors: list[tuple[int, int]]) -> list[int]:
    """Expand prod (t - root)^mult into descending coefficients."""
    coeffs = [1]
    for root, mult in factors:
        for _ in range(mult):
            coeffs = coeffs + [0]
            for i in range(len(coeffs) - 1, 0, -1):
                coeffs[i] -= root * coeffs[i - 1]
    return coeffs


def _check_table(ring, divisors: str, table: dict, factors) -> None:
    graph = graphs.build_graph(ring, divisors)
    spec = spectra.spectrum_from_ramanujan(graph)
    got = {}
    for idx, lam in enumerate(spec.values):
        got.setdefault(int(lam), set()).add(ring.element_name(idx))
    if got != table:
        raise AssertionError(f"table mismatch: {got} != {table}")
    want = expand_factors(factors)
    if spec.char_poly() != want:
        raise AssertionError("closed-form characteristic polynomial mismatch")
    if oracle.char_poly_exact(graph) != want:
        raise AssertionError("adjacency characteristic polynomial mismatch")


def check_table_a() -> None:
    _check_table(build_ring(TABLE_RING), TABLE_A_DIVISORS, TABLE_A, TABLE_A_FACTORS)


def check_table_b() -> None:
    _check_table(build_ring(TABLE_RING), TABLE_B_DIVISORS, TABLE_B, TABLE_B_FACTORS)


def check_pst_example() -> None:
    ring = build_ring(TABLE_RING)
    graph = graphs.build_graph(ring, TABLE_A_DIVISORS)
    verdict = pst.has_pst(graph)
    if not verdict.exists:
        raise AssertionError("expected a PST verdict")
    if ring.element_name(verdict.target) != "x*y":
        raise AssertionError("wrong target")
    if verdict.certificate.tau != Fraction(1, 4):
        raise AssertionError("minimal time is not (1/4) * 2*pi")
    spec = spectra.spectrum_from_ramanujan(graph)
    psi = duality.build_psi(ring)
    amp = oracle.walk_amplitude(graph, spec, psi, verdict.target, math.pi / 2)
    if amp.modulus < 1 - oracle.UNIT_MODULUS_TOL:
        raise AssertionError(f"amplitude {amp.modulus} below the PST threshold")


def check_no_pst_example() -> None:
    ring = build_ring(TABLE_RING)
    graph = graphs.build_graph(ring, TABLE_B_DIVISORS)
    verdict = pst.has_pst(graph)
    if verdict.exists:
        raise AssertionError("expected a no-PST verdict")
    if verdict.witness.kind != "equal_lambda_pair":
        raise AssertionError(f"unexpected witness kind {verdict.witness.kind}")
    spec = spectra.spectrum_from_ramanujan(graph)
    psi = duality.build_psi(ring)
    # the obstruction: some r in the maximal ideal shares the unit eigenvalue
    m = np.flatnonzero(~ring.units_mask)
    lam1 = int(spec.values[ring.one])
    if not np.any(spec.values[m[m != 0]] == lam1):
        raise AssertionError("no maximal-ideal element shares the unit eigenvalue")
    if not oracle.verify_verdict(graph, verdict, spec, psi):
        raise AssertionError("a grid sweep found a near-unit amplitude")


def check_chain_rings() -> None:
    import itertools

    for text in CHAIN_RINGS:
        ring = build_ring(text)
        report = pst.scan_divisor_sets(ring)
        ideals = ring.all_principal_ideals()
        # the two smallest nonzero ideals of a chain ring of length k are
        # R alpha^(k-1) and R alpha^(k-2); PST holds iff D meets exactly
        # one of them
        marked = {i.key for i in sorted(ideals, key=lambda i: i.size)[:2]}
        idx = 0
        for size in range(1, len(ideals) + 1):
            for combo in itertools.combinations(ideals, size):
                row = report.rows[idx]
                idx += 1
                want = sum(1 for i in combo if i.key in marked) == 1
                if row.exists != want:
                    raise AssertionError(
                        f"{text}: verdict for {row.divisors} is {row.exists}, "
                        f"classification predicts {want}"
                    )


def check_unitary_classification() -> None:
    for text, want in UNITARY_EXPECTED:
        ring = build_ring(text)
        got = pst.classify_unitary(ring)
        if got.has_pst != want:
            raise AssertionError(f"classify({text}) = {got.has_pst}, expected {want}")
        verdict = pst.has_pst(graphs.unitary_graph(ring))
        if verdict.exists != want:
            raise AssertionError(f"solver({text}) = {verdict.exists}, expected {want}")


def check_unitary_poly_rule() -> None:
    cases = [
        (2, [0, 1, 1], True),  # x(x+1)
        (2, [0, 0, 1], True),  # x^2
        (2, [0, 0, 0, 1], False),  # x^3
        (2, [0, 0, 1, 0, 1], False),  # x^2 (x+1)^2
        (2, [0, 1, 0, 0, 1], True),  # x(x+1)(x^2+x+1)
        (4, [0, 1, 1], False),  # wrong base field
    ]
    for q, coeffs, want in cases:
        got = pst.classify_unitary_poly(q, coeffs)
        if got != want:
            raise AssertionError(f"poly rule ({q}, {coeffs}) = {got}, expected {want}")
    # cross-check against the ring-level classifier on F2[x]/(f)
    for coeffs in ([0, 1, 1], [0, 0, 1], [0, 0, 0, 1], [0, 1, 0, 0, 1]):
        poly = " + ".join(
            ("1" if k == 0 else f"x^{k}" if k > 1 else "x")
            for k in range(len(coeffs) - 1, -1, -1)
            if coeffs[k]
        )
        ring = build_ring(f"F2[x]/({poly})")
        if pst.classify_unitary_poly(2, coeffs) != pst.classify_unitary(ring).has_pst:
            raise AssertionError(f"poly rule disagrees with the classifier on {poly}")


def check_z4_unitary_spectrum() -> None:
    ring = build_ring("Z4")
    spec = spectra.spectrum_from_ramanujan(graphs.unitary_graph(ring))
    if spec.values.tolist() != [2, 0, -2, 0]:
        raise AssertionError(f"Z4 unitary spectrum {spec.values.tolist()}")


CHECKS: list[tuple[str, Callable[[], None]]] = [
    ("spectrum table, order-16 ring, divisors {R, Rxy}", check_table_a),
    ("spectrum table, order-16 ring, divisors {R, Rx, Rxy}", check_table_b),
    ("PST verdict and amplitude, divisors {R, Rxy}", check_pst_example),
    ("no-PST verdict and sweep, divisors {R, Rx, Rxy}", check_no_pst_example),
    ("chain-ring classification (Z8, Z16, F2[x]/x^3)", check_chain_rings),
    ("unitary-graph classification over ring list", check_unitary_classification),
    ("unitary rule for polynomial quotients", check_unitary_poly_rule),
    ("Z4 unitary spectrum", check_z4_unitary_spectrum),
]


def run(out=print) -> int:
    """Run every check; returns the number of failures."""
    failures = 0
    for label, fn in CHECKS:
        try:
            fn()
        except AssertionError as exc:
            failures += 1
            out(f"FAIL {label}: {exc}")
        else:
            out(f"PASS {label}")
    out(f"{len(CHECKS) - failures}/{len(CHECKS)} checks passed")
    return failures
