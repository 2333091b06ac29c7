"""Perfect state transfer decisions with exact certificates.

The walk exp(itA) on a gcd-graph has perfect state transfer (PST) from 0 to s
at time t iff for all r1, r2:

    (lambda_r1 - lambda_r2) * t/(2*pi) + psi(s*(r1 - r2))/n = 0  (mod 1).

Writing tau = t/(2*pi), the (r, 0) instances

    a_r * tau + b_r / n in Z,   a_r = lambda_r - lambda_0,  b_r = psi(s*r),

already imply the general pair (r1, r2) by subtracting the (r1, 0) and
(r2, 0) instances and using additivity of psi, so the one-sided family is the
whole criterion.  Whenever some a_r is nonzero (always, since the spectrum is
never constant on a nonempty connection set), every solution has the form
tau = u / (n*A) with A = lcm |a_r|, and each constraint becomes a linear
congruence on u; the solution set is computed by pairwise congruence merging
(extended gcd), so failure always produces a witness pair of constraints.

Times are reported exactly: tau values are fractions of 2*pi.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import dsl, duality, fppoly
from .dsl import prime_power
from .duality import Functional
from .errors import InputError, InternalCheckError, ResourceCapError
from .graphs import GcdGraph, additive_closure, build_graph
from .rings import Ring, build_ring
from .spectra import Spectrum, spectrum_from_ramanujan


# =========================================================================
# Verdicts
# =========================================================================


@dataclass
class PstCertificate:
    target: int
    tau: Fraction  # minimal positive t as a fraction of 2*pi
    period: Optional[Fraction]  # tau period (None when produced by the parity path)
    source: str  # "congruence" | "parity"

    def time_json(self, f: Fraction) -> dict:
        return {"num": f.numerator, "den": f.denominator, "of": "2*pi"}


@dataclass
class NoPstWitness:
    kind: str  # equal_lambda_pair | incompatible_pair | unsolvable_congruence | no_candidates
    r1: Optional[int] = None
    r2: Optional[int] = None
    detail: str = ""


@dataclass
class PstVerdict:
    exists: bool
    ring: Ring
    target: Optional[int] = None
    certificate: Optional[PstCertificate] = None
    witness: Optional[NoPstWitness] = None
    per_target: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"verdict": "pst" if self.exists else "no_pst"}
        if self.exists:
            cert = self.certificate
            out["target"] = self.ring.element_name(self.target)
            out["minimal_time"] = cert.time_json(cert.tau)
            out["minimal_time_decimal"] = float(cert.tau) * 2 * math.pi
            if cert.period is not None:
                out["period"] = cert.time_json(cert.period)
            out["source"] = cert.source
        else:
            if self.target is not None:
                out["target"] = self.ring.element_name(self.target)
            if self.witness is not None:
                out["witness"] = self._witness_json(self.witness)
            if self.per_target:
                out["per_target"] = {
                    self.ring.element_name(s): self._witness_json(w)
                    for s, w in self.per_target.items()
                }
        return out

    def _witness_json(self, w: NoPstWitness) -> dict:
        data = {"kind": w.kind}
        if w.r1 is not None:
            data["r1"] = self.ring.element_name(w.r1)
        if w.r2 is not None:
            data["r2"] = self.ring.element_name(w.r2)
        if w.detail:
            data["detail"] = w.detail
        return data


# =========================================================================
# Constraints and the congruence solver
# =========================================================================


def transfer_constraints(
    graph: GcdGraph, spectrum: Spectrum, psi: Functional, s: int
) -> list[tuple[int, int, int]]:
    """Deduplicated (a_r, b_r, representative r) triples over all r."""
    ring = graph.ring
    a = np.asarray(spectrum.values, dtype=np.int64) - int(spectrum.values[0])
    b = psi.values[np.asarray(ring.mul_row(s))] % psi.modulus
    stacked = np.stack([a, b], axis=1)
    uniq, first = np.unique(stacked, axis=0, return_index=True)
    return [(int(ai), int(bi), int(ri)) for (ai, bi), ri in zip(uniq, first)]


def _modinv(a: int, m: int) -> int:
    return pow(a % m, -1, m)


def solve_pst(graph: GcdGraph, spectrum: Spectrum, psi: Functional, s: int) -> PstVerdict:
    """Decide PST from 0 to s, with an exact time class or a witness."""
    ring = graph.ring
    if s == 0:
        raise InputError("the target must be a nonzero element")
    n = psi.modulus
    constraints = transfer_constraints(graph, spectrum, psi, s)

    # lambda_r = lambda_0 forces psi(s r) = 0; otherwise the (r, 0) pair
    # fails at every time.
    for a, b, r in constraints:
        if a == 0 and b % n != 0:
            return PstVerdict(
                False,
                ring,
                target=s,
                witness=NoPstWitness(
                    "equal_lambda_pair",
                    r1=r,
                    r2=0,
                    detail=f"lambda equal but psi(s*(r1-r2)) = {b} != 0 (mod {n})",
                ),
            )
    nonzero = [(a, b, r) for a, b, r in constraints if a != 0]
    if not nonzero:
        raise InternalCheckError("constant spectrum on a nonempty connection set")

    big_a = 1
    for a, _, _ in nonzero:
        big_a = math.lcm(big_a, abs(a))
    denom = n * big_a  # tau = u / denom

    merged_u, merged_m = 0, 1
    classes = []
    for a, b, r in nonzero:
        g = math.gcd(abs(a), denom)
        rhs = (-b * big_a) % denom
        if rhs % g:
            return PstVerdict(
                False,
                ring,
                target=s,
                witness=NoPstWitness(
                    "unsolvable_congruence",
                    r1=r,
                    r2=0,
                    detail=f"{a}*u = {rhs} (mod {denom}) has no solution",
                ),
            )
        m_i = denom // g
        u_i = ((rhs // g) * _modinv(a // g, m_i)) % m_i
        classes.append((u_i, m_i, r))
        g2 = math.gcd(merged_m, m_i)
        if (u_i - merged_u) % g2:
            return PstVerdict(
                False, ring, target=s, witness=_witness_pair(classes, nonzero, n)
            )
        lcm_m = merged_m // g2 * m_i
        k = ((u_i - merged_u) // g2 * _modinv(merged_m // g2, m_i // g2)) % (m_i // g2)
        merged_u = (merged_u + merged_m * k) % lcm_m
        merged_m = lcm_m

    u_star = merged_u % merged_m
    if u_star == 0:
        # tau = 0 would force psi(s r) = 0 for every r, impossible for s != 0
        raise InternalCheckError("zero transfer time for a nonzero target")
    tau = Fraction(u_star, denom)
    period = Fraction(merged_m, denom)
    _recheck_exact(constraints, n, tau)
    return PstVerdict(
        True,
        ring,
        target=s,
        certificate=PstCertificate(s, tau, period, "congruence"),
    )


def _witness_pair(classes, nonzero, n) -> NoPstWitness:
    """Locate a concretely incompatible pair of (r, 0) constraints.

    Pairwise compatibility of congruences implies global solvability (CRT),
    so an inconsistent system always contains an inconsistent pair.
    """
    by_a: dict[int, tuple[int, int]] = {}
    for a, b, r in nonzero:
        if a in by_a and (b - by_a[a][0]) % n != 0:
            return NoPstWitness(
                "equal_lambda_pair",
                r1=by_a[a][1],
                r2=r,
                detail="equal eigenvalues but psi(s*(r1-r2)) != 0 (mod n)",
            )
        by_a.setdefault(a, (b, r))
    for (u1, m1, r1), (u2, m2, r2) in itertools.combinations(classes, 2):
        if (u1 - u2) % math.gcd(m1, m2):
            return NoPstWitness(
                "incompatible_pair",
                r1=r1,
                r2=r2,
                detail=f"u = {u1} (mod {m1}) conflicts with u = {u2} (mod {m2})",
            )
    raise InternalCheckError("inconsistent system without an inconsistent pair")


def _recheck_exact(constraints, n: int, tau: Fraction):
    for a, b, _ in constraints:
        val = a * tau + Fraction(b, n)
        if val.denominator != 1:
            raise InternalCheckError("certificate fails an exact constraint recheck")


def _satisfies_all(constraints, n: int, tau: Fraction) -> bool:
    return all((a * tau + Fraction(b, n)).denominator == 1 for a, b, _ in constraints)


# =========================================================================
# Candidate targets
# =========================================================================


def unit_difference_subgroup(ring: Ring) -> np.ndarray:
    """Mask of the subgroup generated by differences of units."""
    units = ring.unit_indices
    diffs = np.asarray(ring.vadd(units, ring.neg(ring.one)))
    return additive_closure(ring, diffs)


def candidate_targets(graph: GcdGraph, psi: Functional) -> list[int]:
    """All s != 0 with psi(s d) = 0 for every d in the unit-difference
    subgroup; every PST target lies here, for every divisor set."""
    ring = graph.ring
    dp = np.flatnonzero(unit_difference_subgroup(ring))
    ann = ring.annihilator_of_set(dp)
    cands = [int(x) for x in ann.elements if x != 0]
    _assert_target_shape(ring, set(cands))
    return cands


def _assert_target_shape(ring: Ring, cands: set[int]):
    """Candidates+0 must equal: (per residue-F_2 local factor: 0 or its
    minimal element) x (0 in every other factor)."""
    dec = ring.local_decomposition()
    expected = {0}
    for f in dec.factors:
        allowed = [0]
        if f.residue_is_f2:
            allowed.append(f.minimal_element_parent)
        expected = {ring.add(x, a) for x in expected for a in allowed}
    expected.discard(0)
    if expected != cands:
        raise InternalCheckError("candidate targets deviate from the product form")


# =========================================================================
# has_pst and the parity fast path
# =========================================================================


def has_pst(
    graph: GcdGraph,
    spectrum: Optional[Spectrum] = None,
    psi: Optional[Functional] = None,
) -> PstVerdict:
    """First PST verdict over candidate targets in ascending index order."""
    ring = graph.ring
    if spectrum is None:
        spectrum = spectrum_from_ramanujan(graph)
    if psi is None:
        psi = duality.build_psi(ring)
    cands = candidate_targets(graph, psi)
    if not cands:
        return PstVerdict(False, ring, witness=NoPstWitness("no_candidates"))
    per_target: dict[int, NoPstWitness] = {}
    for s in cands:
        verdict = solve_pst(graph, spectrum, psi, s)
        if verdict.exists:
            _assert_unique_target(graph, spectrum, psi, cands, verdict)
            _assert_target_valid(ring, s)
            return verdict
        per_target[s] = verdict.witness
    first = cands[0]
    return PstVerdict(
        False, ring, target=first, witness=per_target[first], per_target=per_target
    )


def _assert_unique_target(graph, spectrum, psi, cands, verdict):
    """At any fixed time the receiving target is unique."""
    tau = verdict.certificate.tau
    for s2 in cands:
        if s2 == verdict.target:
            continue
        cons = transfer_constraints(graph, spectrum, psi, s2)
        if _satisfies_all(cons, psi.modulus, tau):
            raise InternalCheckError("two targets satisfy the criterion at one time")


def _assert_target_valid(ring: Ring, s: int):
    if ring.add(s, s) != 0:
        raise InternalCheckError("PST target is not 2-torsion")


def parity_fast_path(graph: GcdGraph) -> Optional[PstVerdict]:
    """For local R with residue field F_2: an odd census |D ∩ Isoc2| proves
    PST to the minimal element at t = pi/2 (tau = 1/4) without solving
    congruences.  Even census: no conclusion (returns None)."""
    ring = graph.ring
    if not ring.is_local() or ring.residue_field_order() != 2:
        raise InputError("the parity shortcut needs a local ring with residue field F_2")
    isoc2_keys = {i.key for i in ring.socle2_ideals()}
    count = sum(1 for i in graph.divisors if i.key in isoc2_keys)
    if count % 2 == 1:
        e = duality.minimal_element(ring)
        return PstVerdict(
            True, ring, target=e,
            certificate=PstCertificate(e, Fraction(1, 4), None, "parity"),
        )
    return None


def socle2_census(graph: GcdGraph) -> int:
    """|D ∩ Isoc2(R)| for local R with residue field F_2."""
    isoc2_keys = {i.key for i in graph.ring.socle2_ideals()}
    return sum(1 for i in graph.divisors if i.key in isoc2_keys)


# =========================================================================
# Unitary graph classification
# =========================================================================


@dataclass
class UnitaryClassification:
    has_pst: bool
    reasons: list[str]
    factor_summary: list[dict]

    def to_json(self) -> dict:
        return {
            "has_pst": self.has_pst,
            "reasons": self.reasons,
            "factors": self.factor_summary,
        }


def classify_unitary(ring: Ring) -> UnitaryClassification:
    """Structural test: does the unitary Cayley graph of R admit PST?

    Requires (i) at least one local factor with residue field F_2, (ii) every
    factor with a larger residue field is a finite field of order divisible
    by 4, and (iii) among the residue-F_2 factors, all have order 2 except at
    most one, which must have order exactly 4.
    """
    dec = ring.local_decomposition()
    reasons: list[str] = []
    summary = []
    f2_orders = []
    ok = True
    for f in dec.factors:
        summary.append(
            {
                "order": f.ring.size,
                "residue_field_order": f.residue_field_order,
                "is_field": f.ring.is_field(),
            }
        )
        if f.residue_is_f2:
            f2_orders.append(f.ring.size)
        else:
            if not f.ring.is_field():
                ok = False
                reasons.append(
                    f"factor of order {f.ring.size} has residue field "
                    f"F_{f.residue_field_order} but is not a field"
                )
            elif f.ring.size % 4 != 0:
                ok = False
                reasons.append(
                    f"field factor of order {f.ring.size} is not divisible by 4"
                )
    if not f2_orders:
        ok = False
        reasons.append("no local factor has residue field F_2")
    else:
        large = sorted(o for o in f2_orders if o > 2)
        if large and (len(large) > 1 or large[0] != 4):
            ok = False
            reasons.append(
                "residue-F_2 factors must all have order 2 except at most "
                f"one of order 4; got orders {sorted(f2_orders)}"
            )
    if ok:
        reasons.append("structure matches the PST pattern for unitary graphs")
    return UnitaryClassification(ok, reasons, summary)


def classify_unitary_poly(q: int, coeffs: list[int]) -> bool:
    """Unitary graph PST test for F_q[x]/(f), directly from (q, f).

    True iff q = 2 and f = x^a (x+1)^b g with g squarefree, coprime to
    x(x+1), 1 <= max(a, b) <= 2 and (a, b) != (2, 2).
    """
    pk = prime_power(q)
    if pk is None:
        raise InputError(f"{q} is not a prime power")
    p = pk[0]
    f = fppoly.trim(list(coeffs), p)
    if not fppoly.is_monic(f) or fppoly.degree(f) < 1:
        raise InputError("the modulus must be monic of degree >= 1")
    if q != 2:
        return False
    a = 0
    while f and f[0] == 0:
        f = f[1:]
        a += 1
    b = 0
    while True:
        quo, rem = fppoly.divmod_poly(f, [1, 1], 2)
        if rem:
            break
        f = quo
        b += 1
    g = f
    if fppoly.degree(g) > 0 and fppoly.gcd(g, fppoly.derivative(g, 2), 2) != [1]:
        return False
    if not 1 <= max(a, b) <= 2:
        return False
    if (a, b) == (2, 2):
        return False
    return True


# =========================================================================
# Divisor-set scan
# =========================================================================


@dataclass
class ScanRow:
    divisors: str
    census: Optional[int]
    parity_odd: Optional[bool]
    exists: bool
    target: Optional[str]
    tau: Optional[Fraction]
    witness_kind: Optional[str]
    flags: list[str]
    # even-parity NoPst rows only: does some a in the maximal ideal have
    # lambda_a = lambda_1?
    lambda_collision: Optional[bool] = None

    def to_json(self) -> dict:
        data = {
            "divisors": self.divisors,
            "socle2_census": self.census,
            "parity_odd": self.parity_odd,
            "verdict": "pst" if self.exists else "no_pst",
            "target": self.target,
            "minimal_time": (
                {"num": self.tau.numerator, "den": self.tau.denominator, "of": "2*pi"}
                if self.tau is not None
                else None
            ),
            "witness_kind": self.witness_kind,
            "flags": self.flags,
            "lambda_collision": self.lambda_collision,
        }
        return data


@dataclass
class ScanReport:
    ring_text: Optional[str]
    rows: list[ScanRow]

    def counts(self) -> dict:
        return {
            "sets": len(self.rows),
            "pst": sum(1 for r in self.rows if r.exists),
            "no_pst": sum(1 for r in self.rows if not r.exists),
            "parity_converse_open_hits": sum(
                1 for r in self.rows if "even_census_pst" in r.flags
            ),
        }

    def to_json(self) -> dict:
        return {
            "ring": self.ring_text,
            "summary": self.counts(),
            "rows": [r.to_json() for r in self.rows],
        }


def _scan_one(ring, spectrum_psi, gens) -> ScanRow:
    psi = spectrum_psi
    graph = build_graph(ring, list(gens))
    spectrum = spectrum_from_ramanujan(graph)
    census = parity = None
    if ring.is_local() and ring.residue_field_order() == 2:
        census = socle2_census(graph)
        parity = census % 2 == 1
    verdict = has_pst(graph, spectrum, psi)
    flags = []
    collision = None
    if parity is not None:
        if parity and not verdict.exists:
            raise InternalCheckError("odd census but the solver found no PST")
        if not parity and verdict.exists:
            flags.append("even_census_pst")  # converse of the parity test is open
        if not parity and not verdict.exists:
            m = np.flatnonzero(~ring.units_mask)
            lam1 = int(spectrum.values[ring.one])
            collision = bool(np.any(spectrum.values[m] == lam1))
    row = ScanRow(
        divisors=graph.divisors.describe(),
        census=census,
        parity_odd=parity,
        exists=verdict.exists,
        target=ring.element_name(verdict.target) if verdict.exists else None,
        tau=verdict.certificate.tau if verdict.exists else None,
        witness_kind=None if verdict.exists else verdict.witness.kind,
        flags=flags,
        lambda_collision=collision,
    )
    return row


def _scan_chunk(args) -> list[dict]:
    ring_json, chunks = args
    ring = build_ring(dsl.ring_from_json(ring_json))
    psi = duality.build_psi(ring)
    out = []
    for gens in chunks:
        out.append(_scan_one(ring, psi, gens).to_json())
    return out


def scan_divisor_sets(
    ring: Ring,
    max_size: Optional[int] = None,
    max_sets: int = 100_000,
    jobs: int = 1,
) -> ScanReport:
    """Evaluate every divisor set of size <= max_size over the distinct
    nonzero principal ideals; guard via max_sets (ResourceCapError)."""
    ideals = ring.all_principal_ideals()
    k = len(ideals)
    limit = min(max_size or k, k)
    total = sum(math.comb(k, i) for i in range(1, limit + 1))
    if total > max_sets:
        raise ResourceCapError(f"{total} divisor sets exceed the cap {max_sets}")
    gen_sets = []
    for size in range(1, limit + 1):
        for combo in itertools.combinations(ideals, size):
            gen_sets.append(tuple(i.generator for i in combo))
    ring_text = dsl.format_ring(ring.expr) if ring.expr is not None else None
    if jobs > 1 and ring.expr is not None and len(gen_sets) > 1:
        # round-robin chunks; chunk i holds original indices i, i+jobs, ...
        chunks = [gen_sets[i::jobs] for i in range(jobs)]
        ring_json = dsl.ring_to_json(ring.expr)
        rows_json: list[Optional[dict]] = [None] * len(gen_sets)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, part in enumerate(pool.map(_scan_chunk, [(ring_json, c) for c in chunks])):
                for k, row in enumerate(part):
                    rows_json[i + k * jobs] = row
        rows = [_row_from_json(r) for r in rows_json]
        return ScanReport(ring_text, rows)
    psi = duality.build_psi(ring)
    rows = [_scan_one(ring, psi, gens) for gens in gen_sets]
    return ScanReport(ring_text, rows)


def _row_from_json(data: dict) -> ScanRow:
    mt = data.get("minimal_time")
    return ScanRow(
        divisors=data["divisors"],
        census=data["socle2_census"],
        parity_odd=data["parity_odd"],
        exists=data["verdict"] == "pst",
        target=data["target"],
        tau=Fraction(mt["num"], mt["den"]) if mt else None,
        witness_kind=data["witness_kind"],
        flags=list(data["flags"]),
        lambda_collision=data["lambda_collision"],
    )
