"""Independent brute-force verifiers.

Everything here avoids the closed-form spectrum machinery: amplitudes are
numeric sums over the character eigenbasis, characteristic polynomials come
straight from the adjacency matrix in exact integer arithmetic, and the
equal-eigenvalue subgroup is an exhaustive closure.  These are the checks the
rest of the library is tested against.

The continuous walk on a graph with adjacency matrix A is F(t) = exp(itA).
On a gcd-graph the characters diagonalize A simultaneously, which collapses
the matrix exponential to

    F(t)_{s1,s2} = (1/|R|) * sum_r  e^(i*lambda_r*t) * zeta_n^psi((s1-s2) r).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import duality
from .duality import Functional
from .errors import ResourceCapError, InternalCheckError
from .graphs import GcdGraph, additive_closure
from .rings import Ring
from .spectra import Spectrum, spectrum_from_ramanujan

UNIT_MODULUS_TOL = 1e-9  # |F| within this of 1 counts as perfect transfer
SWEEP_MARGIN = 1e-3  # modulus must stay below 1 - this on a NoPst sweep
SWEEP_STEP = math.pi / 1024


@dataclass
class WalkAmplitude:
    value: complex

    @property
    def modulus(self) -> float:
        return abs(self.value)


def walk_amplitude(
    graph: GcdGraph, spectrum: Spectrum, psi: Functional, s: int, t: float
) -> WalkAmplitude:
    """F(t)_{s,0}: the amplitude of the walk started at 0 observed at s."""
    ring = graph.ring
    n = psi.modulus
    zeta = np.exp(2j * math.pi * np.arange(n) / n)
    chars = zeta[psi.values[np.asarray(ring.mul_row(s))] % n]
    phases = np.exp(1j * t * spectrum.values.astype(np.float64))
    return WalkAmplitude(complex((chars * phases).sum() / ring.size))


def amplitude_row(
    graph: GcdGraph, spectrum: Spectrum, psi: Functional, t: float
) -> np.ndarray:
    """All amplitudes F(t)_{s,0} at once (index = s)."""
    ring = graph.ring
    n = psi.modulus
    zeta = np.exp(2j * math.pi * np.arange(n) / n)
    phases = np.exp(1j * t * spectrum.values.astype(np.float64))
    out = np.empty(ring.size, dtype=np.complex128)
    for s in range(ring.size):
        chars = zeta[psi.values[np.asarray(ring.mul_row(s))] % n]
        out[s] = (chars * phases).sum() / ring.size
    return out


def adjacency_matrix(graph: GcdGraph) -> np.ndarray:
    """Dense 0/1 adjacency matrix (int64)."""
    ring = graph.ring
    mat = np.zeros((ring.size, ring.size), dtype=np.int64)
    for a in range(ring.size):
        mat[a, np.asarray(ring.add_row(a))[graph.s_indices]] = 1
    if not np.array_equal(mat, mat.T):
        raise InternalCheckError("adjacency matrix is not symmetric")
    if mat.trace() != 0:
        raise InternalCheckError("adjacency matrix has loops")
    return mat


def char_poly_exact(graph: GcdGraph, size_cap: int = 64) -> list[int]:
    """Exact characteristic polynomial of the adjacency matrix, descending
    powers, computed from power sums (traces of matrix powers) in unbounded
    integer arithmetic — no eigenvalue machinery involved."""
    n = graph.size
    if n > size_cap:
        raise ResourceCapError(f"characteristic polynomial capped at order {size_cap}")
    mat = adjacency_matrix(graph).astype(object)
    power = mat
    psums = [0]  # psums[k] = trace(A^k)
    for _ in range(n):
        psums.append(int(np.trace(power)))
        power = power.dot(mat)
    # Newton's identities: k*e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    e = [1]
    for k in range(1, n + 1):
        acc = 0
        for i in range(1, k + 1):
            term = e[k - i] * psums[i]
            acc += term if i % 2 == 1 else -term
        if acc % k:
            raise InternalCheckError("Newton identity produced a non-integer")
        e.append(acc // k)
    return [e[k] if k % 2 == 0 else -e[k] for k in range(n + 1)]


def delta_full(spectrum: Spectrum, ring: Ring) -> np.ndarray:
    """Mask of the subgroup generated by r1 - r2 over all equal-eigenvalue
    pairs; every PST target annihilates it under psi."""
    values = np.asarray(spectrum.values)
    gens = []
    for v in np.unique(values):
        members = np.flatnonzero(values == v)
        base = int(members[0])
        for m in members[1:]:
            gens.append(ring.sub(int(m), base))
    return additive_closure(ring, np.asarray(gens, dtype=np.int64))


def verify_verdict(
    graph: GcdGraph,
    verdict,
    spectrum: Optional[Spectrum] = None,
    psi: Optional[Functional] = None,
) -> bool:
    """Numerically confirm a PST verdict.

    Certificates are checked at the reported minimal time and (when a period
    is reported) at one later time in the same residue class.  Refutations
    are checked by sweeping t over (0, 2*pi] in steps of pi/1024 for every
    candidate target and requiring every modulus to stay below 1 - 10^-3.
    """
    ring = graph.ring
    if spectrum is None:
        spectrum = spectrum_from_ramanujan(graph)
    if psi is None:
        psi = duality.build_psi(ring)
    if verdict.exists:
        cert = verdict.certificate
        times = [2 * math.pi * float(cert.tau)]
        if cert.period is not None:
            times.append(2 * math.pi * float(cert.tau + cert.period))
        return all(
            walk_amplitude(graph, spectrum, psi, verdict.target, t).modulus
            >= 1 - UNIT_MODULUS_TOL
            for t in times
        )
    from .pst import candidate_targets

    for s in candidate_targets(graph, psi):
        if sweep_max_modulus(graph, spectrum, psi, s) > 1 - SWEEP_MARGIN:
            return False
    return True


def sweep_max_modulus(
    graph: GcdGraph,
    spectrum: Spectrum,
    psi: Functional,
    s: int,
    t_max: float = 2 * math.pi,
    step: float = SWEEP_STEP,
) -> float:
    """max |F(t)_{s,0}| over the grid {step, 2*step, ...} up to t_max."""
    ring = graph.ring
    n = psi.modulus
    zeta = np.exp(2j * math.pi * np.arange(n) / n)
    chars = zeta[psi.values[np.asarray(ring.mul_row(s))] % n]
    lam = spectrum.values.astype(np.float64)
    steps = int(round(t_max / step))
    ts = step * np.arange(1, steps + 1)
    # (T, R) phase grid in manageable chunks
    best = 0.0
    chunk = max(1, (1 << 22) // max(ring.size, 1))
    for i in range(0, len(ts), chunk):
        block = ts[i : i + chunk, None] * lam[None, :]
        vals = np.exp(1j * block).dot(chars) / ring.size
        best = max(best, float(np.abs(vals).max()))
    return best


def sweep_csv(
    path: str,
    graph: GcdGraph,
    spectrum: Spectrum,
    psi: Functional,
    s: int,
    t_max: float = 2 * math.pi,
    steps: int = 2048,
) -> int:
    """Write t, re, im, modulus rows for F(t)_{s,0}; returns the row count."""
    ts = np.linspace(0.0, t_max, steps + 1)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "re", "im", "modulus"])
        for t in ts:
            amp = walk_amplitude(graph, spectrum, psi, s, float(t))
            writer.writerow(
                [f"{t:.12g}", f"{amp.value.real:.12g}", f"{amp.value.imag:.12g}", f"{amp.modulus:.12g}"]
            )
    return len(ts)
