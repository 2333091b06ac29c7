"""Integer spectra of gcd-graphs, two independent ways.

Closed form: lambda_r = sum over divisor generators x of c(r, Ann(x)) with

    c(r, Ann(x)) = phi(R/Ann(x)) / phi(R/Ann(rx)) * mu(R/Ann(rx)),

where phi counts units and mu is 0 when the quotient has a nonzero nilpotent
and (-1)^(number of local factors) otherwise.  The division is exact whenever
mu is nonzero (asserted).

Character sum: lambda_r = sum over s in S of zeta_n^(psi(r s)); each value is
checked to be within 1e-6 of an integer.  The two paths agree pointwise.
"""

from __future__ import annotations

from collections import Counter

import numpy as np

from .duality import Functional
from .errors import InternalCheckError
from .graphs import GcdGraph
from .rings import Ring


class Spectrum:
    """Eigenvalues of the adjacency operator, indexed by ring element.

    values[r] is the eigenvalue of the character attached to r; the multiset
    of values (with multiplicity) is the adjacency spectrum.
    """

    def __init__(self, ring: Ring, values: np.ndarray):
        self.ring = ring
        self.values = values

    def multiset(self) -> Counter:
        return Counter(int(v) for v in self.values)

    def eigenvalue_classes(self) -> list[tuple[int, np.ndarray]]:
        """(eigenvalue, element indices) in descending eigenvalue order."""
        out = []
        for v in sorted(set(int(x) for x in self.values), reverse=True):
            out.append((v, np.flatnonzero(self.values == v)))
        return out

    def char_poly(self) -> list[int]:
        """Exact coefficients of prod (t - lambda_r), descending powers."""
        coeffs = [1]
        for v in self.values:
            v = int(v)
            coeffs = [c for c in coeffs] + [0]
            for i in range(len(coeffs) - 1, 0, -1):
                coeffs[i] -= v * coeffs[i - 1]
        return coeffs

    def to_json(self) -> dict:
        return {
            "eigenvalues": [
                {
                    "value": v,
                    "multiplicity": int(len(idx)),
                    "elements": [self.ring.element_name(int(i)) for i in idx],
                }
                for v, idx in self.eigenvalue_classes()
            ]
        }


def ramanujan_sum(ring: Ring, r: int, x: int) -> int:
    """c(r, Ann(x)): the character-orbit sum in closed form."""
    phi_x, _ = ring.phi_mu_of_quotient(ring.annihilator(x))
    rx = ring.mul(r, x)
    phi_rx, mu_rx = ring.phi_mu_of_quotient(ring.annihilator(rx))
    if mu_rx == 0:
        return 0
    if phi_x % phi_rx:
        raise InternalCheckError("unit-count ratio is not an integer")
    return (phi_x // phi_rx) * mu_rx


def spectrum_from_ramanujan(graph: GcdGraph) -> Spectrum:
    """Spectrum via the closed form, cached per distinct annihilator ideal."""
    ring = graph.ring
    values = np.zeros(ring.size, dtype=np.int64)
    for ideal in graph.divisors:
        x = ideal.generator
        phi_x, _ = ring.phi_mu_of_quotient(ring.annihilator(x))
        col = np.asarray(ring.mul_row(x))  # r*x for every r
        uniq, inverse = np.unique(col, return_inverse=True)
        contrib = np.zeros(len(uniq), dtype=np.int64)
        for k, y in enumerate(uniq):
            phi_y, mu_y = ring.phi_mu_of_quotient(ring.annihilator(int(y)))
            if mu_y == 0:
                continue
            if phi_x % phi_y:
                raise InternalCheckError("unit-count ratio is not an integer")
            contrib[k] = (phi_x // phi_y) * mu_y
        values += contrib[inverse]
    return Spectrum(ring, values)


def spectrum_from_characters(graph: GcdGraph, psi: Functional, tol: float = 1e-6) -> Spectrum:
    """Spectrum via character sums over the connection set."""
    ring = graph.ring
    n = psi.modulus
    zeta = np.exp(2j * np.pi * np.arange(n) / n)
    values = np.zeros(ring.size, dtype=np.int64)
    s_idx = graph.s_indices
    chunk = max(1, (1 << 20) // max(1, len(s_idx)))
    ar = np.arange(ring.size, dtype=np.int64)
    for start in range(0, ring.size, chunk):
        rows = ar[start : start + chunk]
        prods = np.asarray(ring.vmul(rows[:, None], s_idx[None, :]))
        sums = zeta[psi.values[prods] % n].sum(axis=1)
        rounded = np.round(sums.real).astype(np.int64)
        if (np.abs(sums.real - rounded) > tol).any() or (np.abs(sums.imag) > tol).any():
            raise InternalCheckError("character sum is not within tolerance of an integer")
        values[rows] = rounded
    return Spectrum(ring, values)
