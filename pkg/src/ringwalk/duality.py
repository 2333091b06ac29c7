"""Nondegenerate linear functionals psi: R -> Z/n and the minimal element.

n is the additive exponent of R.  psi is built structurally:

  - Z/m: the identity, n = m;
  - base[x]/(f): psi of the coefficient of x^(deg f - 1), n unchanged;
  - products: psi(a_1, .., a_d) = sum_i (n / n_i) psi_i(a_i) mod n, n = lcm n_i.

Nondegeneracy (no nonzero ideal inside ker psi) is verified exhaustively at
build time; a failure is an internal error since every supported ring admits
such a functional.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, InternalCheckError
from .rings import PolyBlock, ProductBlock, Ring, ZnBlock


@dataclass
class Functional:
    """Additive map R -> Z/n tabulated over element indices."""

    values: np.ndarray  # int64, values[i] = psi(element i) in [0, n)
    modulus: int  # n

    def of(self, index: int) -> int:
        return int(self.values[index])


def _psi_block(block) -> np.ndarray:
    if isinstance(block, ZnBlock):
        return np.arange(block.size, dtype=np.int64)
    if isinstance(block, PolyBlock):
        base_vals = _psi_block(block.base)
        top_digit = np.arange(block.size, dtype=np.int64) // (block.base.size ** (block.deg - 1))
        return base_vals[top_digit]
    if isinstance(block, ProductBlock):
        n = block.exponent
        acc = np.zeros(block.size, dtype=np.int64)
        for factor, comp in zip(block.factors, block.decompose(np.arange(block.size))):
            acc = (acc + (n // factor.exponent) * _psi_block(factor)[comp]) % n
        return acc
    raise InputError("psi construction requires a ring built from the DSL")


def build_psi(ring: Ring, verify: bool = True) -> Functional:
    """Canonical nondegenerate functional for a DSL-built ring."""
    values = _psi_block(ring.structure) % ring.exponent
    psi = Functional(values, ring.exponent)
    if verify and not is_nondegenerate(ring, psi):
        raise InternalCheckError("constructed functional is degenerate")
    return psi


def is_nondegenerate(ring: Ring, psi: Functional) -> bool:
    """True when no nonzero element a has psi(aR) = 0."""
    vals = psi.values % psi.modulus
    for a in range(1, ring.size):
        if not (vals[np.asarray(ring.mul_row(a))] != 0).any():
            return False
    return True


def minimal_element(ring: Ring) -> int:
    """The unique e with Ann(e) = m, for local R with residue field F_2.

    Equivalently the nonzero element of soc(R); Re is then the least nonzero
    ideal, contained in every nonzero ideal.
    """
    if not ring.is_local():
        raise InputError("minimal element requires a local ring")
    if ring.residue_field_order() != 2:
        raise InputError("minimal element requires residue field F_2")
    soc = np.flatnonzero(ring.socle_mask(1))
    soc = soc[soc != 0]
    if len(soc) != 1:
        raise InternalCheckError("socle of a local Frobenius ring must have 2 elements")
    return int(soc[0])


def check_half_property(ring: Ring, psi: Functional) -> bool:
    """Whether psi(e) = n/2 for the minimal element e."""
    e = minimal_element(ring)
    return 2 * psi.of(e) == psi.modulus


def twist(ring: Ring, psi: Functional, unit: int) -> Functional:
    """The functional x -> psi(unit * x); nondegenerate for any unit."""
    if not ring.is_unit(unit):
        raise InputError("twist requires a unit")
    return Functional(psi.values[np.asarray(ring.mul_row(unit))], psi.modulus)
