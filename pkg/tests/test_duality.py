"""The canonical functional: additivity, nondegeneracy, twists, minimal elements."""

import numpy as np
import pytest

from ringwalk.duality import (
    Functional,
    build_psi,
    check_half_property,
    is_nondegenerate,
    minimal_element,
    twist,
)
from ringwalk.errors import InputError

from conftest import GENERAL_CATALOG, LOCAL_F2_CATALOG, ring


@pytest.mark.parametrize("text", GENERAL_CATALOG)
def test_psi_is_additive(text):
    r = ring(text)
    psi = build_psi(r)
    n = psi.modulus
    assert n == r.exponent
    assert psi.of(0) == 0
    for a in range(r.size):
        row = np.asarray(r.add_row(a))
        for b in range(r.size):
            assert psi.of(int(row[b])) == (psi.of(a) + psi.of(b)) % n


@pytest.mark.parametrize("text", GENERAL_CATALOG)
def test_psi_is_nondegenerate(text):
    r = ring(text)
    psi = build_psi(r)
    assert is_nondegenerate(r, psi)
    # no nonzero a may kill the whole of aR
    for a in range(1, r.size):
        vals = psi.values[np.asarray(r.mul_row(a))]
        assert (vals % psi.modulus != 0).any()


def test_degenerate_functional_detected():
    r = ring("Z4")
    # x -> 2x kills the ideal {0, 2}
    degenerate = Functional((2 * np.arange(4)) % 4, 4)
    assert not is_nondegenerate(r, degenerate)
    zero = Functional(np.zeros(4, dtype=np.int64), 4)
    assert not is_nondegenerate(r, zero)


def test_additive_but_degenerate_on_product():
    r = ring("F2 x F3")
    psi = build_psi(r)
    # 3*psi is still additive but kills the F3 component
    assert not is_nondegenerate(r, Functional((3 * psi.values) % 6, 6))


@pytest.mark.parametrize("text", LOCAL_F2_CATALOG)
def test_minimal_element_and_half_property(text):
    r = ring(text)
    e = minimal_element(r)
    assert e != 0
    assert r.add(e, e) == 0
    # Re = {0, e} sits inside every nonzero ideal
    for ideal in r.all_principal_ideals():
        assert ideal.contains(e)
    psi = build_psi(r)
    assert check_half_property(r, psi)
    assert 2 * psi.of(e) == psi.modulus


def test_minimal_element_requires_local_residue_f2():
    with pytest.raises(InputError):
        minimal_element(ring("Z12"))
    with pytest.raises(InputError):
        minimal_element(ring("F3"))
    with pytest.raises(InputError):
        minimal_element(ring("GF(9)"))


def test_known_psi_values():
    r = ring("F2[x,y]/(x^2,y^2)")
    psi = build_psi(r)
    assert psi.modulus == 2
    # psi reads the coefficient of the top monomial x*y
    assert psi.of(r.element_index("x*y")) == 1
    assert psi.of(r.element_index("x")) == 0
    assert psi.of(r.element_index("1 + x*y")) == 1
    z8 = ring("Z8")
    p8 = build_psi(z8)
    assert [p8.of(i) for i in range(8)] == list(range(8))


@pytest.mark.parametrize("text", GENERAL_CATALOG)
def test_twist_by_unit_stays_nondegenerate(text):
    r = ring(text)
    psi = build_psi(r)
    for u in [int(x) for x in r.unit_indices[:4]]:
        tw = twist(r, psi, u)
        assert tw.modulus == psi.modulus
        assert is_nondegenerate(r, tw)
        for a in range(r.size):
            assert tw.of(a) == psi.of(r.mul(u, a))


def test_twist_requires_unit():
    r = ring("Z4")
    psi = build_psi(r)
    with pytest.raises(InputError):
        twist(r, psi, 2)


@pytest.mark.parametrize("text", GENERAL_CATALOG)
def test_character_table_is_orthogonal(text):
    """Sum over r of zeta^psi(r*s) is |R| when s = 0 and 0 otherwise."""
    r = ring(text)
    psi = build_psi(r)
    n = psi.modulus
    zeta = np.exp(2j * np.pi * np.arange(n) / n)
    for s in range(r.size):
        tot = zeta[psi.values[np.asarray(r.mul_row(s))] % n].sum()
        want = r.size if s == 0 else 0.0
        assert abs(tot - want) < 1e-9
