"""Finite commutative rings as index-based structures.

Elements of a ring of order N are the indices 0..N-1 under a mixed-radix
encoding determined by the ring expression (coefficient vectors for
polynomial quotients, component tuples for products).  Index 0 is always the
additive zero.  Arithmetic is vectorized over numpy index arrays; full
operation tables are materialized at build time for rings up to
``table_limit`` elements and computed row-wise (with caching) above that.

Ideals, annihilators, socles, quotients and the local (idempotent)
decomposition are all computed exhaustively, which is the intended scale:
every supported workflow stays well under the default order cap of 2^16.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence, Union

import numpy as np

from . import dsl, fppoly
from .dsl import (
    ElementExpr,
    PolyElem,
    ProductExpr,
    PolyQuotientExpr,
    RingExpr,
    TruncatedMultivarExpr,
    TupleElem,
    ZnExpr,
)
from .errors import InputError, InternalCheckError, RingConstructionError, ResourceCapError

DEFAULT_ORDER_CAP = 1 << 16
DEFAULT_TABLE_LIMIT = 4096

# =========================================================================
# Structure blocks: vectorized index arithmetic
# =========================================================================


class ZnBlock:
    """Integers mod m; the index of an element is the element."""

    def __init__(self, m: int):
        self.size = m
        self.exponent = m
        self.one = 1 % m

    def vadd(self, a, b):
        return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.size

    def vneg(self, a):
        return (-np.asarray(a, dtype=np.int64)) % self.size

    def vmul(self, a, b):
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.size

    def to_poly(self, i: int) -> PolyElem:
        return PolyElem(() if i == 0 else (((), int(i)),))

    def var_index(self, name: str) -> int:
        raise InputError(f"no variable {name!r} in Z{self.size}")

    def radices(self) -> list[int]:
        return [self.size]


class PolyBlock:
    """base[var] / (f) for a monic f given as base-index digits, little-endian."""

    def __init__(self, base, var: str, f_digits: Sequence[int]):
        f_digits = [int(c) for c in f_digits]
        if len(f_digits) < 2 or f_digits[-1] != base.one:
            raise RingConstructionError("modulus must be monic of degree >= 1")
        self.base = base
        self.var = var
        self.deg = len(f_digits) - 1
        self.size = base.size**self.deg
        self.exponent = base.exponent
        self.one = base.one  # digit 0 = 1, higher digits 0
        # x^k mod f for k = deg .. 2*deg-2, as digit lists (scalar base indices)
        neg_f = [int(base.vneg(c)) for c in f_digits[: self.deg]]
        self._xpow = [neg_f]
        for _ in range(self.deg - 2):
            prev = self._xpow[-1]
            top = prev[-1]
            shifted = [0] + prev[:-1]
            if top:
                shifted = [
                    int(base.vadd(s, base.vmul(top, c))) for s, c in zip(shifted, neg_f)
                ]
            self._xpow.append(shifted)

    def _decompose(self, a) -> list:
        a = np.asarray(a, dtype=np.int64)
        digits = []
        for _ in range(self.deg):
            digits.append(a % self.base.size)
            a = a // self.base.size
        return digits

    def _recompose(self, digits) -> np.ndarray:
        acc = np.asarray(digits[-1], dtype=np.int64)
        for d in reversed(digits[:-1]):
            acc = acc * self.base.size + d
        return acc

    def vadd(self, a, b):
        da, db = self._decompose(a), self._decompose(b)
        return self._recompose([self.base.vadd(x, y) for x, y in zip(da, db)])

    def vneg(self, a):
        return self._recompose([self.base.vneg(x) for x in self._decompose(a)])

    def vmul(self, a, b):
        d = self.deg
        da, db = self._decompose(a), self._decompose(b)
        conv: list = [None] * (2 * d - 1)
        for i in range(d):
            for j in range(d):
                prod = self.base.vmul(da[i], db[j])
                k = i + j
                conv[k] = prod if conv[k] is None else self.base.vadd(conv[k], prod)
        for k in range(2 * d - 2, d - 1, -1):
            t = conv[k]
            xp = self._xpow[k - d]
            for i in range(d):
                if xp[i]:
                    conv[i] = self.base.vadd(conv[i], self.base.vmul(t, xp[i]))
        return self._recompose(conv[:d])

    def _reduce_digits(self, digits: list[int]) -> int:
        """Index of a polynomial given as arbitrary-length scalar digit list."""
        while len(digits) > self.deg:
            top = digits.pop()
            if top:
                k = len(digits)  # reducing x^k
                xp = self._xpow[k - self.deg]
                for i in range(self.deg):
                    if xp[i]:
                        digits[i] = int(self.base.vadd(digits[i], self.base.vmul(top, xp[i])))
        digits = digits + [0] * (self.deg - len(digits))
        return int(self._recompose(digits))

    def to_poly(self, i: int) -> PolyElem:
        terms: dict[tuple, int] = {}
        for e, digit in enumerate(self._decompose(int(i))):
            digit = int(digit)
            if not digit:
                continue
            for monomial, coeff in self.base.to_poly(digit).monomials:
                key = tuple(sorted(monomial + (((self.var, e),) if e else ())))
                terms[key] = terms.get(key, 0) + coeff
        return PolyElem(tuple((k, c) for k, c in sorted(terms.items()) if c))

    def var_index(self, name: str) -> int:
        if name == self.var:
            return self._reduce_digits([0, self.base.one])
        return self.base.var_index(name)  # constant digit 0

    def radices(self) -> list[int]:
        return self.base.radices() * self.deg


class ProductBlock:
    """Direct product; component 0 occupies the least significant radix."""

    def __init__(self, factors: list):
        self.factors = factors
        self.size = math.prod(f.size for f in factors)
        self.exponent = math.lcm(*(f.exponent for f in factors))
        self.strides = []
        s = 1
        for f in factors:
            self.strides.append(s)
            s *= f.size
        self.one = self.compose([f.one for f in factors])

    def decompose(self, a) -> list:
        a = np.asarray(a, dtype=np.int64)
        comps = []
        for f in self.factors:
            comps.append(a % f.size)
            a = a // f.size
        return comps

    def compose(self, comps) -> np.ndarray:
        acc = np.asarray(comps[0], dtype=np.int64) * 0
        for c, stride in zip(comps, self.strides):
            acc = acc + np.asarray(c, dtype=np.int64) * stride
        return acc

    def vadd(self, a, b):
        ca, cb = self.decompose(a), self.decompose(b)
        return self.compose([f.vadd(x, y) for f, x, y in zip(self.factors, ca, cb)])

    def vneg(self, a):
        return self.compose([f.vneg(x) for f, x in zip(self.factors, self.decompose(a))])

    def vmul(self, a, b):
        ca, cb = self.decompose(a), self.decompose(b)
        return self.compose([f.vmul(x, y) for f, x, y in zip(self.factors, ca, cb)])

    def to_poly(self, i: int) -> TupleElem:
        return TupleElem(tuple(f.to_poly(int(c)) for f, c in zip(self.factors, self.decompose(i))))

    def var_index(self, name: str) -> int:
        raise InputError("product elements are tuples; no shared variables")

    def radices(self) -> list[int]:
        out: list[int] = []
        for f in self.factors:
            out.extend(f.radices())
        return out


class TableBlock:
    """A ring defined directly by its operation tables (quotients, subrings)."""

    def __init__(self, add_t, mul_t, neg_t, one: int, exponent: Optional[int] = None):
        self.add_t = add_t
        self.mul_t = mul_t
        self.neg_t = neg_t
        self.size = len(add_t)
        self.one = one
        self.exponent = exponent  # may be None; Ring computes on demand

    def vadd(self, a, b):
        return self.add_t[a, b]

    def vneg(self, a):
        return self.neg_t[a]

    def vmul(self, a, b):
        return self.mul_t[a, b]

    def to_poly(self, i: int):
        raise InputError("table-backed rings have no literal syntax")

    def var_index(self, name: str) -> int:
        raise InputError("table-backed rings have no variables")

    def radices(self):
        return None


def _realize(expr: RingExpr):
    if isinstance(expr, ZnExpr):
        return ZnBlock(expr.modulus)
    if isinstance(expr, PolyQuotientExpr):
        return PolyBlock(ZnBlock(expr.base_modulus), expr.var, list(expr.modulus_coeffs))
    if isinstance(expr, TruncatedMultivarExpr):
        base = ZnBlock(expr.p)
        if expr.extension_degree > 1:
            base = PolyBlock(base, dsl._GF_VAR, fppoly.first_irreducible(expr.p, expr.extension_degree))
        block = base
        for var, e in expr.vars:
            block = PolyBlock(block, var, [0] * e + [block.one])
        return block
    if isinstance(expr, ProductExpr):
        return ProductBlock([_realize(f) for f in expr.factors])
    raise RingConstructionError(f"not a ring expression: {expr!r}")


# =========================================================================
# Ideals
# =========================================================================


class Ideal:
    """An ideal as an explicit element set; canonical generator if principal."""

    def __init__(self, ring: "Ring", mask: np.ndarray):
        self.ring = ring
        self.mask = mask
        self.elements = np.flatnonzero(mask)
        self.size = len(self.elements)
        self.key = np.packbits(mask).tobytes()
        self._gen: Optional[int] = None
        self._gen_known = False

    @property
    def generator(self) -> Optional[int]:
        """Least g with Rg equal to this ideal, or None when not principal."""
        if not self._gen_known:
            self._gen_known = True
            for g in self.elements:
                row = self.ring.mul_row(int(g))
                if len(np.unique(row)) == self.size:
                    self._gen = int(g)
                    break
        return self._gen

    def _set_generator(self, g: int):
        self._gen = g
        self._gen_known = True

    @property
    def is_principal(self) -> bool:
        return self.generator is not None

    def contains(self, a: int) -> bool:
        return bool(self.mask[a])

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring is other.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        gen = self.generator
        name = self.ring.element_name(gen) if gen is not None else "non-principal"
        return f"Ideal(size={self.size}, gen={name})"

    def to_json(self) -> dict:
        gen = self.generator
        return {
            "size": self.size,
            "principal": gen is not None,
            "generator": self.ring.element_name(gen) if gen is not None else None,
            "elements": [int(x) for x in self.elements],
        }


# =========================================================================
# Ring
# =========================================================================


class Ring:
    def __init__(
        self,
        structure,
        expr: Optional[RingExpr] = None,
        names: Optional[list[str]] = None,
        table_limit: int = DEFAULT_TABLE_LIMIT,
    ):
        self.structure = structure
        self.expr = expr
        self.size: int = structure.size
        self.zero = 0
        self.one = int(structure.one)
        self._names = names
        self._ar = np.arange(self.size, dtype=np.int64)
        self._exponent: Optional[int] = getattr(structure, "exponent", None)
        self.add_t = self.mul_t = self.neg_t = None
        if isinstance(structure, TableBlock):
            self.add_t, self.mul_t, self.neg_t = structure.add_t, structure.mul_t, structure.neg_t
        elif self.size <= table_limit:
            grid_a = self._ar[:, None]
            grid_b = self._ar[None, :]
            self.add_t = np.asarray(structure.vadd(grid_a, grid_b), dtype=np.int32)
            self.mul_t = np.asarray(structure.vmul(grid_a, grid_b), dtype=np.int32)
            self.neg_t = np.asarray(structure.vneg(self._ar), dtype=np.int32)
        self._row_cache: dict[tuple[str, int], np.ndarray] = {}
        self._units: Optional[np.ndarray] = None
        self._nilpotents: Optional[np.ndarray] = None
        self._qstats: dict[bytes, tuple[int, int]] = {}
        self._localdec: Optional[LocalFactorization] = None

    # -- scalar and vector arithmetic on indices --------------------------

    def add(self, a: int, b: int) -> int:
        if self.add_t is not None:
            return int(self.add_t[a, b])
        return int(self.structure.vadd(a, b))

    def mul(self, a: int, b: int) -> int:
        if self.mul_t is not None:
            return int(self.mul_t[a, b])
        return int(self.structure.vmul(a, b))

    def neg(self, a: int) -> int:
        if self.neg_t is not None:
            return int(self.neg_t[a])
        return int(self.structure.vneg(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def vadd(self, a, b):
        if self.add_t is not None:
            return self.add_t[a, b]
        return self.structure.vadd(a, b)

    def vmul(self, a, b):
        if self.mul_t is not None:
            return self.mul_t[a, b]
        return self.structure.vmul(a, b)

    def vneg(self, a):
        if self.neg_t is not None:
            return self.neg_t[a]
        return self.structure.vneg(a)

    def add_row(self, a: int) -> np.ndarray:
        """a + x for every element x, as an index array."""
        if self.add_t is not None:
            return self.add_t[a]
        key = ("add", a)
        if key not in self._row_cache:
            self._row_cache[key] = np.asarray(self.structure.vadd(a, self._ar))
        return self._row_cache[key]

    def mul_row(self, a: int) -> np.ndarray:
        """a * x for every element x, as an index array."""
        if self.mul_t is not None:
            return self.mul_t[a]
        key = ("mul", a)
        if key not in self._row_cache:
            self._row_cache[key] = np.asarray(self.structure.vmul(a, self._ar))
        return self._row_cache[key]

    def pow(self, a: int, e: int) -> int:
        acc, base = self.one, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def scalar(self, k: int) -> int:
        """The image of the integer k, i.e. k * 1."""
        k %= self.exponent
        acc, addend = 0, self.one
        while k:
            if k & 1:
                acc = self.add(acc, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return acc

    # -- global structure --------------------------------------------------

    @property
    def exponent(self) -> int:
        """Additive exponent n: the least n >= 1 with nR = 0."""
        if self._exponent is None:
            n = 1
            for x in range(1, self.size):
                for d in sorted(_divisors(self.size)):
                    if self._additive_mult(x, d) == 0:
                        n = math.lcm(n, d)
                        break
            self._exponent = n
        return self._exponent

    def _additive_mult(self, x: int, k: int) -> int:
        acc, addend = 0, x
        while k:
            if k & 1:
                acc = self.add(acc, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return acc

    @property
    def units_mask(self) -> np.ndarray:
        if self._units is None:
            if self.mul_t is not None:
                self._units = (self.mul_t == self.one).any(axis=1)
            else:
                self._units = np.fromiter(
                    ((self.mul_row(a) == self.one).any() for a in range(self.size)),
                    dtype=bool,
                    count=self.size,
                )
        return self._units

    @property
    def unit_indices(self) -> np.ndarray:
        return np.flatnonzero(self.units_mask)

    @property
    def unit_count(self) -> int:
        return int(self.units_mask.sum())

    def is_unit(self, a: int) -> bool:
        return bool(self.units_mask[a])

    @property
    def nilpotent_mask(self) -> np.ndarray:
        if self._nilpotents is None:
            x = self._ar.copy()
            for _ in range(max(1, self.size.bit_length())):
                x = np.asarray(self.vmul(x, x))
            self._nilpotents = x == 0
        return self._nilpotents

    def idempotent_indices(self) -> np.ndarray:
        sq = np.asarray(self.vmul(self._ar, self._ar))
        return np.flatnonzero(sq == self._ar)

    def is_local(self) -> bool:
        return len(self.idempotent_indices()) == 2

    def is_field(self) -> bool:
        return self.size >= 2 and self.unit_count == self.size - 1

    def jacobson_radical(self) -> Ideal:
        """For finite commutative rings the radical is the set of nilpotents."""
        return Ideal(self, self.nilpotent_mask.copy())

    # -- ideals -------------------------------------------------------------

    def principal_ideal(self, a: int) -> Ideal:
        row = self.mul_row(a)
        mask = np.zeros(self.size, dtype=bool)
        mask[row] = True
        ideal = Ideal(self, mask)
        orbit = row[self.unit_indices]
        ideal._set_generator(int(orbit.min()))
        return ideal

    def annihilator(self, a: int) -> Ideal:
        return Ideal(self, np.asarray(self.mul_row(a)) == 0)

    def annihilator_of_set(self, elements) -> Ideal:
        mask = np.ones(self.size, dtype=bool)
        for m in np.asarray(elements).ravel():
            mask &= np.asarray(self.mul_row(int(m))) == 0
        return Ideal(self, mask)

    def annihilator_of_ideal(self, ideal: Ideal) -> Ideal:
        if ideal.is_principal:
            return self.annihilator(ideal.generator)
        return self.annihilator_of_set(ideal.elements)

    def all_principal_ideals(self, include_zero: bool = False) -> list[Ideal]:
        """Distinct principal ideals, sorted by (size, canonical generator)."""
        seen: dict[bytes, Ideal] = {}
        todo = np.ones(self.size, dtype=bool)
        for a in range(self.size):
            if not todo[a]:
                continue
            ideal = self.principal_ideal(a)
            orbit = self.mul_row(a)[self.unit_indices]
            todo[orbit] = False
            if ideal.size == 1 and not include_zero:
                continue
            seen.setdefault(ideal.key, ideal)
        return sorted(seen.values(), key=lambda i: (i.size, i.generator))

    # -- socle ladder -------------------------------------------------------

    def socle_mask(self, k: int = 1) -> np.ndarray:
        """Elements of soc^k; k >= 2 requires a local ring."""
        if k >= 2 and not self.is_local():
            raise InputError("higher socles are defined here only for local rings")
        rad = np.flatnonzero(self.nilpotent_mask)
        cur = np.zeros(self.size, dtype=bool)
        cur[0] = True
        for _ in range(k):
            nxt = np.ones(self.size, dtype=bool)
            for x in rad:
                if x:
                    nxt &= cur[np.asarray(self.mul_row(int(x)))]
            cur = nxt
        return cur

    def socle2_ideals(self) -> list[Ideal]:
        """Distinct nonzero principal ideals Ra with a in soc^2(R).

        Requires a local ring with residue field of order 2.
        """
        if not self.is_local() or self.residue_field_order() != 2:
            raise InputError("soc^2 ideal census requires a local ring with residue field F_2")
        soc2 = np.flatnonzero(self.socle_mask(2))
        seen: dict[bytes, Ideal] = {}
        for a in soc2:
            if a == 0:
                continue
            ideal = self.principal_ideal(int(a))
            seen.setdefault(ideal.key, ideal)
        return sorted(seen.values(), key=lambda i: (i.size, i.generator))

    def residue_field_order(self) -> int:
        if not self.is_local():
            raise InputError("residue field order requires a local ring")
        return self.size // int(self.nilpotent_mask.sum())

    # -- quotients ----------------------------------------------------------

    def quotient(self, ideal: Ideal) -> "QuotientRing":
        return QuotientRing(self, ideal)

    def phi_mu_of_quotient(self, ideal: Ideal) -> tuple[int, int]:
        """(unit count, Moebius value) of R/ideal, cached per ideal."""
        stats = self._qstats.get(ideal.key)
        if stats is None:
            q = self.quotient(ideal)
            stats = (euler_phi(q), moebius(q))
            self._qstats[ideal.key] = stats
        return stats

    # -- local decomposition --------------------------------------------------

    def local_decomposition(self) -> "LocalFactorization":
        if self._localdec is None:
            self._localdec = LocalFactorization(self)
        return self._localdec

    # -- names and literals ---------------------------------------------------

    @property
    def names(self) -> list[str]:
        if self._names is None:
            self._names = [
                dsl.format_element(self.structure.to_poly(i), self.expr)
                for i in range(self.size)
            ]
        return self._names

    def element_name(self, i: int) -> str:
        return self.names[i]

    def element_index(self, elem: Union[str, ElementExpr]) -> int:
        if isinstance(elem, str):
            if self.expr is None:
                raise InputError("this ring has no literal syntax")
            elem = dsl.parse_element(elem, self.expr)
        return self._eval_element(elem)

    def _eval_element(self, elem: ElementExpr) -> int:
        if isinstance(elem, TupleElem):
            if not isinstance(self.structure, ProductBlock):
                raise InputError("tuple literal for a non-product ring")
            if len(elem.components) != len(self.structure.factors):
                raise InputError("tuple length does not match the number of factors")
            comps = [
                _eval_on_block(f, c) for f, c in zip(self.structure.factors, elem.components)
            ]
            return int(self.structure.compose(comps))
        return _eval_on_block(self.structure, elem)

    def to_json(self) -> dict:
        data = {
            "ring": dsl.format_ring(self.expr) if self.expr is not None else None,
            "order": self.size,
            "exponent": self.exponent,
            "unit_count": self.unit_count,
            "is_local": self.is_local(),
        }
        radices = self.structure.radices()
        if radices is not None:
            data["radices"] = radices
        return data

    def __repr__(self):
        label = dsl.format_ring(self.expr) if self.expr is not None else f"order {self.size}"
        return f"Ring({label})"


def _eval_on_block(block, elem: PolyElem) -> int:
    if not isinstance(elem, PolyElem):
        raise InputError("expected a polynomial literal here")
    acc = 0
    for monomial, coeff in elem.monomials:
        term = _block_scalar(block, coeff)
        for var, e in monomial:
            g = block.var_index(var)
            term = int(block.vmul(term, _block_pow(block, g, e)))
        acc = int(block.vadd(acc, term))
    return acc


def _block_scalar(block, k: int) -> int:
    k %= block.exponent
    acc, addend = 0, block.one
    while k:
        if k & 1:
            acc = int(block.vadd(acc, addend))
        addend = int(block.vadd(addend, addend))
        k >>= 1
    return acc


def _block_pow(block, a: int, e: int) -> int:
    acc, base = block.one, a
    while e:
        if e & 1:
            acc = int(block.vmul(acc, base))
        base = int(block.vmul(base, base))
        e >>= 1
    return acc


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


class QuotientRing(Ring):
    """R/I with coset representatives chosen as least parent indices."""

    def __init__(self, parent: Ring, ideal: Ideal):
        self.parent = parent
        self.ideal = ideal
        coset_of = np.full(parent.size, -1, dtype=np.int64)
        reps = []
        for a in range(parent.size):
            if coset_of[a] < 0:
                coset = np.asarray(parent.add_row(a))[ideal.elements]
                coset_of[coset] = len(reps)
                reps.append(a)
        reps_arr = np.asarray(reps, dtype=np.int64)
        q = len(reps)
        if q * ideal.size != parent.size:
            raise InternalCheckError("coset partition size mismatch")
        add_t = coset_of[np.asarray(parent.vadd(reps_arr[:, None], reps_arr[None, :]))]
        mul_t = coset_of[np.asarray(parent.vmul(reps_arr[:, None], reps_arr[None, :]))]
        neg_t = coset_of[np.asarray(parent.vneg(reps_arr))]
        block = TableBlock(
            add_t.astype(np.int32), mul_t.astype(np.int32), neg_t.astype(np.int32),
            one=int(coset_of[parent.one]),
        )
        self.reps = reps_arr
        self.coset_of = coset_of
        names = None
        if parent._names is not None or parent.expr is not None:
            names = [parent.element_name(int(r)) for r in reps_arr]
        super().__init__(block, expr=None, names=names)

    def project(self, a: int) -> int:
        return int(self.coset_of[a])

    def lift(self, q: int) -> int:
        return int(self.reps[q])


def euler_phi(ring: Ring) -> int:
    """Number of units; 1 for the trivial ring."""
    return ring.unit_count


def moebius(ring: Ring) -> int:
    """0 when a nonzero nilpotent exists, else (-1)^(number of local factors)."""
    if ring.size > 1 and bool(ring.nilpotent_mask[1:].any()):
        return 0
    c = len(ring.idempotent_indices())
    k = c.bit_length() - 1
    if 1 << k != c:
        raise InternalCheckError("idempotent count is not a power of two")
    return -1 if k & 1 else 1


# =========================================================================
# Local decomposition
# =========================================================================


class LocalFactor:
    def __init__(self, parent: Ring, idempotent: int):
        self.idempotent = idempotent
        row = np.asarray(parent.mul_row(idempotent))
        self.elements = np.unique(row)  # sorted parent indices of e*R
        local_of = np.full(parent.size, -1, dtype=np.int64)
        local_of[self.elements] = np.arange(len(self.elements))
        e = self.elements
        add_t = local_of[np.asarray(parent.vadd(e[:, None], e[None, :]))]
        mul_t = local_of[np.asarray(parent.vmul(e[:, None], e[None, :]))]
        neg_t = local_of[np.asarray(parent.vneg(e))]
        if (add_t < 0).any() or (mul_t < 0).any():
            raise InternalCheckError("idempotent component not closed under operations")
        block = TableBlock(
            add_t.astype(np.int32), mul_t.astype(np.int32), neg_t.astype(np.int32),
            one=int(local_of[idempotent]),
        )
        has_names = parent._names is not None or parent.expr is not None
        names = [parent.element_name(int(x)) for x in e] if has_names else None
        self.ring = Ring(block, names=names)
        if not self.ring.is_local():
            raise InternalCheckError("primitive idempotent component is not local")
        self.residue_field_order = self.ring.residue_field_order()
        self.residue_is_f2 = self.residue_field_order == 2
        self.minimal_element_parent: Optional[int] = None
        if self.residue_is_f2:
            soc1 = np.flatnonzero(self.ring.socle_mask(1))
            soc1 = soc1[soc1 != 0]
            if len(soc1) != 1:
                raise InternalCheckError("local factor socle is not one-dimensional")
            self.minimal_element_parent = int(self.elements[int(soc1[0])])

    def to_parent(self, local_index: int) -> int:
        return int(self.elements[local_index])


class LocalFactorization:
    """Decomposition R = e_1 R x ... x e_d R along primitive idempotents.

    Factors are ordered by ascending idempotent index; this fixes component
    order everywhere (targets, unitary classification reasons, JSON).
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        idems = [int(x) for x in ring.idempotent_indices()]
        atoms = []
        for e in idems:
            if e == 0:
                continue
            if all(ring.mul(f, e) in (0, e) for f in idems):
                atoms.append(e)
        atoms.sort()
        for i, e in enumerate(atoms):
            for f in atoms[i + 1 :]:
                if ring.mul(e, f) != 0:
                    raise InternalCheckError("primitive idempotents not orthogonal")
        total = 0
        for e in atoms:
            total = ring.add(total, e)
        if total != ring.one:
            raise InternalCheckError("primitive idempotents do not sum to 1")
        self.factors = [LocalFactor(ring, e) for e in atoms]
        if math.prod(f.ring.size for f in self.factors) != ring.size:
            raise InternalCheckError("local factor orders do not multiply to |R|")

    def __len__(self):
        return len(self.factors)

    def to_json(self) -> dict:
        return {
            "count": len(self.factors),
            "factors": [
                {
                    "order": f.ring.size,
                    "residue_field_order": f.residue_field_order,
                    "idempotent": self.ring.element_name(f.idempotent),
                    "minimal_element": (
                        self.ring.element_name(f.minimal_element_parent)
                        if f.minimal_element_parent is not None
                        else None
                    ),
                }
                for f in self.factors
            ],
        }


# =========================================================================
# Builder
# =========================================================================


def build_ring(
    source: Union[str, RingExpr],
    order_cap: int = DEFAULT_ORDER_CAP,
    table_limit: int = DEFAULT_TABLE_LIMIT,
) -> Ring:
    """Build a Ring from DSL text or a parsed expression."""
    expr = dsl.parse_ring(source) if isinstance(source, str) else source
    block = _realize(expr)
    if block.size > order_cap:
        raise ResourceCapError(
            f"ring order {block.size} exceeds the cap {order_cap}"
        )
    return Ring(block, expr=expr, table_limit=table_limit)
