"""gcd-graphs: Cayley graphs on (R, +) whose connection set is a union of
ideal generator orbits.

A divisor set D is a set of distinct nonzero principal ideals.  Vertices a, b
are adjacent iff the principal ideal R(a - b) lies in D; the connection set
is S = {s : Rs in D}, i.e. the union of the unit orbits generating each ideal.
D = {R} gives the unitary Cayley graph.
"""

from __future__ import annotations

import csv
from typing import Optional, Sequence, Union

import numpy as np

from . import dsl, duality
from .dsl import DivisorExpr
from .errors import InputError, InternalCheckError, RingConstructionError
from .rings import Ideal, Ring


class DivisorSet:
    """Deduplicated, canonically ordered set of nonzero principal ideals."""

    def __init__(self, ring: Ring, ideals: Sequence[Ideal]):
        self.ring = ring
        seen: dict[bytes, Ideal] = {}
        for ideal in ideals:
            if ideal.size == 1:
                raise RingConstructionError("the zero ideal is not a valid divisor")
            if not ideal.is_principal:
                raise RingConstructionError("divisors must be principal ideals")
            seen.setdefault(ideal.key, ideal)
        self.ideals = sorted(seen.values(), key=lambda i: (i.size, i.generator))
        self.contains_unit_ideal = any(i.size == ring.size for i in self.ideals)
        self.contains_minimal_ideal: Optional[bool] = None
        if ring.is_local() and ring.residue_field_order() == 2:
            e = duality.minimal_element(ring)
            key = ring.principal_ideal(e).key
            self.contains_minimal_ideal = any(i.key == key for i in self.ideals)

    def generators(self) -> list[int]:
        return [i.generator for i in self.ideals]

    def __len__(self):
        return len(self.ideals)

    def __iter__(self):
        return iter(self.ideals)

    def describe(self) -> str:
        names = []
        for i in self.ideals:
            names.append("R" if i.size == self.ring.size else self.ring.element_name(i.generator))
        return ", ".join(names)

    def to_json(self) -> dict:
        return {
            "ideals": [
                {"generator": self.ring.element_name(i.generator), "size": i.size}
                for i in self.ideals
            ],
            "contains_unit_ideal": self.contains_unit_ideal,
            "contains_minimal_ideal": self.contains_minimal_ideal,
        }


DivisorSource = Union[str, DivisorExpr, Sequence[Union[Ideal, int, None]]]


def build_divisor_set(ring: Ring, source: DivisorSource) -> DivisorSet:
    """Build a DivisorSet from DSL text, a parsed DivisorExpr, or a list of
    ideals / element indices / None (the unit ideal)."""
    if isinstance(source, str):
        if ring.expr is None:
            raise InputError("this ring has no literal syntax")
        source = dsl.parse_divisors(source, ring.expr)
    ideals: list[Ideal] = []
    if isinstance(source, DivisorExpr):
        entries: Sequence = source.entries
    else:
        entries = source
    for entry in entries:
        if entry is None:
            ideals.append(ring.principal_ideal(ring.one))
        elif isinstance(entry, Ideal):
            ideals.append(entry)
        else:
            idx = entry if isinstance(entry, int) else ring.element_index(entry)
            if idx == 0:
                raise RingConstructionError("zero generator is not a valid divisor")
            ideals.append(ring.principal_ideal(idx))
    return DivisorSet(ring, ideals)


class GcdGraph:
    """Cayley graph of (R, +) with connection set S = union of generator orbits."""

    def __init__(self, ring: Ring, divisors: DivisorSet):
        self.ring = ring
        self.divisors = divisors
        mask = np.zeros(ring.size, dtype=bool)
        units = ring.unit_indices
        for ideal in divisors:
            orbit = np.asarray(ring.mul_row(ideal.generator))[units]
            mask[orbit] = True
        if mask[0]:
            raise InternalCheckError("connection set contains 0")
        if not np.array_equal(mask, mask[np.asarray(ring.vneg(np.arange(ring.size)))]):
            raise InternalCheckError("connection set is not symmetric")
        self.s_mask = mask
        self.s_indices = np.flatnonzero(mask)
        self.degree = len(self.s_indices)

    @property
    def size(self) -> int:
        return self.ring.size

    def adjacent(self, a: int, b: int) -> bool:
        return bool(self.s_mask[self.ring.sub(a, b)])

    def neighbors(self, a: int) -> np.ndarray:
        return np.asarray(self.ring.add_row(a))[self.s_indices]

    def edges(self):
        """Yield each undirected edge once as (a, b) with a < b."""
        for a in range(self.ring.size):
            nb = self.neighbors(a)
            for b in nb[nb > a]:
                yield (a, int(b))

    def to_json(self) -> dict:
        return {
            "ring": dsl.format_ring(self.ring.expr) if self.ring.expr is not None else None,
            "order": self.ring.size,
            "degree": self.degree,
            "divisors": self.divisors.to_json(),
        }


def build_graph(ring: Ring, divisors: DivisorSource) -> GcdGraph:
    d = divisors if isinstance(divisors, DivisorSet) else build_divisor_set(ring, divisors)
    return GcdGraph(ring, d)


def unitary_graph(ring: Ring) -> GcdGraph:
    return build_graph(ring, [None])


def is_gcd_generating_set(ring: Ring, s_indices) -> bool:
    """True iff the symmetric set S (0 excluded) is a union of unit orbits,
    i.e. uS = S for every unit u; exactly these S arise from divisor sets."""
    s = np.unique(np.asarray(s_indices, dtype=np.int64))
    if len(s) and s[0] == 0:
        raise InputError("S must not contain 0")
    mask = np.zeros(ring.size, dtype=bool)
    mask[s] = True
    if not np.array_equal(mask, mask[np.asarray(ring.vneg(np.arange(ring.size)))]):
        raise InputError("S must be symmetric")
    for u in ring.unit_indices:
        if not mask[np.asarray(ring.mul_row(int(u)))[s]].all():
            return False
    return True


def additive_closure(ring: Ring, generators) -> np.ndarray:
    """Mask of the additive subgroup generated by the given elements."""
    gens = np.unique(np.asarray(generators, dtype=np.int64))
    gens = np.unique(np.concatenate([gens, np.asarray(ring.vneg(gens))]))
    mask = np.zeros(ring.size, dtype=bool)
    mask[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = np.unique(np.asarray(ring.vadd(frontier[:, None], gens[None, :])).ravel())
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def connected_components(graph: GcdGraph) -> tuple[int, np.ndarray]:
    """(component count, label array); components are the cosets of <S>."""
    ring = graph.ring
    if graph.degree == 0:
        return ring.size, np.arange(ring.size, dtype=np.int64)
    subgroup = additive_closure(ring, graph.s_indices)
    members = np.flatnonzero(subgroup)
    labels = np.full(ring.size, -1, dtype=np.int64)
    count = 0
    for a in range(ring.size):
        if labels[a] < 0:
            coset = np.asarray(ring.add_row(a))[members]
            labels[coset] = count
            count += 1
    if count * len(members) != ring.size:
        raise InternalCheckError("component cosets do not partition the ring")
    return count, labels


def edges_csv(graph: GcdGraph, path: str) -> int:
    """Write the undirected edge list as CSV (a, b element indices); returns count."""
    n = 0
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a", "b"])
        for a, b in graph.edges():
            writer.writerow([a, b])
            n += 1
    return n
