"""Shared catalogs and helpers.

Rings are cached per test session: building one is cheap but the suite leans
on the same handful of catalogs from many files.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from ringwalk.rings import Ring, build_ring

# Local rings with residue field F_2 (every ideal-parity theorem runs here).
LOCAL_F2_CATALOG = [
    "F2",
    "Z4",
    "Z8",
    "Z16",
    "F2[x]/(x^2)",
    "F2[x]/(x^3)",
    "F2[x]/(x^4)",
    "F2[x,y]/(x^2,y^2)",
    "Z4[x]/(x^2)",
    "Z4[x]/(x^2 + 2)",
]

# Factor pool for the product-ring catalog.
PRODUCT_FACTORS = [
    "F2",
    "Z4",
    "F2[x]/(x^2)",
    "GF(4)",
    "GF(8)",
    "GF(9)",
    "F3",
    "F5",
    "Z8",
    "F2[x,y]/(x^2,y^2)",
]

# Singles plus all unordered pairs: 65 rings, orders up to 256.
PRODUCT_CATALOG = PRODUCT_FACTORS + [
    f"{a} x {b}" for a, b in itertools.combinations_with_replacement(PRODUCT_FACTORS, 2)
]

# A mixed bag for structural invariants.
GENERAL_CATALOG = LOCAL_F2_CATALOG + [
    "F3",
    "F5",
    "GF(4)",
    "GF(8)",
    "GF(9)",
    "Z6",
    "Z12",
    "F3[x]/(x^2)",
    "Z4 x F3",
    "F2 x GF(4)",
    "Z4 x GF(4)",
    "F2 x F2 x F3",
]

# Chain rings for the exact classification: Z/2^k and F2[x]/x^k, k <= 6.
CHAIN_CATALOG = [f"Z{2 ** k}" for k in range(1, 7)] + [
    f"F2[x]/(x^{k})" if k > 1 else "F2[x]/(x)" for k in range(1, 7)
]


@lru_cache(maxsize=None)
def ring(text: str) -> Ring:
    return build_ring(text)


def divisor_subsets(r: Ring, max_size: int | None = None):
    """Yield tuples of nonzero principal ideals, sizes 1..max_size."""
    ideals = r.all_principal_ideals()
    limit = len(ideals) if max_size is None else min(max_size, len(ideals))
    for size in range(1, limit + 1):
        yield from itertools.combinations(ideals, size)
