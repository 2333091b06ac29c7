"""Polynomial arithmetic over prime fields F_p.

Polynomials are lists of ints in little-endian order (coeffs[i] is the
coefficient of x^i), always reduced mod p with no trailing zeros; the zero
polynomial is the empty list.  Used for canonical irreducible moduli of field
extensions and for squarefree/factor-shape tests on unitary-graph moduli.
"""

from __future__ import annotations


def trim(coeffs: list[int], p: int) -> list[int]:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(f: list[int]) -> int:
    """Degree, with deg 0 = -1 for the zero polynomial."""
    return len(f) - 1


def add(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return trim(out, p)


def scale(f: list[int], c: int, p: int) -> list[int]:
    return trim([c * a for a in f], p)


def mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, p)


def divmod_poly(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    """Euclidean division; g must be nonzero. Works over the field F_p."""
    assert g, "division by zero polynomial"
    inv_lead = pow(g[-1], p - 2, p) if p > 2 else g[-1]
    rem = list(f)
    q = [0] * max(0, len(f) - len(g) + 1)
    while len(rem) >= len(g) and trim(rem, p):
        rem = trim(rem, p)
        if len(rem) < len(g):
            break
        shift = len(rem) - len(g)
        c = (rem[-1] * inv_lead) % p
        q[shift] = c
        for i, b in enumerate(g):
            rem[shift + i] = (rem[shift + i] - c * b) % p
        rem = trim(rem, p)
    return trim(q, p), trim(rem, p)


def mod(f: list[int], g: list[int], p: int) -> list[int]:
    return divmod_poly(f, g, p)[1]


def gcd(f: list[int], g: list[int], p: int) -> list[int]:
    """Monic gcd."""
    a, b = trim(f, p), trim(g, p)
    while b:
        a, b = b, mod(a, b, p)
    if a:
        a = scale(a, pow(a[-1], p - 2, p) if p > 2 else 1, p)
    return a


def derivative(f: list[int], p: int) -> list[int]:
    return trim([i * c for i, c in enumerate(f)][1:], p)


def is_monic(f: list[int]) -> bool:
    return bool(f) and f[-1] == 1


def is_irreducible(f: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    d = degree(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    for deg_t in range(1, d // 2 + 1):
        for idx in range(p**deg_t):
            t, k = [], idx
            for _ in range(deg_t):
                t.append(k % p)
                k //= p
            t.append(1)
            if not mod(f, t, p):
                return False
    return True


def first_irreducible(p: int, k: int) -> list[int]:
    """Lexicographically least monic irreducible of degree k over F_p.

    Lower-degree coefficients count least, so the scan order is the base-p
    counter on (c_0, ..., c_{k-1}); deterministic for reproducible GF(p^k).
    """
    if k == 1:
        return [0, 1]
    for idx in range(p**k):
        c, m = [], idx
        for _ in range(k):
            c.append(m % p)
            m //= p
        f = c + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


def eval_poly(f: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc
