"""Textual DSL for finite commutative rings, elements, and divisor lists.

Ring grammar (whitespace-insensitive):

    ring    := atom (("x" | "*") atom)*
    atom    := "Z" int
             | "F" int | "GF(" int ")"
             | field "[" var ("," var)* "]" "/(" poly ("," poly)* ")"
             | "Z" int "[" var "]" "/(" poly ")"
    field   := "F" int | "GF(" int ")"
    poly    := term (("+" | "-") term)*
    term    := int | [int "*"] var ["^" int] ("*" var ["^" int])*

"F q" / "GF(q)" require q a prime power.  Over a field base, relation lists
must be pure powers x_i^(e_i), one per declared variable (truncated
polynomial rings, with an optional field extension as coefficients); a single
variable with a general monic modulus is supported over "Z n" and prime
fields.  Integer coefficients are reduced modulo the base characteristic at
parse time.

Element literals are polynomials in the ring's variables ("x*y + x + 1"),
plain integers for Z n, and component tuples "(a, b)" for products.  Divisor
lists are comma separated entries, each "R" (the unit ideal) or an element
literal; a literal zero generator is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto
from typing import Optional, Union

from . import fppoly
from .errors import DslSyntaxError, RingConstructionError

# =========================================================================
# AST
# =========================================================================


@dataclass(frozen=True)
class ZnExpr:
    """The ring of integers modulo m, m >= 2."""

    modulus: int


@dataclass(frozen=True)
class PolyQuotientExpr:
    """Z/m[var] modulo a monic polynomial (coefficients little-endian, mod m)."""

    base_modulus: int
    var: str
    modulus_coeffs: tuple[int, ...]


@dataclass(frozen=True)
class TruncatedMultivarExpr:
    """F_q[x_1..x_k] / (x_1^e_1, ..., x_k^e_k) with q = p^extension_degree."""

    p: int
    extension_degree: int
    vars: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class ProductExpr:
    """Direct product of two or more atoms (never nested)."""

    factors: tuple["RingExpr", ...]


RingExpr = Union[ZnExpr, PolyQuotientExpr, TruncatedMultivarExpr, ProductExpr]


@dataclass(frozen=True)
class PolyElem:
    """Normalized polynomial literal: ((monomial, coeff), ...).

    A monomial is a tuple of (var, exponent) pairs sorted by variable name;
    coefficients are reduced mod the ring characteristic and nonzero.  The
    zero element has no monomials.
    """

    monomials: tuple[tuple[tuple[tuple[str, int], ...], int], ...]

    def is_zero(self) -> bool:
        return not self.monomials


@dataclass(frozen=True)
class TupleElem:
    """Component-wise element of a product ring."""

    components: tuple[PolyElem, ...]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)


ElementExpr = Union[PolyElem, TupleElem]


@dataclass(frozen=True)
class DivisorExpr:
    """Parsed divisor list; None marks the unit ideal R."""

    entries: tuple[Optional[ElementExpr], ...]


# =========================================================================
# Lexer
# =========================================================================


class TokenType(Enum):
    INT = auto()
    IDENT = auto()
    LBRACKET = auto()
    RBRACKET = auto()
    LPAREN = auto()
    RPAREN = auto()
    SLASH = auto()
    COMMA = auto()
    PLUS = auto()
    MINUS = auto()
    STAR = auto()
    CARET = auto()
    EOF = auto()


_SYMBOLS = {
    "[": TokenType.LBRACKET,
    "]": TokenType.RBRACKET,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    "/": TokenType.SLASH,
    ",": TokenType.COMMA,
    "+": TokenType.PLUS,
    "-": TokenType.MINUS,
    "*": TokenType.STAR,
    "^": TokenType.CARET,
}


@dataclass
class Token:
    type: TokenType
    text: str
    pos: int

    @property
    def value(self) -> int:
        return int(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in _SYMBOLS:
            tokens.append(Token(_SYMBOLS[c], c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token(TokenType.INT, text[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token(TokenType.IDENT, text[i:j], i))
            i = j
            continue
        raise DslSyntaxError(f"unexpected character {c!r}", text, i)
    tokens.append(Token(TokenType.EOF, "", n))
    return tokens


class _TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.type is not TokenType.EOF:
            self.i += 1
        return tok

    def expect(self, ttype: TokenType, what: str = "") -> Token:
        tok = self.peek()
        if tok.type is not ttype:
            want = what or ttype.name.lower()
            raise DslSyntaxError(
                f"expected {want}, found {tok.text or 'end of input'!r}", self.text, tok.pos
            )
        return self.advance()

    def error(self, message: str) -> DslSyntaxError:
        return DslSyntaxError(message, self.text, self.peek().pos)


# =========================================================================
# Number theory helpers
# =========================================================================


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """Return (p, k) with q = p^k, or None if q is not a prime power."""
    if q < 2:
        return None
    p = 2
    while p * p <= q:
        if q % p == 0:
            k, m = 0, q
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
        p += 1
    return (q, 1)


# =========================================================================
# Ring parser
# =========================================================================

_GF_VAR = "t"  # generator name for sugar fields GF(p^k), k >= 2


def parse_ring(text: str) -> RingExpr:
    """Parse a ring expression; raises DslSyntaxError / RingConstructionError."""
    ts = _TokenStream(text)
    factors = [_parse_atom(ts)]
    while True:
        tok = ts.peek()
        if tok.type is TokenType.STAR or (tok.type is TokenType.IDENT and tok.text == "x"):
            ts.advance()
            factors.append(_parse_atom(ts))
        else:
            break
    if ts.peek().type is not TokenType.EOF:
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    if len(factors) == 1:
        return factors[0]
    return ProductExpr(tuple(factors))


def _split_head_int(ts: _TokenStream, ident: str, pos: int) -> int:
    digits = ident[1:]
    if not digits.isdigit():
        raise DslSyntaxError(f"expected an integer after {ident[0]!r}", ts.text, pos + 1)
    return int(digits)


def _parse_atom(ts: _TokenStream) -> RingExpr:
    tok = ts.expect(TokenType.IDENT, "a ring atom (Z.., F.., GF(..))")
    name = tok.text
    if name == "GF":
        ts.expect(TokenType.LPAREN)
        q = ts.expect(TokenType.INT).value
        ts.expect(TokenType.RPAREN)
        return _field_atom(ts, q, tok.pos)
    if name[0] == "Z" and len(name) > 1:
        m = _split_head_int(ts, name, tok.pos)
        if m < 2:
            raise RingConstructionError(f"Z{m}: modulus must be >= 2")
        if ts.peek().type is TokenType.LBRACKET:
            return _parse_zn_quotient(ts, m)
        return ZnExpr(m)
    if name[0] == "F" and len(name) > 1:
        q = _split_head_int(ts, name, tok.pos)
        return _field_atom(ts, q, tok.pos)
    raise DslSyntaxError(f"unknown ring atom {name!r}", ts.text, tok.pos)


def _field_atom(ts: _TokenStream, q: int, pos: int) -> RingExpr:
    pk = prime_power(q)
    if pk is None:
        raise RingConstructionError(f"field order {q} is not a prime power")
    p, k = pk
    if ts.peek().type is TokenType.LBRACKET:
        return _parse_field_quotient(ts, p, k)
    if k == 1:
        return ZnExpr(p)
    return PolyQuotientExpr(p, _GF_VAR, tuple(fppoly.first_irreducible(p, k)))


def _parse_vars(ts: _TokenStream) -> list[str]:
    ts.expect(TokenType.LBRACKET)
    names = []
    while True:
        tok = ts.expect(TokenType.IDENT, "a variable name")
        if not tok.text[0].islower():
            raise DslSyntaxError(f"variable names are lowercase: {tok.text!r}", ts.text, tok.pos)
        if tok.text in names:
            raise DslSyntaxError(f"duplicate variable {tok.text!r}", ts.text, tok.pos)
        names.append(tok.text)
        if ts.peek().type is TokenType.COMMA:
            ts.advance()
            continue
        break
    ts.expect(TokenType.RBRACKET)
    return names


def _parse_relations(ts: _TokenStream, char: int, vars_allowed: list[str]) -> list[PolyElem]:
    ts.expect(TokenType.SLASH)
    ts.expect(TokenType.LPAREN)
    polys = []
    while True:
        polys.append(_parse_poly(ts, char, set(vars_allowed)))
        if ts.peek().type is TokenType.COMMA:
            ts.advance()
            continue
        break
    ts.expect(TokenType.RPAREN)
    return polys


def _pure_power(poly: PolyElem) -> Optional[tuple[str, int]]:
    """(var, e) when poly is exactly 1 * var^e, else None."""
    if len(poly.monomials) != 1:
        return None
    monomial, coeff = poly.monomials[0]
    if coeff != 1 or len(monomial) != 1:
        return None
    return monomial[0]


def _parse_zn_quotient(ts: _TokenStream, m: int) -> PolyQuotientExpr:
    names = _parse_vars(ts)
    if len(names) != 1:
        raise RingConstructionError("quotients of Z n allow a single variable")
    polys = _parse_relations(ts, m, names)
    if len(polys) != 1:
        raise RingConstructionError("quotients of Z n allow a single modulus polynomial")
    coeffs = _univariate_coeffs(polys[0], names[0], m)
    return PolyQuotientExpr(m, names[0], coeffs)


def _parse_field_quotient(ts: _TokenStream, p: int, k: int) -> RingExpr:
    names = _parse_vars(ts)
    polys = _parse_relations(ts, p, names)
    powers = [_pure_power(f) for f in polys]
    if all(pw is not None for pw in powers):
        seen = {}
        for var, e in powers:  # type: ignore[misc]
            if var in seen:
                raise RingConstructionError(f"repeated relation for variable {var!r}")
            seen[var] = e
        if set(seen) != set(names):
            missing = sorted(set(names) - set(seen))
            raise RingConstructionError(f"missing nilpotency relation for {missing}")
        return TruncatedMultivarExpr(p, k, tuple((v, seen[v]) for v in names))
    if k > 1:
        raise RingConstructionError(
            "over an extension field only pure power relations x^e are supported"
        )
    if len(names) != 1 or len(polys) != 1:
        raise RingConstructionError("multivariate quotients require pure power relations")
    coeffs = _univariate_coeffs(polys[0], names[0], p)
    return PolyQuotientExpr(p, names[0], coeffs)


def _univariate_coeffs(poly: PolyElem, var: str, char: int) -> tuple[int, ...]:
    coeffs: dict[int, int] = {}
    for monomial, coeff in poly.monomials:
        if len(monomial) > 1 or (monomial and monomial[0][0] != var):
            raise RingConstructionError(f"modulus must be univariate in {var!r}")
        e = monomial[0][1] if monomial else 0
        coeffs[e] = coeff
    deg = max(coeffs) if coeffs else -1
    if deg < 1:
        raise RingConstructionError("modulus polynomial must have degree >= 1")
    out = [coeffs.get(i, 0) % char for i in range(deg + 1)]
    if out[-1] != 1:
        raise RingConstructionError("modulus polynomial must be monic")
    return tuple(out)


# =========================================================================
# Polynomial / element parser
# =========================================================================


def _parse_poly(ts: _TokenStream, char: int, vars_allowed: set[str]) -> PolyElem:
    terms: dict[tuple[tuple[str, int], ...], int] = {}
    sign = 1
    if ts.peek().type is TokenType.MINUS:
        ts.advance()
        sign = -1
    while True:
        monomial, coeff = _parse_term(ts, vars_allowed)
        key = tuple(sorted(monomial.items()))
        terms[key] = terms.get(key, 0) + sign * coeff
        tok = ts.peek()
        if tok.type is TokenType.PLUS:
            sign = 1
            ts.advance()
        elif tok.type is TokenType.MINUS:
            sign = -1
            ts.advance()
        else:
            break
    normalized = []
    for key in sorted(terms):
        c = terms[key] % char
        if c:
            normalized.append((key, c))
    return PolyElem(tuple(normalized))


def _parse_term(ts: _TokenStream, vars_allowed: set[str]) -> tuple[dict[str, int], int]:
    coeff = 1
    monomial: dict[str, int] = {}
    saw_factor = False
    while True:
        tok = ts.peek()
        if tok.type is TokenType.INT:
            ts.advance()
            coeff *= tok.value
            saw_factor = True
        elif tok.type is TokenType.IDENT:
            if tok.text not in vars_allowed:
                raise DslSyntaxError(f"unknown variable {tok.text!r}", ts.text, tok.pos)
            ts.advance()
            e = 1
            if ts.peek().type is TokenType.CARET:
                ts.advance()
                e = ts.expect(TokenType.INT, "an exponent").value
            monomial[tok.text] = monomial.get(tok.text, 0) + e
            saw_factor = True
        else:
            if not saw_factor:
                raise ts.error("expected a term")
            break
        if ts.peek().type is TokenType.STAR:
            ts.advance()
            continue
        break
    monomial = {v: e for v, e in monomial.items() if e > 0}
    return monomial, coeff


def ring_vars(expr: RingExpr) -> list[str]:
    """Variable names usable in element literals, in canonical display order."""
    if isinstance(expr, ZnExpr):
        return []
    if isinstance(expr, PolyQuotientExpr):
        return [expr.var]
    if isinstance(expr, TruncatedMultivarExpr):
        names = [v for v, _ in expr.vars]
        if expr.extension_degree > 1:
            names.append(_GF_VAR)
        return names
    raise RingConstructionError("product components have their own variables")


def ring_char(expr: RingExpr) -> int:
    """Characteristic used for coefficient reduction in literals."""
    if isinstance(expr, ZnExpr):
        return expr.modulus
    if isinstance(expr, PolyQuotientExpr):
        return expr.base_modulus
    if isinstance(expr, TruncatedMultivarExpr):
        return expr.p
    raise RingConstructionError("products have no single characteristic")


def parse_element(text: str, ring: RingExpr) -> ElementExpr:
    ts = _TokenStream(text)
    elem = _parse_element_stream(ts, ring)
    if ts.peek().type is not TokenType.EOF:
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    return elem


def _parse_element_stream(ts: _TokenStream, ring: RingExpr) -> ElementExpr:
    if isinstance(ring, ProductExpr):
        ts.expect(TokenType.LPAREN, "'(' (product elements are tuples)")
        comps = []
        for i, factor in enumerate(ring.factors):
            if i:
                ts.expect(TokenType.COMMA)
            comp = _parse_element_stream(ts, factor)
            assert isinstance(comp, PolyElem)
            comps.append(comp)
        ts.expect(TokenType.RPAREN)
        return TupleElem(tuple(comps))
    return _parse_poly(ts, ring_char(ring), set(ring_vars(ring)))


def parse_divisors(text: str, ring: RingExpr) -> DivisorExpr:
    """Parse a comma separated divisor list; "R" names the unit ideal."""
    ts = _TokenStream(text)
    entries: list[Optional[ElementExpr]] = []
    while True:
        tok = ts.peek()
        if tok.type is TokenType.IDENT and tok.text == "R":
            ts.advance()
            entries.append(None)
        else:
            elem = _parse_element_stream(ts, ring)
            if elem.is_zero():
                raise DslSyntaxError("zero generator is not a valid divisor", ts.text, tok.pos)
            entries.append(elem)
        if ts.peek().type is TokenType.COMMA:
            ts.advance()
            continue
        break
    if ts.peek().type is not TokenType.EOF:
        raise ts.error(f"unexpected trailing input {ts.peek().text!r}")
    return DivisorExpr(tuple(entries))


# =========================================================================
# Formatter
# =========================================================================


def format_ring(expr: RingExpr) -> str:
    if isinstance(expr, ProductExpr):
        return " x ".join(format_ring(f) for f in expr.factors)
    if isinstance(expr, ZnExpr):
        return f"Z{expr.modulus}"
    if isinstance(expr, PolyQuotientExpr):
        poly = _format_univariate(expr.modulus_coeffs, expr.var)
        return f"Z{expr.base_modulus}[{expr.var}]/({poly})"
    if isinstance(expr, TruncatedMultivarExpr):
        q = expr.p**expr.extension_degree
        field = f"F{expr.p}" if expr.extension_degree == 1 else f"GF({q})"
        names = ",".join(v for v, _ in expr.vars)
        rels = ",".join(v if e == 1 else f"{v}^{e}" for v, e in expr.vars)
        return f"{field}[{names}]/({rels})"
    raise TypeError(f"not a RingExpr: {expr!r}")


def _format_univariate(coeffs: tuple[int, ...], var: str) -> str:
    parts = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if not c:
            continue
        if e == 0:
            parts.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            parts.append(f"{head}{var}" + (f"^{e}" if e > 1 else ""))
    return " + ".join(parts) if parts else "0"


def format_element(elem: ElementExpr, ring: Optional[RingExpr] = None) -> str:
    if isinstance(elem, TupleElem):
        factors = ring.factors if isinstance(ring, ProductExpr) else [None] * len(elem.components)
        inner = ", ".join(format_element(c, f) for c, f in zip(elem.components, factors))
        return f"({inner})"
    if not elem.monomials:
        return "0"
    var_order = ring_vars(ring) if ring is not None and not isinstance(ring, ProductExpr) else None

    def sort_key(item):
        monomial, _ = item
        exps = dict(monomial)
        total = sum(exps.values())
        if var_order is not None:
            vec = tuple(exps.get(v, 0) for v in var_order)
        else:
            vec = tuple(exps.get(v, 0) for v in sorted(exps))
        return (-total, tuple(-x for x in vec))

    parts = []
    for monomial, coeff in sorted(elem.monomials, key=sort_key):
        if not monomial:
            parts.append(str(coeff))
            continue
        body = "*".join(v if e == 1 else f"{v}^{e}" for v, e in monomial)
        parts.append(body if coeff == 1 else f"{coeff}*{body}")
    return " + ".join(parts)


def format_divisors(div: DivisorExpr, ring: Optional[RingExpr] = None) -> str:
    return ", ".join("R" if e is None else format_element(e, ring) for e in div.entries)


# =========================================================================
# JSON import/export
# =========================================================================


def ring_to_json(expr: RingExpr) -> dict:
    if isinstance(expr, ZnExpr):
        return {"kind": "zn", "modulus": expr.modulus}
    if isinstance(expr, PolyQuotientExpr):
        return {
            "kind": "poly_quotient",
            "base_modulus": expr.base_modulus,
            "var": expr.var,
            "modulus_coeffs": list(expr.modulus_coeffs),
        }
    if isinstance(expr, TruncatedMultivarExpr):
        return {
            "kind": "truncated_multivar",
            "p": expr.p,
            "extension_degree": expr.extension_degree,
            "vars": [[v, e] for v, e in expr.vars],
        }
    if isinstance(expr, ProductExpr):
        return {"kind": "product", "factors": [ring_to_json(f) for f in expr.factors]}
    raise TypeError(f"not a RingExpr: {expr!r}")


def ring_from_json(data: dict) -> RingExpr:
    kind = data.get("kind")
    if kind == "zn":
        m = int(data["modulus"])
        if m < 2:
            raise RingConstructionError(f"Z{m}: modulus must be >= 2")
        return ZnExpr(m)
    if kind == "poly_quotient":
        coeffs = tuple(int(c) % int(data["base_modulus"]) for c in data["modulus_coeffs"])
        if len(coeffs) < 2 or coeffs[-1] != 1:
            raise RingConstructionError("modulus polynomial must be monic of degree >= 1")
        return PolyQuotientExpr(int(data["base_modulus"]), str(data["var"]), coeffs)
    if kind == "truncated_multivar":
        p = int(data["p"])
        if not is_prime(p):
            raise RingConstructionError(f"{p} is not prime")
        return TruncatedMultivarExpr(
            p, int(data["extension_degree"]), tuple((str(v), int(e)) for v, e in data["vars"])
        )
    if kind == "product":
        factors = tuple(ring_from_json(f) for f in data["factors"])
        if len(factors) < 2:
            raise RingConstructionError("products need at least two factors")
        if any(isinstance(f, ProductExpr) for f in factors):
            raise RingConstructionError("products do not nest")
        return ProductExpr(factors)
    raise RingConstructionError(f"unknown ring kind {kind!r}")


def element_to_json(elem: ElementExpr) -> dict:
    if isinstance(elem, TupleElem):
        return {"kind": "tuple", "components": [element_to_json(c) for c in elem.components]}
    return {
        "kind": "poly",
        "monomials": [[[[v, e] for v, e in monomial], coeff] for monomial, coeff in elem.monomials],
    }


def element_from_json(data: dict) -> ElementExpr:
    if data.get("kind") == "tuple":
        comps = tuple(element_from_json(c) for c in data["components"])
        assert all(isinstance(c, PolyElem) for c in comps)
        return TupleElem(comps)  # type: ignore[arg-type]
    if data.get("kind") == "poly":
        monomials = tuple(
            (tuple((str(v), int(e)) for v, e in monomial), int(coeff))
            for monomial, coeff in data["monomials"]
        )
        return PolyElem(monomials)
    raise RingConstructionError(f"unknown element kind {data.get('kind')!r}")


def divisors_to_json(div: DivisorExpr) -> dict:
    entries = []
    for e in div.entries:
        if e is None:
            entries.append({"kind": "unit_ideal"})
        else:
            entries.append({"kind": "generator", "element": element_to_json(e)})
    return {"entries": entries}


def divisors_from_json(data: dict) -> DivisorExpr:
    entries: list[Optional[ElementExpr]] = []
    for item in data["entries"]:
        if item.get("kind") == "unit_ideal":
            entries.append(None)
        elif item.get("kind") == "generator":
            entries.append(element_from_json(item["element"]))
        else:
            raise RingConstructionError(f"unknown divisor entry {item.get('kind')!r}")
    return DivisorExpr(tuple(entries))
