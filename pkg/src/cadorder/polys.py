"""Exact sparse multivariate polynomials over an ordered variable list.

A polynomial is a map from exponent tuples (one natural number per variable,
least variable first) to nonzero arbitrary-precision integer coefficients.
The zero polynomial has no terms.  Term enumeration is graded lexicographic,
so equality and hashing are structural.

Rational input (from the text grammar's integer division) is cleared by the
least common denominator, which is positive, so signs and all degree-based
measures are unaffected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


NEG_INF = float("-inf")  # degree of the zero polynomial


class ContextError(ValueError):
    """Variable-context mismatch or unknown/unbound variable."""


class ParseError(ValueError):
    """Malformed polynomial text; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class VariableOrder:
    """Ordered variable names, least first (names[-1] is the greatest)."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise ContextError("variable order must be non-empty")
        if len(set(self.names)) != len(self.names):
            raise ContextError("variable names must be pairwise distinct")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ContextError(f"unknown variable {name!r}") from None

    @property
    def greatest(self) -> str:
        return self.names[-1]

    @property
    def second_greatest(self) -> str:
        if len(self.names) < 2:
            raise ContextError("need at least two variables")
        return self.names[-2]


def _grlex_key(exp):
    return (sum(exp), exp)


class Polynomial:
    """Immutable sparse polynomial with integer coefficients."""

    __slots__ = ("order", "_terms", "_key", "_hash")

    def __init__(self, order: VariableOrder, terms: dict):
        n = len(order.names)
        clean = {}
        for exp, coeff in terms.items():
            if coeff == 0:
                continue
            if len(exp) != n:
                raise ContextError("exponent tuple has wrong arity")
            clean[tuple(exp)] = coeff
        self.order = order
        self._terms = clean
        self._key = tuple(sorted(clean.items(), key=lambda t: _grlex_key(t[0]), reverse=True))
        self._hash = hash((order.names, self._key))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: VariableOrder) -> "Polynomial":
        return cls(order, {})

    @classmethod
    def const(cls, order: VariableOrder, c: int) -> "Polynomial":
        return cls(order, {(0,) * len(order.names): int(c)})

    @classmethod
    def variable(cls, order: VariableOrder, name: str) -> "Polynomial":
        exp = [0] * len(order.names)
        exp[order.index(name)] = 1
        return cls(order, {tuple(exp): 1})

    # -- basic structure ---------------------------------------------------

    @property
    def terms(self):
        """Canonical (exponent, coefficient) pairs, graded-lex descending."""
        return self._key

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    def constant_value(self) -> int:
        if self.is_zero():
            return 0
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self._terms.values()))

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.order.names == other.order.names
            and self._terms == other._terms
        )

    def __hash__(self):
        return self._hash

    def _check(self, other: "Polynomial"):
        if self.order.names != other.order.names:
            raise ContextError("polynomials from different variable contexts")

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            out[exp] = out.get(exp, 0) + c
        return Polynomial(self.order, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.order, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(self.order, {e: c * other for e, c in self._terms.items()})
        self._check(other)
        out: dict = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exp = tuple(i + j for i, j in zip(ea, eb))
                out[exp] = out.get(exp, 0) + ca * cb
        return Polynomial(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.const(self.order, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- degrees and views -------------------------------------------------

    def degree_in(self, v: str):
        """Highest exponent of v; NEG_INF for the zero polynomial."""
        i = self.order.index(v)
        if self.is_zero():
            return NEG_INF
        return max(e[i] for e in self._terms)

    def total_degree(self):
        if self.is_zero():
            return NEG_INF
        return max(sum(e) for e in self._terms)

    def main_variable(self):
        """Greatest variable actually occurring; None for constants."""
        best = -1
        for e in self._terms:
            for i in range(len(e) - 1, best, -1):
                if e[i] > 0:
                    best = max(best, i)
                    break
        return self.order.names[best] if best >= 0 else None

    def coeffs_in(self, v: str) -> list["Polynomial"]:
        """Coefficients of v^0, v^1, ... as polynomials in the other variables."""
        i = self.order.index(v)
        d = self.degree_in(v)
        if d is NEG_INF:
            return []
        buckets: list[dict] = [dict() for _ in range(int(d) + 1)]
        for e, c in self._terms.items():
            rest = e[:i] + (0,) + e[i + 1:]
            buckets[e[i]][rest] = buckets[e[i]].get(rest, 0) + c
        return [Polynomial(self.order, b) for b in buckets]

    @classmethod
    def from_coeffs(cls, coeffs: list["Polynomial"], v: str, order: VariableOrder) -> "Polynomial":
        i = order.index(v)
        out: dict = {}
        for k, p in enumerate(coeffs):
            for e, c in p._terms.items():
                exp = e[:i] + (e[i] + k,) + e[i + 1:]
                out[exp] = out.get(exp, 0) + c
        return cls(order, out)

    def lc_in(self, v: str) -> "Polynomial":
        """Leading coefficient viewed as univariate in v."""
        cs = self.coeffs_in(v)
        if not cs:
            raise ValueError("zero polynomial has no leading coefficient")
        return cs[-1]

    def reductum_in(self, v: str) -> "Polynomial":
        """self minus its leading term in v."""
        cs = self.coeffs_in(v)
        if not cs:
            return self
        return Polynomial.from_coeffs(cs[:-1], v, self.order)

    def derivative(self, v: str) -> "Polynomial":
        i = self.order.index(v)
        out: dict = {}
        for e, c in self._terms.items():
            if e[i] > 0:
                exp = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[exp] = out.get(exp, 0) + c * e[i]
        return Polynomial(self.order, out)

    def variables(self) -> set[str]:
        used = set()
        for e in self._terms:
            for i, k in enumerate(e):
                if k:
                    used.add(self.order.names[i])
        return used

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point: dict) -> Fraction:
        """Exact value at a point binding every occurring variable."""
        vals = {}
        for name in self.variables():
            if name not in point:
                raise ContextError(f"unbound variable {name!r}")
        for name, v in point.items():
            vals[self.order.index(name)] = Fraction(v)
        total = Fraction(0)
        for e, c in self._terms.items():
            term = Fraction(c)
            for i, k in enumerate(e):
                if k:
                    term *= vals[i] ** k
            total += term
        return total

    def substitute(self, v: str, value) -> "Polynomial":
        """Substitute an exact rational for v, clearing denominators.

        The clearing multiplier is positive, so signs are preserved.
        """
        value = Fraction(value)
        i = self.order.index(v)
        out: dict = {}
        d = self.degree_in(v)
        dmax = 0 if d is NEG_INF else int(d)
        den = value.denominator
        for e, c in self._terms.items():
            k = e[i]
            exp = e[:i] + (0,) + e[i + 1:]
            # scale by den**dmax so every term stays integral
            num = c * value.numerator**k * den ** (dmax - k)
            out[exp] = out.get(exp, 0) + num
        p = Polynomial(self.order, out)
        return p.primitive_int() if den != 1 else p

    # -- integer content and normalization ---------------------------------

    def content_int(self) -> int:
        g = 0
        for c in self._terms.values():
            g = gcd(g, abs(c))
        return g

    def primitive_int(self) -> "Polynomial":
        g = self.content_int()
        if g <= 1:
            return self
        return Polynomial(self.order, {e: c // g for e, c in self._terms.items()})

    def leading_int(self) -> int:
        """Coefficient of the graded-lex leading term (0 for zero)."""
        return self._key[0][1] if self._key else 0

    def normalize_sign(self) -> "Polynomial":
        return -self if self.leading_int() < 0 else self

    def sort_key(self):
        return self._key

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self._key:
            return "0"
        parts = []
        for exp, coeff in self._key:
            factors = []
            for i, k in enumerate(exp):
                if k == 1:
                    factors.append(self.order.names[i])
                elif k > 1:
                    factors.append(f"{self.order.names[i]}^{k}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            parts.append(("-" if coeff < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Polynomial({self})"


# -- spec-named operation wrappers ------------------------------------------


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def degree_in(p: Polynomial, v: str):
    return p.degree_in(v)


def evaluate(p: Polynomial, point: dict) -> Fraction:
    return p.evaluate(point)


def sotd(polys) -> int:
    """Sum of total degrees of every monomial of every polynomial."""
    total = 0
    for p in polys:
        for exp, _ in p.terms:
            total += sum(exp)
    return total


# -- text grammar ------------------------------------------------------------
#
# expr   := term (('+'|'-') term)*
# term   := factor (('*' factor) | ('/' integer))*
# factor := '-'* atom ('^' natural)?
# atom   := integer | variable | '(' expr ')'
#
# Implicit multiplication is disallowed.  '/' takes an integer literal only;
# the resulting rational coefficients are cleared by the (positive) lcm of
# the denominators.


class _Tok:
    __slots__ = ("kind", "value", "pos")

    def __init__(self, kind, value, pos):
        self.kind, self.value, self.pos = kind, value, pos


def _tokenize(text):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", int(text[i:j]), i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("var", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            toks.append(_Tok(ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", None, n))
    return toks


class _Parser:
    def __init__(self, toks, order):
        self.toks = toks
        self.i = 0
        self.order = order

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind}, found {tok.value!r}", tok.pos)
        self.i += 1
        return tok

    # values are dicts exponent -> Fraction
    def expr(self):
        acc = self.term()
        while self.peek().kind in "+-":
            op = self.take().kind
            rhs = self.term()
            for e, c in rhs.items():
                acc[e] = acc.get(e, Fraction(0)) + (c if op == "+" else -c)
        return acc

    def term(self):
        acc = self.factor()
        while True:
            kind = self.peek().kind
            if kind == "*":
                self.take()
                rhs = self.factor()
                out = {}
                for ea, ca in acc.items():
                    for eb, cb in rhs.items():
                        exp = tuple(a + b for a, b in zip(ea, eb))
                        out[exp] = out.get(exp, Fraction(0)) + ca * cb
                acc = out
            elif kind == "/":
                tok = self.take()
                den = self.peek()
                if den.kind != "int":
                    raise ParseError("'/' requires an integer literal", tok.pos)
                self.take()
                if den.value == 0:
                    raise ParseError("division by zero", den.pos)
                acc = {e: c / den.value for e, c in acc.items()}
            elif kind in ("int", "var", "("):
                raise ParseError("implicit multiplication is not allowed", self.peek().pos)
            else:
                return acc

    def factor(self):
        sign = 1
        while self.peek().kind == "-":
            self.take()
            sign = -sign
        base = self.atom()
        if self.peek().kind == "^":
            tok = self.take()
            exp = self.peek()
            if exp.kind != "int":
                raise ParseError("'^' requires a natural number", tok.pos)
            self.take()
            base = self._power(base, exp.value)
        if sign < 0:
            base = {e: -c for e, c in base.items()}
        return base

    def _power(self, base, n):
        zero = (0,) * len(self.order.names)
        acc = {zero: Fraction(1)}
        for _ in range(n):
            out = {}
            for ea, ca in acc.items():
                for eb, cb in base.items():
                    exp = tuple(a + b for a, b in zip(ea, eb))
                    out[exp] = out.get(exp, Fraction(0)) + ca * cb
            acc = out
        return acc

    def atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            zero = (0,) * len(self.order.names)
            return {zero: Fraction(tok.value)}
        if tok.kind == "var":
            self.take()
            idx = self.order.index(tok.value)
            exp = [0] * len(self.order.names)
            exp[idx] = 1
            return {tuple(exp): Fraction(1)}
        if tok.kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {tok.value!r}", tok.pos)


def parse_poly(text: str, order: VariableOrder) -> Polynomial:
    """Parse polynomial text, clearing rational coefficients positively."""
    toks = _tokenize(text)
    parser = _Parser(toks, order)
    frac_terms = parser.expr()
    end = parser.peek()
    if end.kind != "end":
        raise ParseError(f"trailing input {end.value!r}", end.pos)
    denom = lcm(*[c.denominator for c in frac_terms.values()]) if frac_terms else 1
    terms = {}
    for e, c in frac_terms.items():
        scaled = c * denom
        terms[e] = int(scaled)
    return Polynomial(order, terms)
