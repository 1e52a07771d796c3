"""Elimination in one designated variable: resultants, discriminants, gcds.

The resultant is computed by a subresultant polynomial remainder sequence
with an explicit scale ledger, so the returned value equals the Sylvester
matrix determinant including sign (the test suite carries an independent
fraction-free determinant oracle).

Identities used per pseudo-division step, with c = lc(B), m = deg A,
n = deg B, R = prem(A, B):

    res(A, B) = (-1)^(m n) * res(B, A)
    res(B, c^(m-n+1) A) = c^((m-n+1) n) * res(B, A)
    res(B, h) = c^(deg h - deg r) * res(B, r)     when h = r mod B

so res(A, B) = (-1)^(m n) * c^(m - deg R - (m-n+1) n) * res(B, R), and every
subresultant division R -> R/d contributes a known factor d^(deg B).  The
possibly negative exponents cancel in the final exact division.
"""

from __future__ import annotations

from .polys import NEG_INF, Polynomial


class EliminationError(ValueError):
    pass


def divexact(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact multivariate division; raises if q does not divide p."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return p
    if q.is_constant():
        c = q.constant_value()
        terms = {}
        for e, a in p.terms:
            if a % c:
                raise EliminationError("inexact constant division")
            terms[e] = a // c
        return Polynomial(p.order, terms)
    order = p.order
    q_lead_exp, q_lead_c = q.terms[0]
    rem = p
    quo: dict = {}
    while not rem.is_zero():
        r_exp, r_c = rem.terms[0]
        exp = tuple(a - b for a, b in zip(r_exp, q_lead_exp))
        if any(k < 0 for k in exp) or r_c % q_lead_c:
            raise EliminationError("inexact division")
        coeff = r_c // q_lead_c
        quo[exp] = quo.get(exp, 0) + coeff
        rem = rem - q * Polynomial(order, {exp: coeff})
    return Polynomial(order, quo)


def _deg(p: Polynomial, v: str) -> int:
    d = p.degree_in(v)
    return -1 if d is NEG_INF else int(d)


def prem(f: Polynomial, g: Polynomial, v: str) -> Polynomial:
    """Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f modulo g, in v."""
    return pquo_rem(f, g, v)[1]


def pquo_rem(f: Polynomial, g: Polynomial, v: str) -> tuple[Polynomial, Polynomial]:
    """Pseudo-quotient and -remainder: lc(g)^(df-dg+1) * f = q*g + r."""
    df, dg = _deg(f, v), _deg(g, v)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    order = f.order
    if df < dg:
        return Polynomial.zero(order), f
    lc_g = g.lc_in(v)
    xv = Polynomial.variable(order, v)
    r = f
    q = Polynomial.zero(order)
    e = df - dg + 1
    while True:
        dr = _deg(r, v)
        if dr < dg or r.is_zero():
            break
        lead = r.lc_in(v)
        step = lead * xv ** (dr - dg)
        q = q * lc_g + step
        r = r * lc_g - g * step
        e -= 1
    if e > 0:
        scale = lc_g**e
        q = q * scale
        r = r * scale
    return q, r


def resultant(p: Polynomial, q: Polynomial, v: str) -> Polynomial:
    """res_v(p, q): Sylvester determinant value via a subresultant PRS."""
    if p.is_zero() or q.is_zero():
        raise EliminationError("resultant of the zero polynomial")
    order = p.order
    dp, dq = _deg(p, v), _deg(q, v)
    if dp <= 0 and dq <= 0:
        raise EliminationError("no elimination variable: both free of " + v)
    if dp == 0:
        return p ** dq
    if dq == 0:
        return q ** dp

    sign = 1
    A, B = p, q
    m, n = dp, dq
    if m < n:
        A, B, m, n = B, A, n, m
        if (dp * dq) % 2:
            sign = -sign

    one = Polynomial.const(order, 1)
    num: list[Polynomial] = []
    den: list[Polynomial] = []
    g = h = one
    while True:
        c = B.lc_in(v)
        delta = m - n
        R = prem(A, B, v)
        if R.is_zero():
            return Polynomial.zero(order)
        dR = _deg(R, v)
        if (m * n) % 2:
            sign = -sign
        # ledger: res(A,B) = c^(m - dR - (delta+1) n) res(B,R)
        e = m - dR - (delta + 1) * n
        if e >= 0:
            num.extend([c] * e)
        else:
            den.extend([c] * (-e))
        # subresultant divisor keeps remainder sizes polynomial
        d = g * h**delta
        Rt = divexact(R, d)
        # res(B, R) = d^(deg B) res(B, R/d)
        num.extend([d] * n)
        A, B, m = B, Rt, n
        n = dR
        g = A.lc_in(v)
        if delta == 1:
            h = g
        elif delta > 1:
            h = divexact(g**delta, h ** (delta - 1))
        if n == 0:
            result = B**m
            for f in num:
                result = result * f
            for f in den:
                result = divexact(result, f)
            return result * sign


def discriminant(p: Polynomial, v: str) -> Polynomial:
    """disc_v(p) = (-1)^(d(d-1)/2) res_v(p, dp/dv) / lc_v(p); 1 when d = 1."""
    if p.is_zero():
        raise EliminationError("discriminant of the zero polynomial")
    d = _deg(p, v)
    if d <= 0:
        raise EliminationError("polynomial free of " + v)
    if d == 1:
        return Polynomial.const(p.order, 1)
    r = resultant(p, p.derivative(v), v)
    s = -1 if (d * (d - 1) // 2) % 2 else 1
    return divexact(r, p.lc_in(v)) * s


def gcd_univ(p: Polynomial, q: Polynomial, v: str) -> Polynomial:
    """A gcd of p, q viewed as univariate in v: primitive over the integers,
    positive leading integer coefficient.  Content is handled over Z only.
    """
    if p.is_zero() and q.is_zero():
        raise EliminationError("gcd(0, 0) is undefined")
    if p.is_zero():
        return q.primitive_int().normalize_sign()
    if q.is_zero():
        return p.primitive_int().normalize_sign()
    A, B = p, q
    if _deg(A, v) < _deg(B, v):
        A, B = B, A
    # primitive PRS: pseudo-divide, strip integer content each round
    while _deg(B, v) > 0:
        R = prem(A, B, v)
        if R.is_zero():
            return B.primitive_int().normalize_sign()
        A, B = B, R.primitive_int()
    # B is nonzero and free of v, so the gcd is trivial in v
    return Polynomial.const(p.order, 1)


def squarefree_part(p: Polynomial, v: str) -> Polynomial:
    """p / gcd(p, dp/dv): same distinct roots in v, primitive, positive lead."""
    if p.is_zero():
        raise EliminationError("square-free part of the zero polynomial")
    d = _deg(p, v)
    if d <= 0:
        return p.primitive_int().normalize_sign()
    g = gcd_univ(p, p.derivative(v), v)
    if g.is_constant():
        return p.primitive_int().normalize_sign()
    return divexact(p, g).primitive_int().normalize_sign()
