"""Independent oracles used by the test suite only.

The Sylvester determinant (via fraction-free Bareiss elimination over the
polynomial ring) is the anti-bug oracle for the library's subresultant-PRS
resultant.  It must stay independent of the library elimination path and is
deliberately slow and literal.
"""

from __future__ import annotations

from cadorder.elim import divexact
from cadorder.polys import NEG_INF, Polynomial


def sylvester_matrix(p: Polynomial, q: Polynomial, v: str):
    dp = p.degree_in(v)
    dq = q.degree_in(v)
    assert dp is not NEG_INF and dq is not NEG_INF
    dp, dq = int(dp), int(dq)
    zero = Polynomial.zero(p.order)
    pc = p.coeffs_in(v)[::-1]  # descending
    qc = q.coeffs_in(v)[::-1]
    size = dp + dq
    rows = []
    for i in range(dq):
        rows.append([zero] * i + pc + [zero] * (size - i - len(pc)))
    for i in range(dp):
        rows.append([zero] * i + qc + [zero] * (size - i - len(qc)))
    return rows


def bareiss_det(rows):
    """Fraction-free determinant over a ring with exact division."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    m = [row[:] for row in rows]
    order = m[0][0].order
    sign = 1
    prev = Polynomial.const(order, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Polynomial.zero(order)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = divexact(num, prev)
            m[i][k] = Polynomial.zero(order)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det * sign


def sylvester_resultant(p: Polynomial, q: Polynomial, v: str) -> Polynomial:
    """Resultant as the Sylvester determinant, sign included."""
    dp, dq = p.degree_in(v), q.degree_in(v)
    if (dp is NEG_INF or dp == 0) and (dq is NEG_INF or dq == 0):
        raise ValueError("both polynomials free of " + v)
    if dp == 0:
        return p ** int(dq)
    if dq == 0:
        return q ** int(dp)
    return bareiss_det(sylvester_matrix(p, q, v))


def schoolbook_multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    """Naive product by repeated shifted addition, independent of __mul__."""
    acc = Polynomial.zero(p.order)
    for exp, coeff in p.terms:
        shifted = {}
        for e2, c2 in q.terms:
            key = tuple(a + b for a, b in zip(exp, e2))
            shifted[key] = shifted.get(key, 0) + coeff * c2
        acc = acc + Polynomial(p.order, shifted)
    return acc
