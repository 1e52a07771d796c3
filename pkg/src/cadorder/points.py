"""Exact sign determination and root isolation over mixed sample points.

A sample point binds a prefix of the variable order to exact values: plain
rationals or AlgebraicNumbers, where every algebraic coordinate carries a
square-free *integer* defining polynomial in its own variable plus an
isolating interval.  That keeps all machinery tower-free.

Sign of q at the point: substitute the rational coordinates, refine the
remaining coordinate intervals, and when interval arithmetic stalls decide
"is the value exactly zero" by a gcd descent against the deepest
coordinate's defining polynomial A: compute W, the specialization at the
lower coordinates of gcd(A, q) in that variable (pseudo-remainder chain
with vanishing leading coefficients stripped via recursive lower-level
queries).  Since A is square-free with constant coefficients, W divides a
square-free polynomial and W's roots are simple, so "the coordinate's value
is a root of q" reduces to a sign change of W across the isolating interval
(endpoint values are provably nonzero).  Nonzero values then resolve by
interval refinement; no sign is ever reported from an undecided interval.

Root isolation of q(point, z): eliminate the algebraic coordinates from q
by a resultant chain against their definings (constant leading coefficients
make the Poisson factorization exact, so the chain never vanishes except
through a genuine shared factor, which is stripped) to get an integer
candidate polynomial in z; isolate its roots and keep the candidates where
some input polynomial provably vanishes.

The classical eliminating certificate C(t) = res(A_1, ... res(A_k, t - q))
is kept as an independent cross-check for the test suite.
"""

from __future__ import annotations

from fractions import Fraction

from .elim import resultant
from .polys import NEG_INF, Polynomial, VariableOrder
from .realroots import (
    AlgebraicNumber,
    isolate_coeffs,
    sign_at,
    unipoly_from,
)


class SignEvalError(ValueError):
    pass


# -- interval arithmetic over exact rationals ---------------------------------


def _ipow(lo: Fraction, hi: Fraction, k: int):
    if k == 0:
        return Fraction(1), Fraction(1)
    if k % 2 == 1 or lo >= 0:
        return lo**k, hi**k
    if hi <= 0:
        return hi**k, lo**k
    return Fraction(0), max(lo**k, hi**k)


def box_eval(p: Polynomial, boxes: dict) -> tuple[Fraction, Fraction]:
    """Interval evaluation of p over per-variable interval bounds."""
    total_lo = Fraction(0)
    total_hi = Fraction(0)
    names = p.order.names
    for exp, coeff in p.terms:
        lo, hi = Fraction(coeff), Fraction(coeff)
        for i, k in enumerate(exp):
            if not k:
                continue
            blo, bhi = boxes[names[i]]
            plo, phi = _ipow(blo, bhi, k)
            cands = (lo * plo, lo * phi, hi * plo, hi * phi)
            lo, hi = min(cands), max(cands)
        total_lo += lo
        total_hi += hi
    return total_lo, total_hi


# -- samples -------------------------------------------------------------------


def split_sample(sample: dict):
    """Partition a sample into rational and algebraic coordinate maps."""
    rats, algs = {}, {}
    for var, val in sample.items():
        if isinstance(val, AlgebraicNumber):
            if val.exact is not None:
                rats[var] = val.exact
            else:
                algs[var] = val
        else:
            rats[var] = Fraction(val)
    return rats, algs


def _substitute_all(p: Polynomial, rats: dict) -> Polynomial:
    for var, val in rats.items():
        if var in p.variables():
            p = p.substitute(var, val)
    return p


def _lift(p: Polynomial, big: VariableOrder) -> Polynomial:
    pos = [big.index(name) for name in p.order.names]
    terms = {}
    for exp, coeff in p.terms:
        e = [0] * len(big.names)
        for i, k in enumerate(exp):
            e[pos[i]] = k
        terms[tuple(e)] = coeff
    return Polynomial(big, terms)


def _defining_poly(alpha: AlgebraicNumber, var: str, order: VariableOrder) -> Polynomial:
    terms = {}
    idx = order.index(var)
    for k, c in enumerate(alpha.coeffs):
        if c:
            e = [0] * len(order.names)
            e[idx] = k
            terms[tuple(e)] = c
    return Polynomial(order, terms)


def certificate(q: Polynomial, algs: dict) -> list[int]:
    """Integer polynomial whose roots include q evaluated at the sample."""
    tvar = "#t"
    big = VariableOrder(q.order.names + (tvar,))
    D = Polynomial.variable(big, tvar) - _lift(q, big)
    for var, alpha in algs.items():
        if var not in D.variables():
            continue
        A = _defining_poly(alpha, var, big)
        D = resultant(D, A, var)
    if D.variables() - {tvar}:
        raise SignEvalError("certificate left unbound variables")
    return unipoly_from(D, tvar)


def _nonzero_root_lower_bound(c: list[int]) -> tuple[int, Fraction]:
    """(multiplicity of root 0, lower bound on |nonzero roots|)."""
    m = 0
    while m < len(c) and c[m] == 0:
        m += 1
    stripped = c[m:]
    c0 = abs(stripped[0])
    mx = max((abs(a) for a in stripped[1:]), default=0)
    return m, Fraction(c0, c0 + mx)


_SIGN_CACHE_LIMIT = 200_000


def sign_eval(p: Polynomial, sample: dict, cache: dict | None = None) -> int:
    """Exact sign of p at the sample point (must bind every variable of p)."""
    key = None
    if cache is not None:
        key = (p, tuple(sorted((v, id(x)) for v, x in sample.items())))
        hit = cache.get(key)
        if hit is not None:
            return hit
    result = _sign_eval(p, sample, cache)
    if cache is not None and len(cache) < _SIGN_CACHE_LIMIT:
        cache[key] = result
    return result


def _sign_eval(p: Polynomial, sample: dict, cache: dict | None = None) -> int:
    rats, algs = split_sample(sample)
    q = _substitute_all(p, rats)
    used = q.variables()
    missing = used - set(algs)
    if missing:
        raise SignEvalError(f"unbound variables {sorted(missing)}")
    if not used:
        c = q.constant_value()
        return 0 if c == 0 else (1 if c > 0 else -1)
    live = {v: a for v, a in algs.items() if v in used}
    if len(live) == 1:
        (var, alpha), = live.items()
        return sign_at(unipoly_from(q, var), alpha)
    # several algebraic coordinates: interval screening first
    for _ in range(4):
        boxes = {v: (a.lo, a.hi) for v, a in live.items()}
        lo, hi = box_eval(q, boxes)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        for a in live.values():
            a.refine()
    # exact zero decision through the deepest coordinate's defining
    names = q.order.names
    deepest = max(live, key=names.index)
    prefix = dict(sample)
    alpha = prefix.pop(deepest)
    if _is_root_through(alpha, deepest, q, prefix, cache):
        return 0
    while True:
        boxes = {v: (a.lo, a.hi) for v, a in live.items()}
        lo, hi = box_eval(q, boxes)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        for a in live.values():
            a.refine()


def _effective(G: Polynomial, var: str, prefix: dict, cache: dict | None) -> Polynomial:
    """Drop leading coefficients in var that vanish at the prefix point."""
    key = None
    if cache is not None:
        key = ("eff", G, var, tuple(sorted((v, id(x)) for v, x in prefix.items())))
        hit = cache.get(key)
        if hit is not None:
            return hit
    out = G
    while True:
        d = out.degree_in(var)
        if d is NEG_INF or d == 0:
            break
        lead = out.lc_in(var)
        if sign_eval(lead, prefix, cache) != 0:
            break
        out = out.reductum_in(var)
    if cache is not None and len(cache) < _SIGN_CACHE_LIMIT:
        cache[key] = out
    return out


def _prem_cached(A: Polynomial, B: Polynomial, var: str, cache: dict | None) -> Polynomial:
    if cache is not None:
        key = ("prem", A, B, var)
        hit = cache.get(key)
        if hit is not None:
            return hit
    from .elim import prem

    R = prem(A, B, var).primitive_int()
    if cache is not None and len(cache) < _SIGN_CACHE_LIMIT:
        cache[key] = R
    return R


def _vanishes_in_var(B: Polynomial, var: str, prefix: dict, cache: dict | None) -> bool:
    return all(
        cf.is_zero() or sign_eval(cf, prefix, cache) == 0 for cf in B.coeffs_in(var)
    )


def _gcd_at(A: Polynomial, B: Polynomial, var: str, prefix: dict, cache: dict | None):
    """gcd of the specializations of A and B at the prefix point, viewed in
    var; A must specialize to a nonzero polynomial of positive degree with a
    nonvanishing leading coefficient.  Returns None for a trivial gcd."""
    B = B.primitive_int()
    while True:
        B = _effective(B, var, prefix, cache)
        dB = B.degree_in(var)
        if B.is_zero() or dB is NEG_INF or _vanishes_in_var(B, var, prefix, cache):
            return _effective(A, var, prefix, cache)
        if dB == 0:
            return None
        if int(A.degree_in(var)) < int(dB):
            A, B = B, A
            continue
        R = _prem_cached(A, B, var, cache)
        A, B = B, R


def _squarefree_source(
    alpha: AlgebraicNumber, var: str, order, rats: dict, prefix: dict, cache: dict | None
) -> Polynomial:
    """A polynomial vanishing at (prefix, alpha) whose specialization at the
    prefix is square-free; small when the coordinate carries a source."""
    key = ("sqsrc", id(alpha), tuple(sorted((v, id(x)) for v, x in prefix.items())))
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    if alpha.source is None:
        S = _defining_poly(alpha, var, order)  # integer square-free already
    else:
        S0 = _substitute_all(_lift(alpha.source, order), rats).primitive_int()
        S0 = _effective(S0, var, prefix, cache)
        d = S0.degree_in(var)
        if d is NEG_INF or int(d) < 1:
            S = _defining_poly(alpha, var, order)
        else:
            H = _gcd_at(S0, S0.derivative(var), var, prefix, cache)
            if H is None or int(H.degree_in(var)) < 1:
                S = S0
            else:
                from .elim import pquo_rem

                S = pquo_rem(S0, H, var)[0].primitive_int()
                S = _effective(S, var, prefix, cache)
                d2 = S.degree_in(var)
                if d2 is NEG_INF or int(d2) < 1:
                    S = _defining_poly(alpha, var, order)
    if cache is not None and len(cache) < _SIGN_CACHE_LIMIT:
        cache[key] = S
    return S


def _is_root_through(
    alpha: AlgebraicNumber, var: str, G: Polynomial, prefix: dict, cache: dict | None
) -> bool:
    """Does G vanish at (prefix, var=alpha)?  Exact, via a gcd descent
    against a polynomial whose specialization is square-free at the prefix
    and has alpha as its only root in the isolating interval."""
    if alpha.exact is not None:
        return sign_eval(G.substitute(var, alpha.exact), prefix, cache) == 0
    rats, _ = split_sample(prefix)
    S = _squarefree_source(alpha, var, G.order, rats, prefix, cache)
    W = _gcd_at(S, G, var, prefix, cache)
    if W is None:
        return False  # no shared root at this point
    if W.degree_in(var) == S.degree_in(var):
        return True  # gcd is the whole source: alpha certainly roots G
    # W divides the square-free specialization: simple roots, and the
    # isolating interval contains alpha as the only candidate root
    while True:
        slo = sign_eval(W.substitute(var, alpha.lo).primitive_int(), prefix, cache)
        shi = sign_eval(W.substitute(var, alpha.hi).primitive_int(), prefix, cache)
        if slo != 0 and shi != 0:
            return slo != shi
        # an interval endpoint happens to root the gcd: narrow and retry
        alpha.refine()
        if alpha.exact is not None:
            return sign_eval(G.substitute(var, alpha.exact), prefix, cache) == 0


def _common_univariate_factor(a_coeffs, R: Polynomial, var: str) -> list[int]:
    """gcd over Q[var] of the defining polynomial and R: since the defining
    has constant coefficients, the gcd over the function field of the other
    variables has a representative in Z[var], namely the gcd of the defining
    with every coefficient slice of R grouped by the other variables' monomials.
    """
    from .realroots import ugcd

    idx = R.order.index(var)
    slices: dict = {}
    for exp, coeff in R.terms:
        rest = exp[:idx] + (0,) + exp[idx + 1 :]
        slices.setdefault(rest, {})[exp[idx]] = coeff
    g = list(a_coeffs)
    for parts in slices.values():
        top = max(parts)
        coeffs = [parts.get(k, 0) for k in range(top + 1)]
        g = ugcd(g, coeffs)
        if len(g) <= 1:
            break
    return g


def _deflate_poly(A: Polynomial, g: list[int], var: str) -> Polynomial:
    from .elim import divexact

    order = A.order
    terms = {}
    idx = order.index(var)
    for k, c in enumerate(g):
        if c:
            e = [0] * len(order.names)
            e[idx] = k
            terms[tuple(e)] = c
    return divexact(A, Polynomial(order, terms))


def vanishes_at(p: Polynomial, fiber: str, sample: dict, cache: dict | None = None) -> bool:
    """True when p(sample, z) is identically zero as a polynomial in z."""
    for coeff in p.coeffs_in(fiber):
        if coeff.is_zero():
            continue
        if sign_eval(coeff, sample, cache) != 0:
            return False
    return True


def eliminate_candidates(
    p: Polynomial, fiber: str, sample: dict, cache: dict | None = None
) -> list[int]:
    """Integer polynomial in the fiber variable whose roots cover the roots
    of p(sample, fiber).  Assumes p does not vanish identically at the sample.
    """
    rats, algs = split_sample(sample)
    R = _substitute_all(p, rats)
    if cache is not None:
        key = ("elim", R, fiber,
               tuple(sorted((v, id(a)) for v, a in algs.items() if v in R.variables())))
        hit = cache.get(key)
        if hit is not None:
            return hit
        full_key = key
    names = R.order.names
    # eliminate deepest coordinates first so sources (which involve lower
    # variables) stay usable
    for var in sorted(algs, key=names.index, reverse=True):
        if var not in R.variables():
            continue
        alpha = algs[var]
        E = None
        if alpha.source is not None:
            src = _substitute_all(alpha.source, rats)
            d = src.degree_in(var)
            if d is not NEG_INF and d != 0 and not src.is_zero():
                E = resultant(R, src, var)
                if E.is_zero():
                    E = None  # shared factor: fall back to the univariate defining
        if E is None:
            A = _defining_poly(alpha, var, R.order)
            a_coeffs = list(alpha.coeffs)
            while True:
                E = resultant(R, A, var)
                if not E.is_zero():
                    break
                # A shares a factor (in var, over the rationals) with R through
                # some *other* root of the defining polynomial; strip it
                g = _common_univariate_factor(a_coeffs, R, var)
                if len(g) <= 1:
                    raise SignEvalError("vanishing resultant without a shared factor")
                if sign_at(list(g), alpha) == 0:
                    raise SignEvalError("polynomial vanishes identically at the sample")
                A = _deflate_poly(A, g, var)
                a_coeffs = unipoly_from(A, var)
        R = E
    extra = R.variables() - {fiber}
    if extra:
        raise SignEvalError(f"unbound variables {sorted(extra)}")
    out = unipoly_from(R, fiber) if not R.is_zero() else []
    if cache is not None and len(cache) < _SIGN_CACHE_LIMIT:
        cache[full_key] = out
    return out


def stack_roots(
    polys, fiber: str, sample: dict, cache: dict | None = None
) -> list[tuple[AlgebraicNumber, list[Polynomial]]]:
    """Isolate the distinct real roots of {p(sample, fiber): p in polys}.

    Returns ascending (root, vanishing polynomials) pairs; polynomials that
    vanish identically over the sample are skipped (they cut nothing).
    """
    active = []
    seen = set()
    for p in polys:
        if p in seen:
            continue
        seen.add(p)
        if vanishes_at(p, fiber, sample, cache):
            continue
        active.append(p)
    if not active:
        return []
    # per-polynomial candidates keep the defining degrees small
    found: list[tuple[AlgebraicNumber, list[Polynomial]]] = []
    for p in active:
        cand = eliminate_candidates(p, fiber, sample, cache)
        if len(cand) <= 1:
            continue
        key = ("roots", tuple(cand))
        roots = cache.get(key) if cache is not None else None
        if roots is None:
            roots = isolate_coeffs(cand)
            if cache is not None and len(cache) < _SIGN_CACHE_LIMIT:
                cache[key] = roots
        for gamma in roots:
            group = None
            for g, members in found:
                if not (g.hi < gamma.lo or gamma.hi < g.lo) and g.equals(gamma):
                    group = members
                    break
            if group is None:
                found.append((gamma, [p]))
            elif p not in group:
                group.append(p)
    sections = []
    for gamma, members in found:
        extended = dict(sample)
        extended[fiber] = gamma
        vanishers = [p for p in members if sign_eval(p, extended, cache) == 0]
        if vanishers:
            gamma.source = _effective(vanishers[0], fiber, sample, cache)
            sections.append((gamma, vanishers))
    roots_only = [g for g, _ in sections]
    from .realroots import separate

    separate(roots_only)
    sections.sort(key=lambda t: t[0].lo)
    return sections
