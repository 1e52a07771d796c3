"""Exact real root isolation and algebraic numbers with refinable intervals.

Univariate polynomials here are dense integer coefficient lists, ascending.
Isolation runs Descartes' rule with interval bisection on the square-free
part; Sturm sequences provide the independent count used for verification
and the zero tests behind exact sign determination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .polys import NEG_INF, Polynomial


class RootIsolationError(ValueError):
    pass


# -- dense univariate helpers -------------------------------------------------


def unipoly_from(p: Polynomial, v: str | None = None) -> list[int]:
    """Dense integer coefficient list of a univariate polynomial."""
    used = p.variables()
    if v is None:
        if len(used) > 1:
            raise RootIsolationError("polynomial is not univariate")
        v = next(iter(used)) if used else p.order.names[0]
    elif used - {v}:
        raise RootIsolationError("polynomial involves variables other than " + v)
    d = p.degree_in(v)
    if d is NEG_INF:
        return []
    coeffs = [0] * (int(d) + 1)
    i = p.order.index(v)
    for e, c in p.terms:
        coeffs[e[i]] += c
    return trim(coeffs)


def trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def deg(c) -> int:
    return len(c) - 1


def ueval(c, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def uderiv(c):
    return [i * c[i] for i in range(1, len(c))]

def uneg(c):
    return [-a for a in c]


def uscale_content(c):
    g = 0
    for a in c:
        g = gcd(g, abs(a))
    return [a // g for a in c] if g > 1 else list(c)


def umul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def _frac_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        k = len(a) - 1 - db
        q = la / lb
        for i in range(len(b)):
            a[k + i] -= q * b[i]
        while a and a[-1] == 0:
            a.pop()
    return a


_CHAIN_CACHE: dict = {}


def sturm_chain(c: list[int]):
    key = tuple(c)
    hit = _CHAIN_CACHE.get(key)
    if hit is not None:
        return hit
    chain = [[Fraction(x) for x in c]]
    d = [Fraction(x) for x in uderiv(c)]
    if d:
        chain.append(d)
    while len(chain[-1]) > 1:
        rem = _frac_rem(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-x for x in rem])
    if len(_CHAIN_CACHE) < 4096:
        _CHAIN_CACHE[key] = chain
    return chain


def _variations(values) -> int:
    signs = [1 if v > 0 else -1 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(c: list[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in (lo, hi]."""
    chain = sturm_chain(c)
    va = _variations(ueval(s, lo) for s in chain)
    vb = _variations(ueval(s, hi) for s in chain)
    return va - vb


def ugcd(a: list[int], b: list[int]) -> list[int]:
    """Integer-primitive gcd of dense univariate integer polynomials."""
    if not a:
        return uscale_content(b)
    if not b:
        return uscale_content(a)
    fa = [Fraction(x) for x in a]
    fb = [Fraction(x) for x in b]
    if len(fa) < len(fb):
        fa, fb = fb, fa
    while fb:
        fa, fb = fb, _frac_rem(fa, fb)
    den = 1
    for x in fa:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fa]
    out = uscale_content(trim(ints))
    if out and out[-1] < 0:
        out = [-x for x in out]
    return out


def usquarefree(c: list[int]) -> list[int]:
    if not c:
        raise RootIsolationError("zero polynomial")
    g = ugcd(c, uderiv(c))
    if deg(g) < 1:
        out = uscale_content(c)
        return [-x for x in out] if out[-1] < 0 else out
    fa = [Fraction(x) for x in c]
    fg = [Fraction(x) for x in g]
    q = _frac_div(fa, fg)
    den = 1
    for x in q:
        den = den * x.denominator // gcd(den, x.denominator)
    out = uscale_content(trim([int(x * den) for x in q]))
    return [-x for x in out] if out and out[-1] < 0 else out


def _frac_div(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    out = [Fraction(0)] * (len(a) - len(b) + 1)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        k = len(a) - 1 - db
        q = la / lb
        out[k] = q
        for i in range(len(b)):
            a[k + i] -= q * b[i]
        while a and a[-1] == 0:
            a.pop()
    return out


def root_bound(c: list[int]) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(c[-1])
    m = max((abs(a) for a in c[:-1]), default=0)
    return Fraction(m, lead) + 1


# -- algebraic numbers ---------------------------------------------------------


class AlgebraicNumber:
    """A real algebraic number: square-free integer defining polynomial plus
    an isolating interval (lo, hi].  Rational values carry an exact field.
    Refinement narrows the interval without changing the represented root.

    `source` optionally holds a small multivariate polynomial known to vanish
    at (sample prefix, this value); elimination machinery prefers it to the
    (often much larger) univariate defining polynomial.
    """

    __slots__ = ("coeffs", "lo", "hi", "exact", "source")

    def __init__(self, coeffs, lo, hi, exact=None, source=None):
        self.coeffs = tuple(coeffs)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self.exact = Fraction(exact) if exact is not None else None
        self.source = source

    @classmethod
    def from_rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls((-q.numerator, q.denominator), q - 1, q, exact=q)

    def __repr__(self):
        if self.exact is not None:
            return f"AlgebraicNumber({self.exact})"
        return f"AlgebraicNumber(({self.lo}, {self.hi}])"

    def is_rational(self) -> bool:
        return self.exact is not None

    def refine(self) -> None:
        """Halve the isolating interval."""
        if self.exact is not None:
            self.lo = self.exact - (self.exact - self.lo) / 2
            self.hi = self.exact
            return
        mid = (self.lo + self.hi) / 2
        v = ueval(self.coeffs, mid)
        if v == 0:
            self.exact = mid
            self.hi = mid
            self.lo = (self.lo + mid) / 2
            return
        vlo = ueval(self.coeffs, self.lo)
        if (vlo > 0) != (v > 0):
            self.hi = mid
        else:
            self.lo = mid

    def refine_below(self, width) -> None:
        while self.hi - self.lo > width:
            self.refine()

    def width(self) -> Fraction:
        return self.hi - self.lo

    def as_float(self) -> float:
        if self.exact is not None:
            return float(self.exact)
        self.refine_below(Fraction(1, 1 << 30))
        return float((self.lo + self.hi) / 2)

    def equals_rational(self, q) -> bool:
        q = Fraction(q)
        if self.exact is not None:
            return self.exact == q
        if not (self.lo < q <= self.hi):
            return False
        return ueval(self.coeffs, q) == 0

    def compare_rational(self, q) -> int:
        """-1, 0, +1 for self <=> q."""
        q = Fraction(q)
        if self.equals_rational(q):
            return 0
        while self.lo < q <= self.hi:
            self.refine()
        return -1 if self.hi < q else 1

    def equals(self, other: "AlgebraicNumber") -> bool:
        if self.exact is not None:
            return other.equals_rational(self.exact)
        if other.exact is not None:
            return self.equals_rational(other.exact)
        g = ugcd(list(self.coeffs), list(other.coeffs))
        if deg(g) < 1:
            return False
        for _ in range(4):
            lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
            if lo >= hi:
                return False
            self.refine()
            other.refine()
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo >= hi:
            return False
        # both intervals isolate a root of g in the overlap: same root
        return sturm_count(g, lo, hi) >= 1

    def compare(self, other: "AlgebraicNumber") -> int:
        if other.exact is not None:
            return self.compare_rational(other.exact)
        if self.exact is not None:
            return -other.compare_rational(self.exact)
        if self.equals(other):
            return 0
        while not (self.hi < other.lo or other.hi < self.lo):
            self.refine()
            other.refine()
        return -1 if self.hi < other.lo else 1

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.equals(other)
        return NotImplemented

    def __hash__(self):
        raise TypeError("AlgebraicNumber is mutable (refinable); not hashable")

    def verify(self) -> bool:
        """Invariant: exactly one root of the defining polynomial in (lo, hi]."""
        return sturm_count(list(self.coeffs), self.lo, self.hi) == 1


# -- isolation ----------------------------------------------------------------


def _taylor_shift(c: list[Fraction], a: Fraction) -> list[Fraction]:
    """Coefficients of p(a + u) as a polynomial in u."""
    work = list(c)
    out = []
    while work:
        # synthetic division of work by (x - a): remainder is work(a)
        rem = work[-1]
        quo = []
        for i in range(len(work) - 2, -1, -1):
            quo.append(rem)
            rem = work[i] + rem * a
        quo.reverse()
        out.append(rem)
        work = quo
    return out


def _descartes_variations_01(c: list[Fraction]) -> int:
    """Sign variations bounding the number of roots of c in (0, 1)."""
    rev = list(reversed(c))  # t^n * c(1/t)
    return _variations(_taylor_shift(rev, Fraction(1)))


def _transform_to_01(c: list[int], a: Fraction, b: Fraction) -> list[Fraction]:
    """Coefficients of p(a + (b-a) t) as a polynomial in t."""
    width = b - a
    shifted = _taylor_shift([Fraction(x) for x in c], a)
    return [shifted[k] * width**k for k in range(len(shifted))]


def isolate(p, v: str | None = None) -> list[AlgebraicNumber]:
    """Isolate the distinct real roots of a univariate polynomial, ascending."""
    if isinstance(p, Polynomial):
        c = unipoly_from(p, v)
    else:
        c = trim([int(x) for x in p])
    if not c:
        raise RootIsolationError("zero polynomial has no isolated roots")
    return isolate_coeffs(c)


def _deflate(c: list[int], r: Fraction) -> list[int]:
    """Divide c exactly by (x - r) for a rational root r, clearing denominators."""
    out: list[Fraction] = []
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * r + coeff
        out.append(acc)
    # acc is the remainder c(r) = 0; out[:-1] reversed are quotient coeffs, high first
    quo = list(reversed(out[:-1]))
    den = 1
    for x in quo:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = trim([int(x * den) for x in quo])
    return uscale_content(ints) if ints else ints


def _descartes_count(c: list[int], a: Fraction, b: Fraction) -> int:
    return _descartes_variations_01(_transform_to_01(c, a, b))


def isolate_coeffs(c: list[int]) -> list[AlgebraicNumber]:
    if not c:
        raise RootIsolationError("zero polynomial")
    if deg(c) == 0:
        return []
    sf = usquarefree(c)
    if deg(sf) == 0:
        return []
    roots: list[AlgebraicNumber] = []

    def recurse(p: list[int], a: Fraction, b: Fraction):
        # invariant: p(a) != 0 and p(b) != 0; p divides sf (same roots there)
        if deg(p) == 0:
            return
        var = _descartes_count(p, a, b)
        if var == 0:
            return
        if var == 1:
            exact = None
            mid = simplest_in(a, b)
            if ueval(p, mid) == 0:
                exact = mid
            roots.append(AlgebraicNumber(p, a, b, exact=exact))
            return
        mid = (a + b) / 2
        if ueval(p, mid) != 0:
            recurse(p, a, mid)
            recurse(p, mid, b)
            return
        # rational root at the split point: record it and deflate
        rest = _deflate(p, mid)
        delta = (b - a) / 4
        while _descartes_count(rest, mid - delta, mid) != 0 or ueval(rest, mid - delta) == 0:
            delta /= 2
        roots.append(AlgebraicNumber(p, mid - delta, mid, exact=mid))
        recurse(rest, a, mid)
        recurse(rest, mid, b)

    B = root_bound(sf)
    recurse(sf, -B, B)
    roots.sort(key=lambda r: (r.lo + r.hi) / 2)
    separate(roots)
    roots.sort(key=lambda r: r.lo)
    return roots


def simplest_in(a: Fraction, b: Fraction) -> Fraction:
    """A rational with small denominator strictly inside (a, b)."""
    if a >= b:
        raise ValueError("empty interval")
    if a < 0 < b:
        return Fraction(0)
    if b <= 0:
        return -simplest_in(-b, -a)
    ia = a.numerator // a.denominator
    if b > ia + 1:
        return Fraction(ia + 1)
    if a == ia:
        n = (1 / (b - ia)).__floor__() + 1
        return ia + Fraction(1, n)
    return ia + 1 / simplest_in(1 / (b - ia), 1 / (a - ia))


def separate(roots: list[AlgebraicNumber]) -> None:
    """Refine until every pair of isolating intervals is disjoint."""
    changed = True
    while changed:
        changed = False
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                a, b = roots[i], roots[j]
                if not (a.hi < b.lo or b.hi < a.lo):
                    a.refine()
                    b.refine()
                    changed = True


def ndrr(polys, v: str | None = None) -> int:
    """Distinct real roots of a set of univariate polynomials, shared counted once."""
    coeff_lists = []
    for p in polys:
        c = unipoly_from(p, v) if isinstance(p, Polynomial) else trim([int(x) for x in p])
        if not c:
            raise RootIsolationError("ndrr rejects the zero polynomial")
        coeff_lists.append(c)
    if not coeff_lists:
        return 0
    prod = [1]
    for c in coeff_lists:
        prod = umul(prod, c)
    sf = usquarefree(prod)
    return len(isolate_coeffs(sf))


def interval_eval(c, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Bounds on a univariate integer polynomial over [lo, hi]."""
    blo = bhi = Fraction(c[-1])
    for coeff in reversed(c[:-1]):
        cands = (blo * lo, blo * hi, bhi * lo, bhi * hi)
        blo, bhi = min(cands) + coeff, max(cands) + coeff
    return blo, bhi


def sign_at(p, alpha: AlgebraicNumber, v: str | None = None) -> int:
    """Exact sign of a univariate polynomial at an algebraic number."""
    c = unipoly_from(p, v) if isinstance(p, Polynomial) else trim([int(x) for x in p])
    if not c:
        return 0
    if alpha.exact is not None:
        val = ueval(c, alpha.exact)
        return 0 if val == 0 else (1 if val > 0 else -1)
    c = uscale_content(c)
    # cheap interval screening first
    for _ in range(8):
        blo, bhi = interval_eval(c, alpha.lo, alpha.hi)
        if blo > 0:
            return 1
        if bhi < 0:
            return -1
        alpha.refine()
    # zero test: the gcd with the square-free defining has simple roots and
    # nonzero values at the interval endpoints, so a sign change decides
    g = ugcd(list(alpha.coeffs), c)
    if deg(g) >= 1:
        glo = ueval(g, alpha.lo)
        ghi = ueval(g, alpha.hi)
        if glo == 0 or ghi == 0:
            raise RootIsolationError("isolating interval endpoint roots the defining gcd")
        if (glo > 0) != (ghi > 0):
            return 0
    # provably nonzero: refinement must eventually decide
    while True:
        blo, bhi = interval_eval(c, alpha.lo, alpha.hi)
        if blo > 0:
            return 1
        if bhi < 0:
            return -1
        alpha.refine()


def sample_between(roots: list[AlgebraicNumber]) -> list[Fraction]:
    """Rationals strictly interleaving the given ascending roots."""
    if not roots:
        return [Fraction(0)]
    separate(roots)
    samples = [roots[0].lo - 1]
    for a, b in zip(roots, roots[1:]):
        samples.append(Fraction(a.hi + b.lo, 2))
    samples.append(roots[-1].hi + 1)
    return samples
