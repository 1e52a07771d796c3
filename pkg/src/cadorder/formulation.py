"""Formula model, constraint-ordering enumeration, ordering sets, heuristics.

An ordering fixes the clause processing order and, per clause, the order of
its equality constraints; equalities of a clause are processed first, then
its other constraints in input order.  The ordering set of an ordering
collects the discriminants of the first-processed equality of each clause
and their pairwise resultants, all in the greatest variable; the three
selection heuristics rank orderings by measures of that set or of the
cylindrical tree built from it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .elim import discriminant, resultant
from .polys import NEG_INF, Polynomial, VariableOrder, sotd


RELATIONS = ("=0", "!=0", "<0", ">0", "<=0", ">=0")


class FormulationError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    poly: Polynomial
    relation: str

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise FormulationError(f"unknown relation {self.relation!r}")
        if self.poly.is_zero():
            raise FormulationError("constraint polynomial must be nonzero")

    @property
    def is_ec(self) -> bool:
        return self.relation == "=0"

    def satisfied_by_sign(self, sign: int) -> bool:
        rel = self.relation
        if rel == "=0":
            return sign == 0
        if rel == "!=0":
            return sign != 0
        if rel == "<0":
            return sign < 0
        if rel == ">0":
            return sign > 0
        if rel == "<=0":
            return sign <= 0
        return sign >= 0


@dataclass(frozen=True)
class Clause:
    label: str
    ecs: tuple[Constraint, ...]
    others: tuple[Constraint, ...]

    def __post_init__(self):
        if any(not c.is_ec for c in self.ecs):
            raise FormulationError("ecs must all have relation =0")
        if any(c.is_ec for c in self.others):
            raise FormulationError("non-EC list contains an equation")

    @property
    def constraints(self) -> tuple[Constraint, ...]:
        return self.ecs + self.others


@dataclass(frozen=True)
class Problem:
    order: VariableOrder
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if not self.clauses:
            raise FormulationError("a problem needs at least one clause")
        for cl in self.clauses:
            for c in cl.constraints:
                if c.poly.order.names != self.order.names:
                    raise FormulationError("constraint uses a foreign variable context")


@dataclass(frozen=True)
class ConstraintOrdering:
    """A clause permutation plus one EC permutation per original clause."""

    formula_perm: tuple[int, ...]
    ec_perms: tuple[tuple[int, ...], ...]

    def first_ec_index(self, clause_idx: int) -> int | None:
        perm = self.ec_perms[clause_idx]
        return perm[0] if perm else None

    def describe(self, prob: Problem) -> str:
        clauses = ">".join(prob.clauses[i].label for i in self.formula_perm)
        parts = [clauses]
        for ci, perm in enumerate(self.ec_perms):
            if perm:
                parts.append(f"{prob.clauses[ci].label}:ec[{','.join(map(str, perm))}]")
        return " ".join(parts)

    def processing_order(self, prob: Problem):
        """Total constraint order: per clause, ECs then the rest."""
        out = []
        for ci in self.formula_perm:
            cl = prob.clauses[ci]
            for j in self.ec_perms[ci]:
                out.append((ci, "ec", j))
            for k in range(len(cl.others)):
                out.append((ci, "ne", k))
        return out


def validate_ordering(prob: Problem, o: ConstraintOrdering) -> None:
    n = len(prob.clauses)
    if sorted(o.formula_perm) != list(range(n)) or len(o.ec_perms) != n:
        raise FormulationError("ordering does not match the problem shape")
    for ci, perm in enumerate(o.ec_perms):
        if sorted(perm) != list(range(len(prob.clauses[ci].ecs))):
            raise FormulationError(f"bad EC permutation for clause {ci}")


def enumerate_orderings(prob: Problem) -> list[ConstraintOrdering]:
    """All orderings, lexicographic: clause permutations outermost, then EC
    permutations per original clause index.  Non-EC order stays as input.
    """
    ec_perm_options = [
        list(itertools.permutations(range(len(cl.ecs)))) for cl in prob.clauses
    ]
    out = []
    for fperm in itertools.permutations(range(len(prob.clauses))):
        for combo in itertools.product(*ec_perm_options):
            out.append(ConstraintOrdering(fperm, tuple(combo)))
    return out


@dataclass(frozen=True)
class ConstraintOrderingSet:
    polys: frozenset[Polynomial]

    def sorted_polys(self) -> list[Polynomial]:
        return sorted(self.polys, key=lambda p: p.sort_key())

    def sotd(self) -> int:
        return sotd(self.polys)


def first_ec_polys(prob: Problem, o: ConstraintOrdering) -> list[Polynomial]:
    """First-processed EC polynomial per clause, in original clause order."""
    out = []
    for ci, cl in enumerate(prob.clauses):
        j = o.first_ec_index(ci)
        if j is not None:
            out.append(cl.ecs[j].poly)
    return out


def constraint_ordering_set(prob: Problem, o: ConstraintOrdering) -> ConstraintOrderingSet:
    """Discriminants and cross resultants, in the greatest variable, of the
    first-processed EC of each clause.  A polynomial shared as first EC by
    two clauses enters once; the duplicated pair contributes res(p, p) = 0.
    """
    validate_ordering(prob, o)
    firsts = first_ec_polys(prob, o)
    if not firsts:
        raise FormulationError("no clause has an equational constraint")
    v = prob.order.greatest
    distinct: list[Polynomial] = []
    duplicated = False
    for p in firsts:
        if p in distinct:
            duplicated = True
        else:
            distinct.append(p)
    members: set[Polynomial] = set()
    for p in distinct:
        members.add(discriminant(p, v))
    for i in range(len(distinct)):
        for j in range(i + 1, len(distinct)):
            members.add(resultant(distinct[i], distinct[j], v))
    if duplicated:
        members.add(Polynomial.zero(prob.order))
    return ConstraintOrderingSet(frozenset(members))


def measure_degsum(C: ConstraintOrderingSet, prob: Problem) -> int:
    """Sum of degrees in the second-greatest variable; zero counts as 0."""
    v = prob.order.second_greatest
    total = 0
    for p in C.polys:
        d = p.degree_in(v)
        total += 0 if d is NEG_INF else int(d)
    return total


@dataclass
class RankedOrdering:
    index: int                      # position in enumerate_orderings
    ordering: ConstraintOrdering
    degsum: int | None = None
    sotd: int | None = None
    tree_measure: int | None = None
    error: str | None = None


@dataclass
class HeuristicResult:
    name: str
    ranking: list[RankedOrdering]   # best first
    shortlist: list[RankedOrdering]  # minimal tie group, enumeration order
    trees: dict = field(default_factory=dict)  # ordering index -> CCTree


def heuristic1(prob: Problem) -> HeuristicResult:
    """Rank by ordering-set degree sum, ties broken by sotd; remaining ties
    form the shortlist in enumeration order.
    """
    rows = []
    cache: dict = {}
    for idx, o in enumerate(enumerate_orderings(prob)):
        key = tuple(first_ec_polys(prob, o))
        if key not in cache:
            cache[key] = constraint_ordering_set(prob, o)
        C = cache[key]
        rows.append(
            RankedOrdering(idx, o, degsum=measure_degsum(C, prob), sotd=C.sotd())
        )
    ranking = sorted(rows, key=lambda r: (r.degsum, r.sotd, r.index))
    best = (ranking[0].degsum, ranking[0].sotd)
    shortlist = [r for r in rows if (r.degsum, r.sotd) == best]
    return HeuristicResult("h1", ranking, shortlist)


def heuristic2(prob: Problem, candidates: list[ConstraintOrdering]) -> HeuristicResult:
    """Build the cylindrical tree per candidate and rank by its size measure."""
    from .cctree import build_ccd, ccd_measure

    if not candidates:
        raise FormulationError("heuristic2 needs candidates")
    all_orderings = enumerate_orderings(prob)
    index_of = {o: i for i, o in enumerate(all_orderings)}
    rows = []
    trees = {}
    for o in candidates:
        idx = index_of.get(o)
        if idx is None:
            raise FormulationError("candidate is not an ordering of this problem")
        row = RankedOrdering(idx, o)
        try:
            tree = build_ccd(prob, o)
            trees[idx] = tree
            row.tree_measure = ccd_measure(tree)
        except Exception as exc:  # recorded, ranked last
            row.error = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    ok = [r for r in rows if r.error is None]
    bad = [r for r in rows if r.error is not None]
    ranking = sorted(ok, key=lambda r: (r.tree_measure, r.index)) + bad
    best = ranking[0].tree_measure if ranking and ranking[0].error is None else None
    shortlist = [r for r in rows if r.error is None and r.tree_measure == best]
    return HeuristicResult("h2", ranking, shortlist, trees)


def heuristic3(prob: Problem) -> RankedOrdering:
    """Shortlist by heuristic1, refine by heuristic2, then first in
    enumeration order.  Always returns exactly one ordering.
    """
    h1 = heuristic1(prob)
    if len(h1.shortlist) == 1:
        return h1.shortlist[0]
    h2 = heuristic2(prob, [r.ordering for r in h1.shortlist])
    return min(h2.shortlist, key=lambda r: r.index)


def rank_by_sotd(prob: Problem) -> list[RankedOrdering]:
    """Diagnostic ranking on sotd alone (the measure the degree sum replaces)."""
    h1 = heuristic1(prob)
    return sorted(h1.ranking, key=lambda r: (r.sotd, r.index))


def single_ec_first_orderings(prob: Problem, orderings) -> list[ConstraintOrdering]:
    """Keep orderings that put every single-EC clause before multi-EC clauses."""
    single = {i for i, cl in enumerate(prob.clauses) if len(cl.ecs) == 1}
    multi = {i for i, cl in enumerate(prob.clauses) if len(cl.ecs) > 1}
    if not single or not multi:
        return list(orderings)
    out = []
    for o in orderings:
        pos = {ci: k for k, ci in enumerate(o.formula_perm)}
        if max(pos[i] for i in single) < min(pos[i] for i in multi):
            out.append(o)
    return out


def advise(prob: Problem, heuristic: str = "h1", single_ec_first: bool = False) -> dict:
    """Run a heuristic and emit a deterministic report structure."""
    if heuristic not in ("h1", "h2", "h3"):
        raise FormulationError(f"unknown heuristic {heuristic!r}")
    all_orderings = enumerate_orderings(prob)
    allowed = all_orderings
    if single_ec_first:
        allowed = single_ec_first_orderings(prob, all_orderings)
    allowed_idx = {id_ for id_, o in enumerate(all_orderings) if o in allowed}

    h1 = heuristic1(prob)
    by_index = {r.index: r for r in h1.ranking}
    rows = []
    for idx, o in enumerate(all_orderings):
        r = by_index[idx]
        rows.append(
            {
                "ordering": idx,
                "descriptor": o.describe(prob),
                "degsum": r.degsum,
                "sotd": r.sotd,
                "ccd_measure": None,
                "allowed": idx in allowed_idx,
            }
        )

    h1_rank = [r for r in h1.ranking if r.index in allowed_idx]
    shortlist = [r for r in h1.shortlist if r.index in allowed_idx]

    if heuristic == "h1":
        selected = [r.index for r in shortlist]
        order_of_rank = [r.index for r in h1_rank]
    elif heuristic == "h2":
        h2 = heuristic2(prob, [all_orderings[i] for i in sorted(allowed_idx)])
        for r in h2.ranking:
            rows[r.index]["ccd_measure"] = r.tree_measure
            if r.error:
                rows[r.index]["error"] = r.error
        selected = [r.index for r in h2.shortlist]
        order_of_rank = [r.index for r in h2.ranking]
    else:
        if len(shortlist) == 1:
            chosen = shortlist[0]
        else:
            h2 = heuristic2(prob, [r.ordering for r in shortlist])
            for r in h2.ranking:
                rows[r.index]["ccd_measure"] = r.tree_measure
            chosen = min(h2.shortlist, key=lambda r: r.index)
        selected = [chosen.index]
        order_of_rank = [r.index for r in h1_rank]
        # h3's pick leads the ranking
        order_of_rank = [chosen.index] + [i for i in order_of_rank if i != chosen.index]

    for rank_pos, idx in enumerate(order_of_rank, start=1):
        rows[idx]["rank"] = rank_pos

    return {
        "format": 1,
        "heuristic": heuristic,
        "single_ec_first": single_ec_first,
        "rows": rows,
        "ranking": order_of_rank,
        "selected": selected,
        "chosen": selected[0] if heuristic == "h3" else None,
    }
