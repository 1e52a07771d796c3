"""Order-sensitive model of the complex cylindrical tree built by constraint.

The tree starts as one empty branch and is refined constraint by constraint
in the ordering's induced total order.  Refining branch b by constraint c
with polynomial p:

* branches where an equality of c's clause is already known nonzero are
  skipped (the pruning that makes the construction order-sensitive);
* if the leading coefficient of p in its main variable involves lower
  variables, b splits on lc = 0 / lc != 0 and the reductum is processed in
  the lc = 0 child (degree-drop handling);
* the discriminant of p, and resultants of p with already-equated
  polynomials at the same level, are derived.  Derived polynomials are
  either *cutting* (they dissect real cells globally: discriminants of a
  clause's first-processed constraint, resultants within one clause, and
  resultants between two first-processed constraints) or *recorded only*
  (the tree keeps them and the size measure counts them, but real
  refinement never cuts on them: they stand for work done modulo an
  earlier equality);
* b splits into a child with p = 0 and a child with p != 0.  For an
  equality the nonzero child has the clause marked failed, so later
  constraints of that clause never refine it.  The p = 0 child also gains
  the derived resultants as equated conditions at their own levels: the
  branch is only consistent with base cells on which those vanish, which
  is what confines a later equality's cuts to the base points where it can
  matter.

Partner scope for derived resultants: only already-equated polynomials
stemming from the same clause or from a first-processed constraint.  A
pair of non-first equalities of two different clauses is handled modulo
the respective first equalities and leaves no trace here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .elim import discriminant, resultant
from .polys import NEG_INF, Polynomial
from .formulation import (
    ConstraintOrdering,
    FormulationError,
    Problem,
    validate_ordering,
)


LIVE = "live"
EC_FAILED = "ec_failed"


@dataclass(frozen=True)
class ConstraintRef:
    """One constraint occurrence within a problem, with its ordering role."""

    cid: int
    clause: int
    is_ec: bool
    relation: str
    poly: Polynomial
    first_class: bool  # first-processed EC of its clause, or any constraint
    #                    of a clause without ECs (always sign-invariant)


@dataclass
class Branch:
    equated: dict        # level -> list of [poly, set of cids]
    nonzero: dict        # level -> list of [poly, set of cids]
    clause_state: list
    infeasible: bool = False

    @classmethod
    def root(cls, n_clauses: int) -> "Branch":
        return cls({}, {}, [LIVE] * n_clauses)

    def clone(self) -> "Branch":
        return Branch(
            {lv: [[p, set(s)] for p, s in rows] for lv, rows in self.equated.items()},
            {lv: [[p, set(s)] for p, s in rows] for lv, rows in self.nonzero.items()},
            list(self.clause_state),
            self.infeasible,
        )

    def find_equated(self, level: int, poly: Polynomial):
        for row in self.equated.get(level, ()):
            if row[0] == poly:
                return row
        return None

    def find_nonzero(self, level: int, poly: Polynomial):
        for row in self.nonzero.get(level, ()):
            if row[0] == poly:
                return row
        return None

    def add_equated(self, level: int, poly: Polynomial, cids: set):
        self.equated.setdefault(level, []).append([poly, set(cids)])

    def add_nonzero(self, level: int, poly: Polynomial, cids: set):
        self.nonzero.setdefault(level, []).append([poly, set(cids)])


@dataclass
class PolyEntry:
    poly: Polynomial
    level: int          # index of the main variable; -1 for constants
    kind: str           # input | disc | res | lc
    cutting: bool       # dissects real cells at its level
    unconditional: bool  # cuts over open cells (not confined by conditions)
    sources: set = field(default_factory=set)


@dataclass
class CCTree:
    prob: Problem
    ordering: ConstraintOrdering
    branches: list
    polyset: dict       # Polynomial -> PolyEntry
    constraints: list   # list[ConstraintRef]

    def level_of(self, poly: Polynomial) -> int:
        v = poly.main_variable()
        return -1 if v is None else self.prob.order.index(v)

    def global_cuts(self, level: int) -> list[Polynomial]:
        """Derived polynomials that dissect real cells at this level on every
        branch; input polynomials cut only through branch consistency."""
        out = []
        for entry in self.polyset.values():
            if (
                entry.cutting
                and entry.kind != "input"
                and entry.level == level
                and not entry.poly.is_constant()
            ):
                out.append(entry.poly)
        return out

    def closure_base(self, level: int) -> list[Polynomial]:
        """Polynomials whose cuts reach every open base cell at this level:
        the starting set for the projection closure of the real refinement."""
        out = []
        for entry in self.polyset.values():
            if (
                entry.cutting
                and entry.unconditional
                and entry.level == level
                and not entry.poly.is_constant()
            ):
                out.append(entry.poly)
        return out


def constraint_refs(prob: Problem, o: ConstraintOrdering) -> list[ConstraintRef]:
    """Constraints in processing order, annotated with their ordering role."""
    refs = []
    cid = 0
    for ci, kind, j in o.processing_order(prob):
        cl = prob.clauses[ci]
        if kind == "ec":
            c = cl.ecs[j]
            first = j == o.ec_perms[ci][0]
        else:
            c = cl.others[j]
            first = len(cl.ecs) == 0
        refs.append(ConstraintRef(cid, ci, c.is_ec, c.relation, c.poly, first))
        cid += 1
    return refs


def build_ccd(prob: Problem, o: ConstraintOrdering) -> CCTree:
    validate_ordering(prob, o)
    refs = constraint_refs(prob, o)
    for ref in refs:
        if ref.poly.is_constant():
            raise FormulationError("constraint polynomial is constant")
    tree = CCTree(prob, o, [Branch.root(len(prob.clauses))], {}, refs)
    for ref in refs:
        _record(tree, ref.poly, "input", cutting=True, unconditional=ref.first_class,
                sources={ref.cid})
        new_branches = []
        for b in tree.branches:
            if b.infeasible or b.clause_state[ref.clause] == EC_FAILED:
                new_branches.append(b)
                continue
            new_branches.extend(_refine(tree, b, ref, ref.poly))
        tree.branches = new_branches
    return tree


def _record(tree: CCTree, poly: Polynomial, kind: str, cutting: bool,
            unconditional: bool, sources: set) -> None:
    entry = tree.polyset.get(poly)
    if entry is None:
        tree.polyset[poly] = PolyEntry(
            poly, tree.level_of(poly), kind, cutting, unconditional, set(sources)
        )
    else:
        entry.cutting = entry.cutting or cutting
        entry.unconditional = entry.unconditional or unconditional
        entry.sources |= sources


def _refine(tree: CCTree, b: Branch, ref: ConstraintRef, poly: Polynomial) -> list[Branch]:
    """Refine one live branch by one constraint, handling degree drops."""
    # unravel the leading coefficient chain first
    definite: list[tuple[Branch, Polynomial]] = []
    pending = [(b, poly)]
    while pending:
        br, q = pending.pop()
        if q.is_zero() or q.is_constant():
            definite.append((br, q))
            continue
        v = q.main_variable()
        lc = q.lc_in(v)
        if lc.is_constant():
            definite.append((br, q))
            continue
        _record(tree, lc, "lc", cutting=True, unconditional=True, sources={ref.cid})
        bz = br.clone()
        bz.add_equated(tree.level_of(lc), lc, {ref.cid})
        bnz = br.clone()
        bnz.add_nonzero(tree.level_of(lc), lc, {ref.cid})
        pending.append((bz, q.reductum_in(v)))
        definite.append((bnz, q))

    out = []
    for br, q in definite:
        if q.is_zero():
            # constraint trivially reduces to 0 = 0: an equality holds,
            # another relation is settled by sign; either way no split
            out.append(br)
            continue
        if q.is_constant():
            if ref.is_ec:
                br.clause_state[ref.clause] = EC_FAILED
            out.append(br)
            continue
        if q != ref.poly:
            # degree-dropped remainder on a vanishing-lead branch
            _record(tree, q, "reductum", cutting=True, unconditional=False,
                    sources={ref.cid})
        out.extend(_split(tree, br, ref, q))
    return out


def _split(tree: CCTree, br: Branch, ref: ConstraintRef, q: Polynomial) -> list[Branch]:
    v = q.main_variable()
    level = tree.prob.order.index(v)

    if br.find_nonzero(level, q) is not None:
        if ref.is_ec:
            br.clause_state[ref.clause] = EC_FAILED
        return [br]

    conditions = _derive(tree, br, ref, q, level)

    existing = br.find_equated(level, q)
    if existing is not None:
        # already equated (e.g. a shared equality between clauses): no split
        existing[1].add(ref.cid)
        for cond in conditions:
            _apply_condition(tree, br, cond, ref)
        return [br]

    bz = br.clone()
    bz.add_equated(level, q, {ref.cid})
    for cond in conditions:
        _apply_condition(tree, bz, cond, ref)
    bnz = br.clone()
    bnz.add_nonzero(level, q, {ref.cid})
    if ref.is_ec:
        bnz.clause_state[ref.clause] = EC_FAILED
    return [bz, bnz]


def _derive(tree: CCTree, br: Branch, ref: ConstraintRef, q: Polynomial, level: int):
    """Derive the discriminant and partner resultants; return the equated
    conditions the q = 0 child must carry."""
    v = q.main_variable()
    disc = discriminant(q, v)
    _record(tree, disc, "disc", cutting=ref.first_class,
            unconditional=ref.first_class, sources={ref.cid})

    conditions = []
    for row in br.equated.get(level, ()):
        r, sources = row
        if r == q:
            _record(tree, Polynomial.zero(q.order), "res", cutting=False,
                    unconditional=False, sources={ref.cid} | sources)
            continue
        partner_same_clause = any(
            tree.constraints[cid].clause == ref.clause for cid in sources
        )
        partner_first = any(tree.constraints[cid].first_class for cid in sources)
        if not (partner_same_clause or partner_first):
            continue  # handled modulo earlier equalities; leaves no trace
        res = resultant(r, q, v)
        cutting = partner_same_clause or (ref.first_class and partner_first)
        _record(tree, res, "res", cutting=cutting, unconditional=cutting,
                sources={ref.cid} | sources)
        conditions.append((res, {ref.cid} | sources))
    return conditions


def _apply_condition(tree: CCTree, br: Branch, cond, ref: ConstraintRef) -> None:
    res, sources = cond
    if res.is_zero():
        return  # identical pair: no constraint on the base
    if res.is_constant():
        br.infeasible = True  # the two equalities never meet
        return
    level = tree.level_of(res)
    if br.find_equated(level, res) is None:
        br.add_equated(level, res, sources)


def tree_polyset(tree: CCTree) -> list[Polynomial]:
    """All polynomials the tree used, canonically ordered."""
    return sorted(tree.polyset, key=lambda p: (tree.polyset[p].level, p.sort_key()))


def ccd_measure(tree: CCTree) -> int:
    """Sum over the polyset of each polynomial's degree in its own main
    variable; constants (and the zero polynomial) contribute nothing."""
    total = 0
    for poly in tree.polyset:
        v = poly.main_variable()
        if v is None:
            continue
        d = poly.degree_in(v)
        total += 0 if d is NEG_INF else int(d)
    return total


def dump_tree(tree: CCTree) -> dict:
    """JSON-ready structure: branches with per-level content, polyset with
    provenance, used by tests and the CLI --explain flag."""
    names = tree.prob.order.names

    def polytext(p):
        return str(p)

    branches = []
    for b in tree.branches:
        branches.append(
            {
                "equated": {
                    names[lv]: [
                        {"poly": polytext(p), "sources": sorted(s)} for p, s in rows
                    ]
                    for lv, rows in sorted(b.equated.items())
                },
                "nonzero": {
                    names[lv]: [
                        {"poly": polytext(p), "sources": sorted(s)} for p, s in rows
                    ]
                    for lv, rows in sorted(b.nonzero.items())
                },
                "clause_state": list(b.clause_state),
                "infeasible": b.infeasible,
            }
        )
    polyset = []
    for p in tree_polyset(tree):
        e = tree.polyset[p]
        polyset.append(
            {
                "poly": polytext(p),
                "level": names[e.level] if e.level >= 0 else None,
                "kind": e.kind,
                "cutting": e.cutting,
                "unconditional": e.unconditional,
                "sources": sorted(e.sources),
            }
        )
    return {
        "format": 1,
        "variables": list(names),
        "branches": branches,
        "polyset": polyset,
    }


def dump_tree_json(tree: CCTree) -> str:
    return json.dumps(dump_tree(tree), indent=2, sort_keys=True)
