"""Refine a cylindrical tree to a CAD of real space and check it.

Lifting is branch-aware: over each cell the next-level stack is cut by

* the tree's globally-cutting derived polynomials at that level, closed
  under discriminant / leading-coefficient-chain / pairwise-resultant
  projection so stack counts stay stable across every open base cell, and
* the equated polynomials of tree branches whose lower-level conditions
  hold at the cell's sample.  A branch carrying an implied resultant
  condition is only consistent over the base points where that resultant
  vanishes, which is what confines a later equality's sections to the base
  points where the clause can still hold.

Recorded-only polynomials of the tree never cut, so the induced dissection
of the real line is exactly the ordering-sensitive one the tree prescribes.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .cctree import CCTree, build_ccd
from .elim import squarefree_part
from .formulation import ConstraintOrdering, Problem
from .points import sign_eval, stack_roots
from .polys import Polynomial
from .realroots import AlgebraicNumber, sample_between


class CADTimeout(Exception):
    pass


@dataclass
class Cell:
    index: tuple[int, ...]
    sample: tuple                 # Fraction | AlgebraicNumber per level
    signs: dict                   # constraint Polynomial -> -1 | 0 | +1
    truth: tuple[bool, ...]       # per clause
    bounds: tuple                 # per level: (lo, hi), None for unbounded
    stack_sizes: tuple[int, ...]  # sections per level along this cell's chain

    def is_full_dimensional(self) -> bool:
        return all(i % 2 == 1 for i in self.index)


@dataclass
class CADResult:
    prob: Problem
    ordering: ConstraintOrdering
    tree: CCTree
    cells: list
    line_points: list             # level-0 section points, ascending
    stats: dict
    builder: "CADBuilder" = None


@dataclass
class Verdict:
    passed: bool
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


class CADBuilder:
    def __init__(self, tree: CCTree, deadline: float | None = None):
        self.tree = tree
        self.prob = tree.prob
        self.names = tree.prob.order.names
        self.deadline = deadline
        self.cache: dict = {}
        self._norm_cache: dict = {}
        self.branches = [b for b in tree.branches if not b.infeasible]
        self.global_cuts = self._closed_global_cuts()
        self.constraint_polys = []
        for cl in self.prob.clauses:
            for c in cl.constraints:
                if c.poly not in self.constraint_polys:
                    self.constraint_polys.append(c.poly)

    # -- cut sets ---------------------------------------------------------

    def _normalize(self, p: Polynomial) -> Polynomial:
        out = self._norm_cache.get(p)
        if out is None:
            v = p.main_variable()
            out = squarefree_part(p, v).primitive_int().normalize_sign() if v else p
            self._norm_cache[p] = out
        return out

    def _closed_global_cuts(self) -> dict:
        """Globally cutting polynomials per level, plus the projection closure
        of everything that cuts over open base cells."""
        n = len(self.names)
        from .elim import discriminant, resultant

        cuts: dict[int, list] = {lv: [] for lv in range(n)}
        closure: dict[int, list] = {lv: [] for lv in range(n)}

        def add(table, lv, poly):
            if poly.is_zero() or poly.is_constant():
                return
            q = self._normalize(poly)
            if q not in table[lv]:
                table[lv].append(q)

        for lv in range(n):
            for p in self.tree.global_cuts(lv):
                add(cuts, lv, p)
            for p in self.tree.closure_base(lv):
                add(closure, lv, p)

        for lv in range(n - 1, 0, -1):
            group = list(closure[lv])
            v = self.names[lv]
            for D in group:
                # leading-coefficient chain: successive leads until constant
                q = D
                while True:
                    lc = q.lc_in(v)
                    if lc.is_constant():
                        break
                    add(cuts, self.tree.level_of(lc), lc)
                    add(closure, self.tree.level_of(lc), lc)
                    q = q.reductum_in(v)
                    if q.is_zero() or q.main_variable() != v:
                        break
                d = D.degree_in(v)
                if d != float("-inf") and int(d) >= 2:
                    disc = discriminant(D, v)
                    if not disc.is_zero():
                        add(cuts, self.tree.level_of(disc), disc)
                        add(closure, self.tree.level_of(disc), disc)
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    res = resultant(group[i], group[j], v)
                    if not res.is_zero():
                        add(cuts, self.tree.level_of(res), res)
                        add(closure, self.tree.level_of(res), res)
        return cuts

    def _branch_consistent(self, bidx: int, branch, sample: dict, level: int) -> bool:
        key = ("cons", bidx, level, tuple(sorted((v, id(x)) for v, x in sample.items())))
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        ok = True
        for lv in range(level):
            for poly, _ in branch.equated.get(lv, ()):
                if sign_eval(poly, sample, self.cache) != 0:
                    ok = False
                    break
            if not ok:
                break
            for poly, _ in branch.nonzero.get(lv, ()):
                if sign_eval(poly, sample, self.cache) == 0:
                    ok = False
                    break
            if not ok:
                break
        self.cache[key] = ok
        return ok

    def cuts_at(self, level: int, sample: dict) -> list[Polynomial]:
        out = list(self.global_cuts[level])
        polyset = self.tree.polyset
        for bidx, branch in enumerate(self.branches):
            rows = branch.equated.get(level)
            if not rows:
                continue
            consistent = None
            for poly, _ in rows:
                entry = polyset.get(poly)
                if entry is None or not entry.cutting:
                    continue  # recorded-only: a consistency condition, not a cut
                if consistent is None:
                    consistent = self._branch_consistent(bidx, branch, sample, level)
                if not consistent:
                    break
                q = self._normalize(poly)
                if q not in out:
                    out.append(q)
        return out

    # -- lifting ----------------------------------------------------------

    def build(self) -> CADResult:
        t0 = time.monotonic()
        self.cells: list[Cell] = []
        self.line_points: list[AlgebraicNumber] = []
        self._lift({}, (), (), ())
        duration = time.monotonic() - t0
        stats = {
            "cells": len(self.cells),
            "seconds": round(duration, 3),
        }
        return CADResult(
            self.prob, self.tree.ordering, self.tree, self.cells,
            self.line_points, stats, builder=self,
        )

    def _check_deadline(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise CADTimeout("CAD construction exceeded its budget")

    def stack_at(self, sample: dict, level: int):
        """Sections (root, vanishers) of the cut set over a sample prefix."""
        cuts = self.cuts_at(level, sample)
        return stack_roots(cuts, self.names[level], sample, self.cache)

    def _lift(self, sample: dict, index: tuple, bounds: tuple, sizes: tuple):
        self._check_deadline()
        level = len(index)
        fiber = self.names[level]
        sections = self.stack_at(sample, level)
        roots = [r for r, _ in sections]
        if level == 0:
            self.line_points = roots
        sectors = sample_between(roots)
        m = len(roots)
        entries = [(1, sectors[0], None, roots[0] if m else None)]
        for pos in range(m):
            entries.append((2 * pos + 2, roots[pos], roots[pos], roots[pos]))
            hi = roots[pos + 1] if pos + 1 < m else None
            entries.append((2 * pos + 3, sectors[pos + 1], roots[pos], hi))
        for idx, coord, lo, hi in entries:
            sub = dict(sample)
            sub[fiber] = coord
            if level == len(self.names) - 1:
                self._finalize(sub, index + (idx,), bounds + ((lo, hi),), sizes + (m,))
            else:
                self._lift(sub, index + (idx,), bounds + ((lo, hi),), sizes + (m,))

    def _finalize(self, sample: dict, index: tuple, bounds: tuple, sizes: tuple):
        signs = {}
        for p in self.constraint_polys:
            signs[p] = sign_eval(p, sample, self.cache)
        truth = tuple(
            all(c.satisfied_by_sign(signs[c.poly]) for c in cl.constraints)
            for cl in self.prob.clauses
        )
        coords = tuple(sample[v] for v in self.names)
        self.cells.append(Cell(index, coords, signs, truth, bounds, sizes))


def refine_to_cad(tree: CCTree, prob: Problem, deadline: float | None = None) -> CADResult:
    if tree.prob is not prob and tree.prob.order.names != prob.order.names:
        raise ValueError("tree was built for a different problem")
    return CADBuilder(tree, deadline=deadline).build()


def build_cad(prob: Problem, ordering: ConstraintOrdering, deadline=None) -> CADResult:
    return refine_to_cad(build_ccd(prob, ordering), prob, deadline=deadline)


def induced_line_points(result: CADResult) -> list[AlgebraicNumber]:
    """Level-one section points, ascending, with defining polynomials."""
    return list(result.line_points)


# -- truth-table invariance ---------------------------------------------------


def _rand_fraction(rng, lo: Fraction, hi: Fraction) -> Fraction:
    num = rng.randint(1, 63)
    return lo + (hi - lo) * Fraction(num, 64)


def _coord_interval(coord):
    if isinstance(coord, AlgebraicNumber):
        return coord.lo, coord.hi
    return coord, coord


def _draw_in_sector(rng, lo, hi) -> Fraction:
    """A random rational strictly between two stack roots (None = infinite)."""
    if lo is None and hi is None:
        return Fraction(rng.randint(-8, 8))
    if lo is None:
        a, _ = _coord_interval(hi)
        return a - 1 - Fraction(rng.randint(0, 16), 4)
    if hi is None:
        _, b = _coord_interval(lo)
        return b + 1 + Fraction(rng.randint(0, 16), 4)
    if isinstance(lo, AlgebraicNumber) and isinstance(hi, AlgebraicNumber):
        from .realroots import separate

        separate([lo, hi])
    _, a = _coord_interval(lo)
    b, _ = _coord_interval(hi)
    if not a < b:
        a, b = a, a + Fraction(1, 10**9)  # degenerate; caller re-checks truth anyway
    return _rand_fraction(rng, a, b)


def _truth_at_rational(prob: Problem, point: dict) -> tuple:
    out = []
    for cl in prob.clauses:
        ok = True
        for c in cl.constraints:
            val = c.poly.evaluate(point)
            sign = 0 if val == 0 else (1 if val > 0 else -1)
            if not c.satisfied_by_sign(sign):
                ok = False
                break
        out.append(ok)
    return tuple(out)


def check_truth_invariance(result: CADResult, prob: Problem, k: int = 5, seed: int = 0) -> Verdict:
    """Redraw k rational points inside every full-dimensional cell and compare
    clause truth vectors; lower-dimensional cells are re-checked at their
    recorded sample."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rng = random.Random(seed)
    builder = result.builder
    witnesses = []
    names = prob.order.names
    fresh_cache: dict = {}
    for cell in result.cells:
        if not cell.is_full_dimensional():
            signs = {p: sign_eval(p, dict(zip(names, cell.sample)), fresh_cache)
                     for p in set(c.poly for cl in prob.clauses for c in cl.constraints)}
            truth = tuple(
                all(c.satisfied_by_sign(signs[c.poly]) for c in cl.constraints)
                for cl in prob.clauses
            )
            if truth != cell.truth:
                witnesses.append(
                    f"cell {cell.index}: recorded truth {cell.truth} but sample re-check gives {truth}"
                )
            continue
        for _ in range(k):
            point: dict = {}
            ok = True
            for lv, name in enumerate(names):
                sections = builder.stack_at(point, lv) if builder else None
                if sections is None:
                    ok = False
                    break
                m = len(sections)
                if m != cell.stack_sizes[lv]:
                    witnesses.append(
                        f"cell {cell.index}: stack over {point} has {m} sections, "
                        f"cell recorded {cell.stack_sizes[lv]}"
                    )
                    ok = False
                    break
                pos = (cell.index[lv] - 1) // 2
                roots = [r for r, _ in sections]
                lo = roots[pos - 1] if pos >= 1 else None
                hi = roots[pos] if pos < m else None
                point[name] = _draw_in_sector(rng, lo, hi)
            if not ok:
                break
            truth = _truth_at_rational(prob, point)
            if truth != cell.truth:
                witnesses.append(
                    f"cell {cell.index}: truth {cell.truth} at sample but {truth} at "
                    + "(" + ", ".join(f"{names[i]}={point[names[i]]}" for i in range(len(names))) + ")"
                )
                break
    return Verdict(not witnesses, witnesses)


# -- cylindricity --------------------------------------------------------------


def _coords_equal(a, b) -> bool:
    if isinstance(a, AlgebraicNumber) and isinstance(b, AlgebraicNumber):
        return a is b or a.equals(b)
    if isinstance(a, AlgebraicNumber):
        return a.equals_rational(Fraction(b))
    if isinstance(b, AlgebraicNumber):
        return b.equals_rational(Fraction(a))
    return Fraction(a) == Fraction(b)


def _coord_sort_value(c):
    if isinstance(c, AlgebraicNumber):
        return c
    return c


def check_cylindricity(result: CADResult) -> Verdict:
    """Structural check: cells sharing an index prefix share the prefix sample
    coordinates; per stack, indexes are contiguous and section samples ascend
    with disjoint isolating intervals."""
    witnesses = []
    n = len(result.prob.order.names)
    cells = result.cells
    for k in range(1, n + 1):
        groups: dict = {}
        for cell in cells:
            groups.setdefault(cell.index[:k], []).append(cell)
        for prefix, members in groups.items():
            first = members[0]
            for other in members[1:]:
                for lv in range(k):
                    if not _coords_equal(first.sample[lv], other.sample[lv]):
                        witnesses.append(
                            f"prefix {prefix}: cells {first.index} and {other.index} "
                            f"disagree on coordinate {lv}"
                        )
                        break
    # per-stack contiguity and ordering
    for k in range(n):
        parents: dict = {}
        for cell in cells:
            parents.setdefault(cell.index[:k], {})[cell.index[k]] = cell
        for prefix, stack in parents.items():
            idxs = sorted(stack)
            if idxs != list(range(1, len(idxs) + 1)):
                witnesses.append(f"stack under {prefix}: indexes {idxs} not contiguous")
                continue
            section_samples = [stack[i].sample[k] for i in idxs if i % 2 == 0]
            for a, b in zip(section_samples, section_samples[1:]):
                fa = a.as_float() if isinstance(a, AlgebraicNumber) else float(a)
                fb = b.as_float() if isinstance(b, AlgebraicNumber) else float(b)
                if not fa < fb:
                    if _coords_equal(a, b):
                        witnesses.append(
                            f"stack under {prefix}: equal adjacent section samples"
                        )
                    elif fa > fb:
                        witnesses.append(
                            f"stack under {prefix}: section samples out of order"
                        )
    return Verdict(not witnesses, witnesses)


# -- dumps ---------------------------------------------------------------------


def _coord_json(c):
    if isinstance(c, AlgebraicNumber):
        if c.exact is not None:
            return {"type": "rational", "value": str(c.exact), "approx": float(c.exact)}
        return {
            "type": "algebraic",
            "poly": [int(x) for x in c.coeffs],
            "lo": str(c.lo),
            "hi": str(c.hi),
            "approx": c.as_float(),
        }
    return {"type": "rational", "value": str(Fraction(c)), "approx": float(Fraction(c))}


def dump_cells(result: CADResult) -> dict:
    ordering = result.ordering
    cells = []
    for cell in result.cells:
        cells.append(
            {
                "index": list(cell.index),
                "sample": [_coord_json(c) for c in cell.sample],
                "signs": {str(p): s for p, s in cell.signs.items()},
                "truth": list(cell.truth),
                "bounds": [
                    [None if lo is None else _coord_json(lo),
                     None if hi is None else _coord_json(hi)]
                    for (lo, hi) in cell.bounds
                ],
                "stack_sizes": list(cell.stack_sizes),
            }
        )
    return {
        "format": 1,
        "vars": list(result.prob.order.names),
        "ordering": {
            "formula_perm": list(ordering.formula_perm),
            "ec_perms": [list(p) for p in ordering.ec_perms],
        },
        "cell_count": len(result.cells),
        "line_points": [_coord_json(r) for r in result.line_points],
        "stats": result.stats,
        "cells": cells,
        "fiber_cuts": _fiber_cuts_json(result),
        "clauses": [cl.label for cl in result.prob.clauses],
    }


def _fiber_cuts_json(result: CADResult):
    """For 2-variable problems: the level-1 cut polynomials over each level-0
    cell, so plots can trace section arcs without rebuilding the CAD."""
    builder = result.builder
    if builder is None or len(result.prob.order.names) != 2:
        return None
    out = {}
    x = result.prob.order.names[0]
    seen = set()
    for cell in result.cells:
        i0 = cell.index[0]
        if i0 in seen:
            continue
        seen.add(i0)
        sample = {x: cell.sample[0]}
        cuts = builder.cuts_at(1, sample)
        out[str(i0)] = [str(p) for p in cuts]
    return out
