"""Benchmark harness: random systems, per-ordering runs, statistics.

Systems follow the two-clause shape (f=0 and f=0 and g>0) per clause, with
sparse random polynomials in the ordered variables.  The random coefficient
distribution is an assumption (uniform nonzero integers within the bound,
a fixed number of terms, rejection-sampled so every polynomial involves the
greatest variable); the source experiment did not state one.

Cell counts and timings are backend-specific trend data, not comparable to
any other implementation's absolute numbers; the summary header says so.

Per problem and heuristic the summary reports:
  a  - average cell count over all orderings       a' - average seconds
  b  - average over the heuristic's selections     b' - likewise for time
  c  = a - b                                       c' = a' - b'
  d  = 100 c / a                                   d' = 100 c' / a'
                                                   e' - heuristic runtime
                                                   f' = a' - b' - e'
                                                   g' = 100 f' / a'
Rank histograms place each selection among the orderings sorted by cell
count (and by time), rank 1 = smallest, ties taking the better rank.
"""

from __future__ import annotations

import csv
import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from .cad import CADTimeout, build_cad
from .cctree import build_ccd, ccd_measure
from .formulation import (
    Clause,
    Constraint,
    Problem,
    constraint_ordering_set,
    enumerate_orderings,
    heuristic1,
    heuristic2,
    heuristic3,
    measure_degsum,
)
from .polys import Polynomial, VariableOrder


@dataclass
class GeneratorParams:
    n_vars: int = 3
    max_degree: int = 3
    terms: int = 6
    coeff_bound: int = 99
    ec_per_clause: int = 2
    clauses: int = 2


def _random_poly(rng: random.Random, order: VariableOrder, params: GeneratorParams) -> Polynomial:
    n = len(order.names)
    while True:
        terms: dict = {}
        for _ in range(params.terms):
            exp = [0] * n
            for _ in range(rng.randint(0, params.max_degree)):
                exp[rng.randrange(n)] += 1
            c = rng.randint(1, params.coeff_bound) * rng.choice((1, -1))
            key = tuple(exp)
            terms[key] = terms.get(key, 0) + c
        p = Polynomial(order, terms)
        if p.is_zero():
            continue
        d = p.degree_in(order.greatest)
        if d != float("-inf") and int(d) >= 1:
            return p


def random_system(seed: int, params: GeneratorParams | None = None) -> Problem:
    """Deterministic random problem of the experiment shape."""
    params = params or GeneratorParams()
    if params.terms < 1 or params.n_vars < 1 or params.clauses < 1:
        raise ValueError("unsatisfiable generator parameters")
    rng = random.Random(seed)
    names = tuple("xyzwv"[i] for i in range(params.n_vars))
    order = VariableOrder(names)
    clauses = []
    for ci in range(params.clauses):
        ecs = tuple(
            Constraint(_random_poly(rng, order, params), "=0")
            for _ in range(params.ec_per_clause)
        )
        others = (Constraint(_random_poly(rng, order, params), ">0"),)
        clauses.append(Clause(f"phi{ci + 1}", ecs, others))
    return Problem(order, tuple(clauses))


@dataclass
class OrderingRun:
    index: int
    cells: int | None
    seconds: float | None
    h1_degsum: int
    h1_sotd: int
    h2_measure: int | None
    error: str | None = None


@dataclass
class ExperimentRecord:
    problem_id: int
    seed: int
    runs: list
    selections: dict          # heuristic -> list of ordering indexes
    heuristic_seconds: dict   # heuristic -> float
    completed: bool = True
    note: str = ""


def run_experiment(
    n: int,
    params: GeneratorParams | None = None,
    budget: float = 2400.0,
    seed: int = 1,
    workers: int = 1,
) -> list[ExperimentRecord]:
    """Build every ordering's CAD per problem under a per-problem budget.

    Problems that exceed the budget stay in the list flagged incomplete and
    are excluded from the summary, mirroring the source protocol.
    """
    params = params or GeneratorParams()
    seeds = [seed + i for i in range(n)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        args = [(i, s, params, budget) for i, s in enumerate(seeds)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_one_star, args))
    return [_run_one(i, s, params, budget) for i, s in enumerate(seeds)]


def _run_one_star(args):
    return _run_one(*args)


def _run_one(problem_id: int, seed: int, params: GeneratorParams, budget: float) -> ExperimentRecord:
    prob = random_system(seed, params)
    orderings = enumerate_orderings(prob)
    deadline = time.monotonic() + budget
    runs = []
    completed = True
    note = ""
    for idx, o in enumerate(orderings):
        C = constraint_ordering_set(prob, o)
        degsum = measure_degsum(C, prob)
        sotd_val = C.sotd()
        tree = build_ccd(prob, o)
        h2m = ccd_measure(tree)
        if not completed:
            runs.append(OrderingRun(idx, None, None, degsum, sotd_val, h2m, "skipped"))
            continue
        t0 = time.monotonic()
        try:
            res = build_cad(prob, o, deadline=deadline)
            runs.append(
                OrderingRun(idx, len(res.cells), time.monotonic() - t0, degsum, sotd_val, h2m)
            )
        except CADTimeout:
            runs.append(
                OrderingRun(idx, None, None, degsum, sotd_val, h2m, "timeout")
            )
            completed = False
            note = f"budget of {budget:.0f}s exhausted at ordering {idx}"

    selections: dict = {}
    heuristic_seconds: dict = {}
    t0 = time.monotonic()
    h1 = heuristic1(prob)
    heuristic_seconds["h1"] = time.monotonic() - t0
    selections["h1"] = sorted(r.index for r in h1.shortlist)
    t0 = time.monotonic()
    h2 = heuristic2(prob, orderings)
    heuristic_seconds["h2"] = time.monotonic() - t0
    selections["h2"] = sorted(r.index for r in h2.shortlist)
    t0 = time.monotonic()
    h3 = heuristic3(prob)
    heuristic_seconds["h3"] = time.monotonic() - t0
    selections["h3"] = [h3.index]
    return ExperimentRecord(
        problem_id, seed, runs, selections, heuristic_seconds, completed, note
    )


HEURISTICS = ("h1", "h2", "h3")


@dataclass
class StatsSummary:
    problems_total: int
    problems_used: int
    per_heuristic: dict       # name -> dict with a..g' averages
    rank_histograms: dict     # ("cells"|"time", name) -> list of 8 counts
    correlations: dict
    header: str = (
        "trend statistics from this backend; absolute cell counts and "
        "timings are not comparable to other implementations"
    )


def _rank_of(values: list, chosen) -> int:
    """1-based rank among values, ties recorded at the better rank."""
    return 1 + sum(1 for v in values if v < chosen)


def summarize(records: list) -> StatsSummary:
    if not records:
        raise ValueError("no records to summarize")
    used = [r for r in records if r.completed]
    per: dict = {h: dict(a=[], b=[], c=[], d=[], ap=[], bp=[], cp=[], dp=[], ep=[], fp=[], gp=[]) for h in HEURISTICS}
    n_orderings = max(len(r.runs) for r in records)
    hist = {(metric, h): [0] * n_orderings for metric in ("cells", "time") for h in HEURISTICS}
    for rec in used:
        cells = [run.cells for run in rec.runs]
        times = [run.seconds for run in rec.runs]
        a = sum(cells) / len(cells)
        ap = sum(times) / len(times)
        for h in HEURISTICS:
            sel = rec.selections[h]
            b = sum(cells[i] for i in sel) / len(sel)
            bp = sum(times[i] for i in sel) / len(sel)
            ep = rec.heuristic_seconds[h]
            row = per[h]
            row["a"].append(a)
            row["b"].append(b)
            row["c"].append(a - b)
            row["d"].append(100 * (a - b) / a if a else 0.0)
            row["ap"].append(ap)
            row["bp"].append(bp)
            row["cp"].append(ap - bp)
            row["dp"].append(100 * (ap - bp) / ap if ap else 0.0)
            row["ep"].append(ep)
            row["fp"].append(ap - bp - ep)
            row["gp"].append(100 * (ap - bp - ep) / ap if ap else 0.0)
            for i in sel:
                hist[("cells", h)][_rank_of(cells, cells[i]) - 1] += 1
                hist[("time", h)][_rank_of(times, times[i]) - 1] += 1
    averaged = {
        h: {k: (sum(v) / len(v) if v else None) for k, v in rows.items()}
        for h, rows in per.items()
    }
    return StatsSummary(
        problems_total=len(records),
        problems_used=len(used),
        per_heuristic=averaged,
        rank_histograms=hist,
        correlations=correlate(records),
    )


def _pearson(xs: list, ys: list):
    n = len(xs)
    if n < 2:
        return None
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        return None  # zero variance: coefficient undefined
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / math.sqrt(sxx * syy)


def correlate(records: list) -> dict:
    """Pearson coefficients between per-problem-scaled heuristic measures and
    the scaled cell counts / timings, pooled over all orderings."""
    data = {"h1_measure": [], "h2_measure": [], "cells": [], "time": []}
    for rec in records:
        if not rec.completed:
            continue
        cells = [run.cells for run in rec.runs]
        times = [run.seconds for run in rec.runs]
        m1 = [run.h1_degsum for run in rec.runs]
        m2 = [run.h2_measure for run in rec.runs]
        for series, key in ((cells, "cells"), (times, "time"), (m1, "h1_measure"), (m2, "h2_measure")):
            top = max(series)
            scaled = [v / top if top else 0.0 for v in series]
            data[key].extend(scaled)
    out = {"scatter": data}
    for m in ("h1_measure", "h2_measure"):
        for target in ("cells", "time"):
            r = _pearson(data[m], data[target])
            out[f"r({m},{target})"] = r
            if r is None:
                out.setdefault("undefined", []).append(f"r({m},{target})")
    return out


# -- CSV emission ----------------------------------------------------------


def write_csvs(records: list, summary: StatsSummary, outdir) -> list[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    path = outdir / "records.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["problem", "seed", "completed", "ordering", "cells", "seconds",
             "h1_degsum", "h1_sotd", "h2_measure", "error",
             "sel_h1", "sel_h2", "sel_h3"]
        )
        for rec in records:
            for run in rec.runs:
                w.writerow(
                    [rec.problem_id, rec.seed, int(rec.completed), run.index,
                     run.cells, None if run.seconds is None else f"{run.seconds:.3f}",
                     run.h1_degsum, run.h1_sotd, run.h2_measure, run.error or "",
                     int(run.index in rec.selections["h1"]),
                     int(run.index in rec.selections["h2"]),
                     int(run.index in rec.selections["h3"])]
                )
    written.append(str(path))

    path = outdir / "summary.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["# " + summary.header])
        w.writerow(["# problems_total", summary.problems_total,
                    "problems_used", summary.problems_used])
        w.writerow(["heuristic", "a", "b", "c", "d",
                    "a'", "b'", "c'", "d'", "e'", "f'", "g'"])
        for h in HEURISTICS:
            row = summary.per_heuristic[h]
            w.writerow(
                [h] + [
                    "" if row[k] is None else f"{row[k]:.4f}"
                    for k in ("a", "b", "c", "d", "ap", "bp", "cp", "dp", "ep", "fp", "gp")
                ]
            )
    written.append(str(path))

    path = outdir / "ranks.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        n_ranks = len(next(iter(summary.rank_histograms.values())))
        w.writerow(["metric", "heuristic"] + [str(i + 1) for i in range(n_ranks)] + ["total"])
        for (metric, h), counts in sorted(summary.rank_histograms.items()):
            w.writerow([metric, h] + counts + [sum(counts)])
    written.append(str(path))

    path = outdir / "correlation.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        corr = summary.correlations
        w.writerow(["pair", "pearson_r"])
        for key in sorted(k for k in corr if k.startswith("r(")):
            r = corr[key]
            w.writerow([key, "undefined" if r is None else f"{r:.4f}"])
        w.writerow([])
        w.writerow(["h1_measure", "h2_measure", "cells", "time"])
        sc = corr["scatter"]
        for row in zip(sc["h1_measure"], sc["h2_measure"], sc["cells"], sc["time"]):
            w.writerow([f"{v:.6f}" for v in row])
    written.append(str(path))
    return written
