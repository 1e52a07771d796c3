"""Problem file I/O.

Schema (format 1):

    {
      "vars": ["x", "y"],                      # least variable first
      "clauses": [
        {"label": "phi1",
         "constraints": [
            {"poly": "x^2 + y^2 - 1", "rel": "=0"},
            {"poly": "2*y^2 - x",     "rel": "=0"}
         ]}
      ]
    }

Equalities ("=0") are the clause's ECs in file order; the remaining
constraints keep their file order too.
"""

from __future__ import annotations

import json
from pathlib import Path

from .formulation import Clause, Constraint, FormulationError, Problem, RELATIONS
from .polys import ParseError, VariableOrder, parse_poly


class ProblemFormatError(ValueError):
    pass


def problem_from_dict(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise ProblemFormatError("problem file must hold a JSON object")
    try:
        names = tuple(data["vars"])
        raw_clauses = data["clauses"]
    except KeyError as exc:
        raise ProblemFormatError(f"missing key {exc}") from None
    if not raw_clauses:
        raise ProblemFormatError("empty clause list")
    order = VariableOrder(names)
    clauses = []
    for ci, raw in enumerate(raw_clauses):
        label = raw.get("label", f"phi{ci + 1}")
        ecs, others = [], []
        for k, rc in enumerate(raw.get("constraints", ())):
            where = f"clause {label!r} constraint {k}"
            rel = rc.get("rel")
            if rel not in RELATIONS:
                raise ProblemFormatError(f"{where}: unknown relation {rel!r}")
            try:
                poly = parse_poly(rc["poly"], order)
            except ParseError as exc:
                raise ProblemFormatError(f"{where}: {exc}") from None
            except KeyError:
                raise ProblemFormatError(f"{where}: missing poly") from None
            if poly.is_zero():
                raise ProblemFormatError(f"{where}: zero polynomial")
            c = Constraint(poly, rel)
            (ecs if c.is_ec else others).append(c)
        if not ecs and not others:
            raise ProblemFormatError(f"clause {label!r} has no constraints")
        clauses.append(Clause(label, tuple(ecs), tuple(others)))
    try:
        return Problem(order, tuple(clauses))
    except FormulationError as exc:
        raise ProblemFormatError(str(exc)) from None


def parse_problem(path) -> Problem:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}") from None
    return problem_from_dict(data)


def problem_to_dict(prob: Problem) -> dict:
    return {
        "format": 1,
        "vars": list(prob.order.names),
        "clauses": [
            {
                "label": cl.label,
                "constraints": [
                    {"poly": str(c.poly), "rel": c.relation} for c in cl.constraints
                ],
            }
            for cl in prob.clauses
        ],
    }


def emit_problem(prob: Problem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(prob), indent=2) + "\n")
