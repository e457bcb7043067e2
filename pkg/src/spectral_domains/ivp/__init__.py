"""Validated initial value problem solving with step-function enclosures."""

from spectral_domains.ivp.expr import (
    Add,
    Const,
    FieldExpr,
    Mul,
    Neg,
    Sub,
    Var,
    eval_field,
    format_field,
)
from spectral_domains.ivp.oracles import (
    Oracle,
    solution_box,
    taylor_cos_bounds,
    taylor_exp_bounds,
    taylor_sin_bounds,
)
from spectral_domains.ivp.parser import parse_field
from spectral_domains.ivp.solver import (
    DEFAULT_APRIORI,
    AprioriParams,
    Enclosure,
    IvpProblem,
    apriori_bound,
    convergence_levels,
    csv_header,
    enclosure_contains,
    enclosure_rows,
    enclosure_to_stepfn,
    enclosure_value,
    enclosure_width,
    initial_enclosure,
    phi_apply,
    solve_fixpoint,
    uniform_partition,
)

__all__ = [
    "DEFAULT_APRIORI",
    "Add",
    "AprioriParams",
    "Const",
    "Enclosure",
    "FieldExpr",
    "IvpProblem",
    "Mul",
    "Neg",
    "Oracle",
    "Sub",
    "Var",
    "apriori_bound",
    "convergence_levels",
    "csv_header",
    "enclosure_contains",
    "enclosure_rows",
    "enclosure_to_stepfn",
    "enclosure_value",
    "enclosure_width",
    "eval_field",
    "format_field",
    "initial_enclosure",
    "parse_field",
    "phi_apply",
    "solution_box",
    "solve_fixpoint",
    "taylor_cos_bounds",
    "taylor_exp_bounds",
    "taylor_sin_bounds",
    "uniform_partition",
]
