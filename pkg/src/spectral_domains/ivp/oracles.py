"""Rational enclosures of e^t, cos t and sin t from truncated Taylor series.

Each ``taylor_*`` function returns ``(lo, hi)`` with the true value inside:
the partial sum plus or minus a Lagrange remainder bound. ``solution_box``
lifts them to the exact flow of two reference problems, y′ = y and the
rotation y1′ = -y2, y2′ = y1.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

from spectral_domains.exceptions import InputError
from spectral_domains.interval_domain import Box
from spectral_domains.ivp.expr import (
    Neg,
    Var,
    expand,
    interval_add,
    interval_mul,
    interval_sub,
)
from spectral_domains.ivp.solver import IvpProblem

__all__ = [
    "Oracle",
    "solution_box",
    "taylor_cos_bounds",
    "taylor_exp_bounds",
    "taylor_sin_bounds",
]

DEFAULT_TERMS = 40


def _power_over_factorial(t: Fraction, k: int) -> Fraction:
    return t**k / math.factorial(k)


def taylor_exp_bounds(t: Fraction, terms: int = DEFAULT_TERMS) -> tuple[Fraction, Fraction]:
    total = sum((_power_over_factorial(t, i) for i in range(terms)), Fraction(0))
    # e^ξ for |ξ| <= |t| is below 3^ceil(|t|)
    remainder = _power_over_factorial(abs(t), terms) * 3 ** math.ceil(abs(t))
    return total - remainder, total + remainder


def taylor_cos_bounds(t: Fraction, terms: int = DEFAULT_TERMS) -> tuple[Fraction, Fraction]:
    total = sum(
        ((-1) ** i * _power_over_factorial(t, 2 * i) for i in range(terms)), Fraction(0)
    )
    remainder = _power_over_factorial(abs(t), 2 * terms)
    return total - remainder, total + remainder


def taylor_sin_bounds(t: Fraction, terms: int = DEFAULT_TERMS) -> tuple[Fraction, Fraction]:
    total = sum(
        ((-1) ** i * _power_over_factorial(t, 2 * i + 1) for i in range(terms)), Fraction(0)
    )
    remainder = _power_over_factorial(abs(t), 2 * terms + 1)
    return total - remainder, total + remainder


# ---------------------------------------------------------------------------
# Reference flows
# ---------------------------------------------------------------------------


class Oracle(enum.Enum):
    EXP = "exp"
    ROTATION = "rotation"


_FIELDS = {
    Oracle.EXP: (Var(0),),
    Oracle.ROTATION: (Neg(Var(1)), Var(0)),
}


def _describes(oracle: Oracle, problem: IvpProblem) -> bool:
    expected = _FIELDS[oracle]
    if problem.n != len(expected):
        return False
    return [expand(e, problem.n) for e in problem.field] == [
        expand(e, problem.n) for e in expected
    ]


def solution_box(problem: IvpProblem, oracle: Oracle, t: Fraction) -> Box:
    """A tight box around the exact solutions of ``problem`` at time ``t``.

    The field is compared as a polynomial, so any spelling of y′ = y or of the
    rotation is accepted. ``exp`` takes any initial box since e^s > 0 maps
    sides to sides; ``rotation`` needs a point initial value.
    """
    if not _describes(oracle, problem):
        msg = f"The {oracle.value} oracle does not apply to y′ = {problem.field_text}"
        raise InputError(msg)
    assert problem.y0.bounds is not None  # noqa: S101
    s = t - problem.t0
    if oracle is Oracle.EXP:
        return Box.of(interval_mul(problem.y0.bounds[0], taylor_exp_bounds(s)))
    (a, a_hi), (b, b_hi) = problem.y0.bounds
    if a != a_hi or b != b_hi:
        msg = "The rotation oracle needs a point initial value"
        raise InputError(msg)
    cos, sin = taylor_cos_bounds(s), taylor_sin_bounds(s)
    return Box.of(
        interval_sub(interval_mul(cos, (a, a)), interval_mul(sin, (b, b))),
        interval_add(interval_mul(sin, (a, a)), interval_mul(cos, (b, b))),
    )
