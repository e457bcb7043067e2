"""Polynomial vector fields and their exact interval extension."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from spectral_domains.exceptions import BottomInput, DimensionMismatch
from spectral_domains.interval_domain import Box

__all__ = [
    "Add",
    "Const",
    "FieldExpr",
    "Mul",
    "Neg",
    "Sub",
    "Var",
    "eval_expr",
    "eval_field",
    "expand",
    "expr_depth",
    "format_expr",
    "format_field",
    "interval_add",
    "interval_mul",
    "interval_neg",
    "interval_scale",
    "interval_sub",
    "max_var_index",
]

type Interval = tuple[Fraction, Fraction]
type Polynomial = dict[tuple[int, ...], Fraction]


@dataclass(frozen=True, slots=True)
class Const:
    value: Fraction


@dataclass(frozen=True, slots=True)
class Var:
    index: int  # 0-based: y1 is Var(0)


@dataclass(frozen=True, slots=True)
class Neg:
    arg: FieldExpr


@dataclass(frozen=True, slots=True)
class Add:
    left: FieldExpr
    right: FieldExpr


@dataclass(frozen=True, slots=True)
class Sub:
    left: FieldExpr
    right: FieldExpr


@dataclass(frozen=True, slots=True)
class Mul:
    left: FieldExpr
    right: FieldExpr


type FieldExpr = Const | Var | Neg | Add | Sub | Mul


# ---------------------------------------------------------------------------
# Interval arithmetic on closed rational intervals
# ---------------------------------------------------------------------------


def interval_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def interval_sub(a: Interval, b: Interval) -> Interval:
    return (a[0] - b[1], a[1] - b[0])


def interval_neg(a: Interval) -> Interval:
    return (-a[1], -a[0])


def interval_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def interval_scale(c: Interval, a: Interval) -> Interval:
    """``c·a`` for an interval factor, e.g. ``[0, Δ]·a``."""
    return interval_mul(c, a)


def eval_expr(expr: FieldExpr, sides: Sequence[Interval]) -> Interval:
    """Natural interval extension of one expression at the box ``sides``."""
    match expr:
        case Const(value):
            return (value, value)
        case Var(index):
            if not 0 <= index < len(sides):
                msg = f"Variable y{index + 1} used with a box of dimension {len(sides)}"
                raise DimensionMismatch(msg)
            return sides[index]
        case Neg(arg):
            return interval_neg(eval_expr(arg, sides))
        case Add(left, right):
            return interval_add(eval_expr(left, sides), eval_expr(right, sides))
        case Sub(left, right):
            return interval_sub(eval_expr(left, sides), eval_expr(right, sides))
        case Mul(left, right):
            return interval_mul(eval_expr(left, sides), eval_expr(right, sides))
    msg = f"Not a field expression: {expr!r}"
    raise TypeError(msg)


def eval_field(field: Sequence[FieldExpr], y: Box) -> Box:
    """``F(y)`` computed side by side in exact interval arithmetic.

    Raises:
        BottomInput: if ``y`` is bottom.
        DimensionMismatch: if the field and the box disagree in dimension.
    """
    if y.bounds is None:
        msg = "The vector field cannot be evaluated at bottom"
        raise BottomInput(msg)
    if len(field) != y.dim:
        msg = f"Field of dimension {len(field)} evaluated at a box of dimension {y.dim}"
        raise DimensionMismatch(msg)
    return Box(y.dim, tuple(eval_expr(e, y.bounds) for e in field))


def _add_terms(p: Polynomial, q: Polynomial, sign: int) -> Polynomial:
    out = dict(p)
    for monomial, c in q.items():
        out[monomial] = out.get(monomial, Fraction(0)) + sign * c
    return {m: c for m, c in out.items() if c}


def expand(expr: FieldExpr, n: int) -> Polynomial:
    """Exact normal form over ``y1`` .. ``yn``: exponent tuple to nonzero coefficient.

    Expressions that denote the same polynomial expand to equal dicts, so
    ``-y2``, ``-1*y2`` and ``0 - y2`` all compare equal.
    """
    match expr:
        case Const(value):
            return {(0,) * n: value} if value else {}
        case Var(index):
            if not 0 <= index < n:
                msg = f"Variable y{index + 1} used in a field of dimension {n}"
                raise DimensionMismatch(msg)
            return {tuple(int(k == index) for k in range(n)): Fraction(1)}
        case Neg(arg):
            return {m: -c for m, c in expand(arg, n).items()}
        case Add(left, right):
            return _add_terms(expand(left, n), expand(right, n), 1)
        case Sub(left, right):
            return _add_terms(expand(left, n), expand(right, n), -1)
        case Mul(left, right):
            product: Polynomial = {}
            for m1, c1 in expand(left, n).items():
                for m2, c2 in expand(right, n).items():
                    m = tuple(a + b for a, b in zip(m1, m2, strict=True))
                    product[m] = product.get(m, Fraction(0)) + c1 * c2
            return {m: c for m, c in product.items() if c}
    msg = f"Not a field expression: {expr!r}"
    raise TypeError(msg)


def expr_depth(expr: FieldExpr) -> int:
    """Height of the expression tree, measured without recursion."""
    deepest = 0
    stack: list[tuple[FieldExpr, int]] = [(expr, 1)]
    while stack:
        node, depth = stack.pop()
        deepest = max(deepest, depth)
        match node:
            case Neg(arg):
                stack.append((arg, depth + 1))
            case Add(left, right) | Sub(left, right) | Mul(left, right):
                stack.extend(((left, depth + 1), (right, depth + 1)))
    return deepest


def max_var_index(expr: FieldExpr) -> int:
    """Largest variable index in ``expr``, or -1 when it has none."""
    match expr:
        case Const():
            return -1
        case Var(index):
            return index
        case Neg(arg):
            return max_var_index(arg)
        case Add(left, right) | Sub(left, right) | Mul(left, right):
            return max(max_var_index(left), max_var_index(right))
    msg = f"Not a field expression: {expr!r}"
    raise TypeError(msg)


def format_expr(expr: FieldExpr) -> str:
    """Text that :func:`~spectral_domains.ivp.parser.parse_field` reads back to ``expr``."""
    match expr:
        case Const(value):
            return f"({value})" if value < 0 else str(value)
        case Var(index):
            return f"y{index + 1}"
        case Neg(arg):
            return f"-({format_expr(arg)})"
        case Add(left, right):
            return f"({format_expr(left)} + {format_expr(right)})"
        case Sub(left, right):
            return f"({format_expr(left)} - {format_expr(right)})"
        case Mul(left, right):
            return f"({format_expr(left)} * {format_expr(right)})"
    msg = f"Not a field expression: {expr!r}"
    raise TypeError(msg)


def format_field(field: Sequence[FieldExpr]) -> str:
    return "; ".join(format_expr(e) for e in field)
