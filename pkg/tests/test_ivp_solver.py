"""Tests for the validated Euler solver against exact Taylor enclosures."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from spectral_domains.exceptions import DimensionMismatch, DivergenceBound, InputError
from spectral_domains.interval_domain import INFINITE, Box, box_leq
from spectral_domains.ivp.expr import eval_field
from spectral_domains.ivp.oracles import (
    Oracle,
    solution_box,
    taylor_cos_bounds,
    taylor_exp_bounds,
    taylor_sin_bounds,
)
from spectral_domains.ivp.parser import parse_field
from spectral_domains.ivp.solver import (
    AprioriParams,
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
from spectral_domains.step_functions import evaluate, order_cells

ZERO, ONE = Fraction(0), Fraction(1)


@pytest.fixture
def exp_problem() -> IvpProblem:
    """y′ = y, y(0) = 1 on [0, 1]."""
    return IvpProblem.parse(1, ZERO, ONE, Box.point(1), "y1")


@pytest.fixture
def rotation_problem() -> IvpProblem:
    """y1′ = -y2, y2′ = y1 from (1, 0): the unit circle."""
    return IvpProblem.parse(2, ZERO, ONE, Box.point(1, 0), "-y2; y1")


def exp_box(t: Fraction) -> Box:
    return Box.of(taylor_exp_bounds(t))


# ---------------------------------------------------------------------------
# Problem / partition
# ---------------------------------------------------------------------------


class TestIvpProblem:
    def test_time_interval(self) -> None:
        with pytest.raises(InputError, match="t0 < T"):
            IvpProblem.parse(1, ONE, ONE, Box.point(1), "y1")

    def test_bottom_initial_value(self) -> None:
        with pytest.raises(InputError, match="proper box"):
            IvpProblem.parse(1, ZERO, ONE, Box.bottom(1), "y1")

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(DimensionMismatch):
            IvpProblem.parse(2, ZERO, ONE, Box.point(1), "y1; y2")

    def test_carrier_and_field_text(self, rotation_problem: IvpProblem) -> None:
        assert str(rotation_problem.carrier) == "[0,1]"
        assert rotation_problem.field_text == "-(y2); y1"


class TestPartition:
    def test_uniform(self) -> None:
        assert uniform_partition(ZERO, ONE, 4) == (
            ZERO,
            Fraction(1, 4),
            Fraction(1, 2),
            Fraction(3, 4),
            ONE,
        )

    def test_needs_a_piece(self) -> None:
        with pytest.raises(InputError):
            uniform_partition(ZERO, ONE, 0)

    def test_initial_enclosure(self, exp_problem: IvpProblem) -> None:
        enc = initial_enclosure(exp_problem, 4)
        assert enc.node_boxes[0] == Box.point(1)
        assert all(b.is_bottom for b in enc.piece_boxes)
        assert enclosure_width(enc) == INFINITE


# ---------------------------------------------------------------------------
# A-priori bounds
# ---------------------------------------------------------------------------


class TestAprioriBound:
    def test_bound_is_invariant(self) -> None:
        field = parse_field("y1", 1)
        delta = Fraction(1, 4)
        bound = apriori_bound(field, Box.point(1), delta)
        step = eval_field(field, bound)
        assert step.bounds is not None
        lo, hi = step.bounds[0]
        reach = Box.of((min(1, 1 + delta * lo), max(1, 1 + delta * hi)))
        assert box_leq(bound, reach)

    def test_zero_field_needs_no_widening(self) -> None:
        assert apriori_bound(parse_field("0", 1), Box.point(1), ONE) == Box.point(1)

    def test_blow_up_diverges(self) -> None:
        with pytest.raises(DivergenceBound):
            apriori_bound(parse_field("y1 * y1", 1), Box.point(1), Fraction(10))

    def test_iteration_limit(self) -> None:
        params = AprioriParams(max_iterations=1)
        with pytest.raises(DivergenceBound, match="within 1 iterations"):
            apriori_bound(parse_field("y1", 1), Box.point(1), Fraction(1, 4), params)

    def test_step_must_be_positive(self) -> None:
        with pytest.raises(InputError, match="positive"):
            apriori_bound(parse_field("y1", 1), Box.point(1), ZERO)


# ---------------------------------------------------------------------------
# Φ and the fixpoint
# ---------------------------------------------------------------------------


class TestPhi:
    def test_first_sweep(self, exp_problem: IvpProblem) -> None:
        delta = Fraction(1, 4)
        enc = phi_apply(exp_problem, initial_enclosure(exp_problem, 4))
        b0 = apriori_bound(exp_problem.field, Box.point(1), delta)
        assert b0.bounds is not None
        lo, hi = b0.bounds[0]
        assert enc.node_boxes[1] == Box.of((1 + lo * delta, 1 + hi * delta))
        assert box_leq(enc.node_boxes[1], Box.point(Fraction(5, 4)))
        assert box_leq(enc.node_boxes[1], exp_box(delta))

    def test_sweep_fills_every_node(self, exp_problem: IvpProblem) -> None:
        enc = phi_apply(exp_problem, initial_enclosure(exp_problem, 4))
        assert not any(b.is_bottom for b in enc.node_boxes)
        assert not any(b.is_bottom for b in enc.piece_boxes)

    def test_divergence_names_the_piece(self) -> None:
        problem = IvpProblem.parse(1, ZERO, Fraction(10), Box.point(1), "y1 * y1")
        with pytest.raises(DivergenceBound) as excinfo:
            phi_apply(problem, initial_enclosure(problem, 1))
        assert excinfo.value.piece == 0

    @pytest.mark.parametrize("name", ["exp_problem", "rotation_problem"])
    def test_iterates_only_refine(self, name: str, request: pytest.FixtureRequest) -> None:
        problem: IvpProblem = request.getfixturevalue(name)
        iterates = [initial_enclosure(problem, 8)]
        for _ in range(3):
            iterates.append(phi_apply(problem, iterates[-1]))
        for before, after in zip(iterates, iterates[1:], strict=False):
            assert order_cells(enclosure_to_stepfn(before), enclosure_to_stepfn(after))


class TestSolveFixpoint:
    def test_zero_field(self) -> None:
        problem = IvpProblem.parse(1, ZERO, ONE, Box.point(1), "0")
        enc, iterations = solve_fixpoint(problem, 4)
        assert iterations == 2
        assert set(enc.node_boxes) == {Box.point(1)}
        assert set(enc.piece_boxes) == {Box.point(1)}

    def test_result_is_a_fixpoint(self, exp_problem: IvpProblem) -> None:
        enc, _ = solve_fixpoint(exp_problem, 8)
        assert phi_apply(exp_problem, enc) == enc

    @pytest.mark.parametrize("k", [4, 8, 16, 32, 64])
    def test_exp_is_enclosed(self, exp_problem: IvpProblem, k: int) -> None:
        enc, _ = solve_fixpoint(exp_problem, k)
        f = enclosure_to_stepfn(enc)
        for q, node in zip(enc.partition, enc.node_boxes, strict=True):
            assert box_leq(node, exp_box(q))
        rng = random.Random(k)
        for _ in range(100):
            t = Fraction(rng.randint(0, 1000), 1000)
            assert box_leq(evaluate(f, t), exp_box(t))

    def test_rotation_is_enclosed(self, rotation_problem: IvpProblem) -> None:
        enc, _ = solve_fixpoint(rotation_problem, 8)
        for q, node in zip(enc.partition, enc.node_boxes, strict=True):
            assert box_leq(node, Box.of(taylor_cos_bounds(q), taylor_sin_bounds(q)))

    def test_pieces_jump_down_to_nodes(self, exp_problem: IvpProblem) -> None:
        enc, _ = solve_fixpoint(exp_problem, 4)
        for j in range(1, enc.k + 1):
            piece, node = enc.piece_boxes[j - 1], enc.node_boxes[j]
            assert box_leq(piece, node)
            assert piece != node

    def test_divergence_propagates(self) -> None:
        problem = IvpProblem.parse(1, ZERO, Fraction(10), Box.point(1), "y1 * y1")
        with pytest.raises(DivergenceBound):
            solve_fixpoint(problem, 1)


# ---------------------------------------------------------------------------
# Reading enclosures
# ---------------------------------------------------------------------------


class TestReadout:
    def test_value_and_contains(self, exp_problem: IvpProblem) -> None:
        enc, _ = solve_fixpoint(exp_problem, 4)
        assert enclosure_value(enc, ZERO) == Box.point(1)
        assert enclosure_value(enc, Fraction(1, 8)) == enc.piece_boxes[0]
        assert enclosure_contains(enc, Fraction(1, 2), exp_box(Fraction(1, 2)))

    def test_rows(self, exp_problem: IvpProblem) -> None:
        enc, _ = solve_fixpoint(exp_problem, 4)
        rows = enclosure_rows(enc)
        assert len(rows) == 9
        assert [r[-1] for r in rows].count("1") == 5
        assert rows[0] == ["0", "0", "1", "1", "1"]
        assert rows[1][:2] == ["0", "1/4"]

    def test_bottom_rows(self, exp_problem: IvpProblem) -> None:
        rows = enclosure_rows(initial_enclosure(exp_problem, 1))
        assert rows[1] == ["0", "1", "-inf", "inf", "0"]

    def test_header(self) -> None:
        assert csv_header(2) == ["q_lo", "q_hi", "lo1", "hi1", "lo2", "hi2", "node"]


class TestConvergence:
    def test_width_halves(self, exp_problem: IvpProblem) -> None:
        table = convergence_levels(exp_problem, 3, start=4)
        assert [k for k, _, _ in table] == [4, 8, 16]
        widths = [w for _, w, _ in table]
        assert widths[0] > widths[1] > widths[2]
        assert table[0][2] is None
        for _, _, ratio in table[1:]:
            assert ratio is not None
            assert Fraction(3, 10) <= ratio <= Fraction(7, 10)

    def test_width_halves_from_eight_pieces(self, exp_problem: IvpProblem) -> None:
        table = convergence_levels(exp_problem, 4, start=8)
        assert [k for k, _, _ in table] == [8, 16, 32, 64]
        for _, _, ratio in table[1:]:
            assert ratio is not None
            assert Fraction(3, 10) <= ratio <= Fraction(7, 10)

    def test_constant_field_width_is_the_step(self) -> None:
        problem = IvpProblem.parse(1, ZERO, ONE, Box.point(1), "1")
        enc, _ = solve_fixpoint(problem, 4)
        assert enc.piece_boxes == tuple(
            Box.of((1 + Fraction(j, 4), 1 + Fraction(j + 1, 4))) for j in range(4)
        )
        assert enclosure_width(enc) == Fraction(1, 4)
        table = convergence_levels(problem, 3, start=4)
        assert table == [
            (4, Fraction(1, 4), None),
            (8, Fraction(1, 8), Fraction(1, 2)),
            (16, Fraction(1, 16), Fraction(1, 2)),
        ]


class TestSolutionBox:
    def test_exp_scales_the_initial_box(self) -> None:
        problem = IvpProblem.parse(1, ONE, Fraction(2), Box.of((1, 2)), "y1")
        assert solution_box(problem, Oracle.EXP, ONE) == Box.of((1, 2))
        later = solution_box(problem, Oracle.EXP, Fraction(2))
        assert later.bounds is not None
        ((lo, hi),) = later.bounds
        assert Fraction(271, 100) < lo < Fraction(272, 100)
        assert Fraction(543, 100) < hi < Fraction(544, 100)

    def test_rotation_stays_on_the_circle(self, rotation_problem: IvpProblem) -> None:
        box = solution_box(rotation_problem, Oracle.ROTATION, Fraction(1, 2))
        assert box.bounds is not None
        (x_lo, x_hi), (y_lo, y_hi) = box.bounds
        assert x_hi - x_lo < Fraction(1, 10**30)
        assert abs(x_lo**2 + y_lo**2 - 1) < Fraction(1, 10**30)
        assert y_lo > 0

    def test_rotation_needs_a_point(self) -> None:
        problem = IvpProblem.parse(2, ZERO, ONE, Box.of((0, 1), (0, 0)), "-y2; y1")
        with pytest.raises(InputError, match="point initial value"):
            solution_box(problem, Oracle.ROTATION, ONE)

    def test_field_must_match(self, exp_problem: IvpProblem) -> None:
        with pytest.raises(InputError, match="does not apply"):
            solution_box(exp_problem, Oracle.ROTATION, ONE)

    @pytest.mark.parametrize(
        ("n", "y0", "text", "oracle"),
        [
            (2, Box.point(1, 0), "-1*y2; y1", Oracle.ROTATION),
            (2, Box.point(1, 0), "0 - y2; y1 + 0", Oracle.ROTATION),
            (1, Box.point(1), "y1 + 0", Oracle.EXP),
            (1, Box.point(1), "2*y1 - y1", Oracle.EXP),
        ],
    )
    def test_any_spelling_of_the_field(
        self, n: int, y0: Box, text: str, oracle: Oracle
    ) -> None:
        problem = IvpProblem.parse(n, ZERO, ONE, y0, text)
        assert solution_box(problem, oracle, ZERO) == y0

    @pytest.mark.parametrize("text", ["y1 + 1", "y1 * y1", "-y1"])
    def test_other_polynomials_are_refused(self, text: str) -> None:
        problem = IvpProblem.parse(1, ZERO, ONE, Box.point(1), text)
        with pytest.raises(InputError, match="does not apply"):
            solution_box(problem, Oracle.EXP, ONE)
