import math

import pytest

from haarent.dsl import (BinOp, Call, Neg, Num, Piecewise, Var, breakpoints,
                         density_from_expr, evaluate, format_expr, parse,
                         parse_set, weight_from_expr)
from haarent.errors import ExprEvalError, ExprSyntaxError
from haarent.measures import MeasurableSet, Space

UNIT = Space.interval(0.0, 1.0)
DIE = Space.finite([1, 2, 3, 4, 5, 6])

ROUND_TRIP_CORPUS = [
    "1",
    "x",
    "-x",
    "1/x",
    "exp(-x)",
    "2*x^2+1",
    "-x^2",
    "(x+1)*2",
    "x-1-2",
    "2^3^2",
    "x/(1-x)",
    "sqrt(abs(x-0.5))",
    "log(x+1)",
    "min(x, 1-x)",
    "max(x, 0.25, 1-x)",
    "x*(-2)",
    "(x^2)^3",
    "1 - (2 - x)",
    "piecewise {x < 0.25: 1; else: 2}",
    "piecewise {0.1 <= x < 0.5: x; x >= 0.5: 1-x}",
]


class TestParse:
    def test_division_tree(self):
        assert parse("1/x") == BinOp("/", Num(1.0), Var())

    def test_call_tree(self):
        assert parse("exp(-x)") == Call("exp", (Neg(Var()),))

    def test_precedence_tree(self):
        expected = BinOp(
            "+",
            BinOp("*", Num(2.0), BinOp("^", Var(), Num(2.0))),
            Num(1.0))
        assert parse("2*x^2+1") == expected

    def test_power_binds_tighter_than_unary_minus(self):
        assert parse("-x^2") == Neg(BinOp("^", Var(), Num(2.0)))

    def test_power_right_associative(self):
        assert evaluate(parse("2^3^2"), 0.0) == 512.0

    def test_subtraction_left_associative(self):
        assert evaluate(parse("x-1-2"), 0.0) == -3.0

    def test_whitespace_insensitive(self):
        assert parse(" 2 * x ^ 2 + 1 ") == parse("2*x^2+1")

    def test_piecewise_tree(self):
        tree = parse("piecewise {x < 0.25: 1; else: 2}")
        assert isinstance(tree, Piecewise)
        assert len(tree.branches) == 1
        assert tree.otherwise == Num(2.0)


class TestSyntaxErrors:
    def test_dangling_operator(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("2*")
        assert info.value.position == 2

    def test_unbalanced_paren(self):
        with pytest.raises(ExprSyntaxError):
            parse("(x+1")

    def test_unknown_function(self):
        with pytest.raises(ExprSyntaxError):
            parse("tanh(x)")

    def test_unknown_character(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse("x + $")
        assert info.value.position == 4

    def test_guards_must_increase(self):
        with pytest.raises(ExprSyntaxError):
            parse("piecewise {x >= 0.5: 1; x < 0.25: 2}")

    def test_overlapping_guards_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse("piecewise {x <= 0.5: 1; 0.25 <= x < 1: 2}")

    def test_else_must_be_last(self):
        with pytest.raises(ExprSyntaxError):
            parse("piecewise {else: 1; x < 0.5: 2}")


class TestEvaluate:
    def test_polynomial(self):
        assert evaluate(parse("2*x^2+1"), 1.5) == 5.5

    def test_exponential(self):
        assert evaluate(parse("exp(-x)"), 0.0) == 1.0
        assert evaluate(parse("exp(-x)"), 1.0) == pytest.approx(
            math.exp(-1.0), abs=1e-15)

    def test_unary_minus_applies_after_power(self):
        assert evaluate(parse("-x^2"), 2.0) == -4.0

    def test_variadic_min(self):
        assert evaluate(parse("min(x, 1-x, 0.3)"), 0.1) == pytest.approx(0.1)

    def test_piecewise_branches_and_else(self):
        tree = parse("piecewise {x < 0.25: 1; 0.25 <= x < 0.75: x; else: 0}")
        assert evaluate(tree, 0.1) == 1.0
        assert evaluate(tree, 0.5) == 0.5
        assert evaluate(tree, 0.9) == 0.0

    def test_overflow_saturates(self):
        assert evaluate(parse("exp(x)"), 1e6) == math.inf

    def test_division_by_zero(self):
        with pytest.raises(ExprEvalError) as info:
            evaluate(parse("1/x"), 0.0)
        assert info.value.x == 0.0
        assert "x" in info.value.subexpression

    def test_log_of_nonpositive(self):
        with pytest.raises(ExprEvalError):
            evaluate(parse("log(x)"), 0.0)

    def test_sqrt_of_negative(self):
        with pytest.raises(ExprEvalError):
            evaluate(parse("sqrt(x-1)"), 0.0)

    def test_zero_to_negative_power(self):
        with pytest.raises(ExprEvalError):
            evaluate(parse("x^(-1)"), 0.0)

    def test_fractional_power_of_negative(self):
        with pytest.raises(ExprEvalError):
            evaluate(parse("(x-2)^0.5"), 0.0)

    def test_no_matching_branch(self):
        with pytest.raises(ExprEvalError):
            evaluate(parse("piecewise {x < 0.5: 1}"), 0.75)


class TestBreakpoints:
    def test_divisor_zero_found(self):
        pts = breakpoints(parse("1/(x-0.3)"), MeasurableSet.full(UNIT))
        assert len(pts) == 1
        assert pts[0] == pytest.approx(0.3, abs=1e-9)

    def test_abs_kink_found(self):
        pts = breakpoints(parse("abs(x-0.5)"), MeasurableSet.full(UNIT))
        assert len(pts) == 1
        assert pts[0] == pytest.approx(0.5, abs=1e-9)

    def test_guard_bounds_reported(self):
        pts = breakpoints(parse("piecewise {x < 0.25: 1; else: 2}"),
                          MeasurableSet.full(UNIT))
        assert pts == (0.25,)

    def test_min_crossing_found(self):
        pts = breakpoints(parse("min(x, 1-x)"), MeasurableSet.full(UNIT))
        assert any(abs(p - 0.5) < 1e-9 for p in pts)

    def test_outside_points_dropped(self):
        s = MeasurableSet.of_interval(UNIT, 0.5, 1.0)
        assert breakpoints(parse("1/(x-0.3)"), s) == ()

    def test_finite_space_has_none(self):
        assert breakpoints(parse("1/(x-0.3)"),
                           MeasurableSet.full(DIE)) == ()


class TestFormat:
    @pytest.mark.parametrize("source", ROUND_TRIP_CORPUS)
    def test_round_trip(self, source):
        tree = parse(source)
        assert parse(format_expr(tree)) == tree

    def test_needed_parens_kept(self):
        assert format_expr(parse("(x+1)*2")) == "(x + 1.0) * 2.0"

    def test_redundant_parens_dropped(self):
        assert format_expr(parse("(x)+(1)")) == "x + 1.0"

    def test_unary_minus_of_power_unparenthesized(self):
        text = format_expr(parse("-x^2"))
        assert "(" not in text
        assert parse(text) == parse("-x^2")


class TestMeasureBridges:
    def test_density_from_expr_evaluates(self):
        d = density_from_expr("2*x", UNIT)
        assert d(0.25) == 0.5

    def test_density_breakpoints_attached(self):
        d = density_from_expr("abs(x-0.5)", UNIT)
        assert any(abs(p - 0.5) < 1e-9 for p in d.breakpoints)

    def test_weight_from_expr_evaluates(self):
        w = weight_from_expr("x^2", UNIT)
        assert w(0.5) == 0.25

    def test_parsed_tree_accepted_directly(self):
        d = density_from_expr(parse("x+1"), UNIT)
        assert d(0.0) == 1.0


class TestParseSet:
    def test_interval_union(self):
        s = parse_set("[0,0.4] U [0.6,1]", UNIT)
        assert s.intervals == ((0.0, 0.4), (0.6, 1.0))

    def test_union_sign_accepted(self):
        s = parse_set("[0,0.4] ∪ [0.6,1]", UNIT)
        assert s.intervals == ((0.0, 0.4), (0.6, 1.0))

    def test_atom_list(self):
        s = parse_set("{1, 3}", DIE)
        assert s.atoms == (1, 3)

    def test_full_keyword(self):
        assert parse_set("full", UNIT) == MeasurableSet.full(UNIT)

    def test_malformed_interval_positioned(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_set("[0,0.4] U (0.6,1)", UNIT)
        assert info.value.position >= 0

    def test_unknown_atom_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse_set("{1, 9}", DIE)

    def test_escaping_interval_rejected(self):
        with pytest.raises(ExprSyntaxError):
            parse_set("[0, 2]", UNIT)
