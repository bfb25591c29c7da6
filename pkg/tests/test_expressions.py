from fractions import Fraction as Q

import pytest

from hermlie.expressions import (
    Constraint,
    ExpressionError,
    NotAPerfectSquareError,
    UnboundParameterError,
    evaluate,
    parse_constraint,
    parse_linear_combination,
    parse_two_form_terms,
    split_signed_terms,
    sqrt_fraction,
)


def test_evaluate_basic():
    assert evaluate("3") == 3
    assert evaluate("3/4") == Q(3, 4)
    assert evaluate("-3/4 + 1") == Q(1, 4)
    assert evaluate("2*(1/2 - 2)") == -3
    assert evaluate("sigma/2", {"sigma": Q(5)}) == Q(5, 2)
    assert evaluate("(lambda/2-1)", {"lambda": Q(3)}) == Q(1, 2)


def test_evaluate_unicode_operators():
    # the multiplication sign and unicode minus are synonyms
    assert evaluate("2×3") == 6
    assert evaluate("−2") == -2


def test_unbound_parameter():
    with pytest.raises(UnboundParameterError):
        evaluate("x + 1", {})


def test_division_by_zero_after_substitution():
    with pytest.raises(ExpressionError):
        evaluate("1/t", {"t": Q(0)})


def test_syntax_error_carries_position():
    with pytest.raises(ExpressionError) as err:
        evaluate("2 + ")
    assert err.value.position is not None
    with pytest.raises(ExpressionError):
        evaluate("2 + * 3")
    with pytest.raises(ExpressionError):
        evaluate("0.5")  # decimals are rejected, exact rationals only


def test_sqrt_perfect_squares_only():
    assert sqrt_fraction(Q(4, 9)) == Q(2, 3)
    assert evaluate("sqrt(sigma+omega22)", {"sigma": Q(-1), "omega22": Q(5)}) == 2
    with pytest.raises(NotAPerfectSquareError):
        sqrt_fraction(Q(2))
    with pytest.raises(NotAPerfectSquareError):
        sqrt_fraction(Q(-4))


def test_split_signed_terms():
    assert [(s, t) for s, t, _ in split_signed_terms("a - b + c")] == [
        (1, "a"),
        (-1, "b"),
        (1, "c"),
    ]
    assert [(s, t) for s, t, _ in split_signed_terms("-12+34")] == [(-1, "12"), (1, "34")]
    # embedded unary signs stay inside the term
    assert [(s, t) for s, t, _ in split_signed_terms("2*-3*45")] == [(1, "2*-3*45")]
    assert [(s, t) for s, t, _ in split_signed_terms("-(a+b)*12")] == [(-1, "(a+b)*12")]


def test_two_form_terms():
    assert parse_two_form_terms("0", 6) == {}
    assert parse_two_form_terms("-12", 6) == {(1, 2): Q(-1)}
    assert parse_two_form_terms("2*36", 6) == {(3, 6): Q(2)}
    assert parse_two_form_terms("56-34", 6) == {(5, 6): Q(1), (3, 4): Q(-1)}
    # e-prefixed monomials and parameters
    assert parse_two_form_terms("e12 + sigma*e36", 6, {"sigma": Q(3)}) == {
        (1, 2): Q(1),
        (3, 6): Q(3),
    }
    # paper-style juxtaposition of a parameter with the monomial
    assert parse_two_form_terms("x23", 6, {"x": Q(5)}) == {(2, 3): Q(5)}
    # reversed index pairs fold in by antisymmetry
    assert parse_two_form_terms("43", 6) == {(3, 4): Q(-1)}


def test_two_form_term_errors():
    with pytest.raises(ExpressionError):
        parse_two_form_terms("12+x", 6, {"x": Q(1)})  # no trailing monomial
    with pytest.raises(ExpressionError):
        parse_two_form_terms("103", 6)  # digit 0
    with pytest.raises(ExpressionError):
        parse_two_form_terms("33", 6)  # repeated index
    with pytest.raises(ExpressionError):
        parse_two_form_terms("17", 6)  # out of range
    with pytest.raises(ExpressionError):
        parse_two_form_terms("x1234", 6, {"x12": Q(1)})  # ambiguous juxtaposition


def test_linear_combination():
    assert parse_linear_combination("e2", 4) == {2: Q(1)}
    assert parse_linear_combination("-1/2 e4 + e5", 6) == {4: Q(-1, 2), 5: Q(1)}
    assert parse_linear_combination("-a*e3+((a*a+1)/b)*e4", 4, {"a": Q(2), "b": Q(5)}) == {
        3: Q(-2),
        4: Q(1),
    }
    with pytest.raises(ExpressionError):
        parse_linear_combination("e3 + 4", 4)


def test_constraints():
    c = parse_constraint("sigma > 0")
    assert isinstance(c, Constraint)
    assert c.holds({"sigma": Q(1)}) and not c.holds({"sigma": Q(-1)})
    assert parse_constraint("sigma <= 0").holds({"sigma": Q(0)})
    assert parse_constraint("x != 0").holds({"x": Q(1, 7)})
    assert not parse_constraint("x != 0").holds({"x": Q(0)})
    sq = parse_constraint("square(sigma+omega22)")
    assert sq.holds({"sigma": Q(-1), "omega22": Q(5)})
    assert not sq.holds({"sigma": Q(0), "omega22": Q(2)})
    assert sq.params() == {"sigma", "omega22"}
    with pytest.raises(ExpressionError):
        parse_constraint("sigma > 1")  # right-hand side must be 0
