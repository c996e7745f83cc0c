"""Number expression parser tests"""
import sys
import os
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from sturmkit.errors import BasisMismatch, ExpressionSyntaxError
from sturmkit.expr_parser import parse_number
from sturmkit.realnum import QUADRATIC, RATIONAL, quadratic_basis


# ── Values ──

def test_integer_and_rational():
    """Plain integers and quotients stay rational"""
    assert parse_number("7").coords == (Fraction(7),)
    assert parse_number("14/6").coords == (Fraction(7, 3),)
    assert parse_number("7").basis.kind == RATIONAL


def test_half_golden_ratio():
    """(1+sqrt(5))/4 has coordinates (1/4, 1/4) over ℚ(√5)"""
    x = parse_number("(1+sqrt(5))/4")
    assert x.basis == quadratic_basis(5)
    assert x.coords == (Fraction(1, 4), Fraction(1, 4))
    assert str(x) == "1/4+1/4*sqrt(5)"


def test_square_factor_extracted():
    """sqrt(8) = 2·sqrt(2) and sqrt(4) = 2"""
    assert parse_number("sqrt(8)").coords == (0, 2)
    assert parse_number("sqrt(8)").basis.d == 2
    assert parse_number("sqrt(4)").basis.kind == RATIONAL
    assert parse_number("sqrt(4)").coords == (2,)


def test_precedence_and_unary():
    """* binds tighter than +, and unary minus nests"""
    assert parse_number("1+2*3").coords == (7,)
    assert parse_number("-(1-3)").coords == (2,)
    assert parse_number("--2").coords == (2,)
    assert parse_number("2*-sqrt(3)").coords == (0, -2)


def test_division_by_surd():
    """Division rationalizes the denominator"""
    assert parse_number("1/(sqrt(2)-1)") == parse_number("1+sqrt(2)")
    assert parse_number("sqrt(2)/sqrt(2)").coords == (1,)


def test_whitespace_ignored():
    """Spaces around tokens, including trailing ones, are skipped"""
    assert parse_number("  3 - sqrt( 2 ) ") == parse_number("3-sqrt(2)")


def test_promote_into_basis():
    """A rational result can be placed into a requested basis"""
    x = parse_number("1/2", basis=quadratic_basis(7))
    assert x.basis.kind == QUADRATIC
    assert x.coords == (Fraction(1, 2), 0)


def test_irrational_cannot_change_basis():
    """sqrt(2) cannot be moved into ℚ(√3)"""
    with pytest.raises(BasisMismatch):
        parse_number("sqrt(2)", basis=quadratic_basis(3))


# ── Errors ──

def test_empty_expression():
    """Empty input reports position 0"""
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_number("   ")
    assert info.value.position == 0


def test_dangling_operator():
    """'1+' fails at the end of input"""
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_number("1+")
    assert info.value.position == 2


def test_unknown_character():
    """Letters other than sqrt are rejected at their offset"""
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_number("2*x")
    assert info.value.position == 2


def test_mixed_square_roots():
    """Two different surds in one expression are a syntax error"""
    with pytest.raises(ExpressionSyntaxError, match="mixed square roots"):
        parse_number("sqrt(2)+sqrt(3)")


def test_division_by_zero():
    """Dividing by an expression equal to zero is reported"""
    with pytest.raises(ExpressionSyntaxError, match="division by zero"):
        parse_number("1/(sqrt(2)-sqrt(2))")


def test_unbalanced_parenthesis():
    """A missing ')' is reported"""
    with pytest.raises(ExpressionSyntaxError):
        parse_number("(1+sqrt(5)/4")


def test_error_dict_carries_position():
    """The error envelope data includes code and position"""
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_number("1+")
    data = info.value.to_dict()
    assert data["code"] == "syntax"
    assert data["position"] == 2
