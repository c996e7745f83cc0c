"""Tests for exact real numbers: bases, comparison, modules and wedges"""
import sys
import os
import random
from decimal import Decimal, localcontext
from functools import cmp_to_key
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from sturmkit.errors import BasisMismatch, FormalBasisUnsupported, RankMismatch, SturmkitError
from sturmkit.expr_parser import parse_number
from sturmkit.realnum import (
    EQ, GT, LT,
    WedgeValue,
    compare,
    floor,
    formal_basis,
    frac,
    make,
    minimal_quadratic,
    qspan_of,
    qspan_proportional,
    quadratic_basis,
    sign,
    unify,
    wedge,
    zmodule_of,
)


def q(text):
    return parse_number(text)


# ── Construction ──

def test_make_quadratic_coordinates():
    """make() stores exact rational coordinates over (1, √D)"""
    x = make(quadratic_basis(5), [Fraction(1, 4), Fraction(1, 4)])
    assert x == q("(1+sqrt(5))/4")
    assert x.coords == (Fraction(1, 4), Fraction(1, 4))


def test_make_rank_mismatch():
    """Coordinate count must equal the basis rank"""
    with pytest.raises(RankMismatch):
        make(quadratic_basis(2), [1, 2, 3])


def test_quadratic_basis_requires_squarefree():
    """√8 is not a basis element; D must be squarefree"""
    with pytest.raises(SturmkitError):
        quadratic_basis(8)


def test_formal_basis_metadata():
    """Formal bases declare independence as an axiom"""
    b = formal_basis(["pi"], precision=40)
    data = b.to_dict()
    assert data["elements"] == ["1", "pi"]
    assert data["independence"] == "axiom"
    assert data["precision"] == 40


# ── Arithmetic ──

def test_quadratic_product_and_inverse():
    """(1+√2)(1−√2) = −1 and 1/(1+√2) = √2−1"""
    assert (q("1+sqrt(2)") * q("1-sqrt(2)")).coords == (-1, 0)
    assert q("1+sqrt(2)").inverse() == q("sqrt(2)-1")


def test_rational_promotes_into_quadratic():
    """Rational values join any basis"""
    x, y = unify(q("7/3"), q("sqrt(3)"))
    assert x.basis == y.basis == quadratic_basis(3)
    assert x.coords == (Fraction(7, 3), Fraction(0))


def test_mixed_quadratic_fields_rejected():
    """ℚ(√2) and ℚ(√3) values never combine"""
    with pytest.raises(BasisMismatch):
        unify(q("sqrt(2)"), q("sqrt(3)"))


def test_formal_product_unsupported():
    """Two irrational formal values cannot be multiplied"""
    b = formal_basis(["pi"])
    pi = make(b, [0, 1])
    with pytest.raises(FormalBasisUnsupported):
        pi * pi


def test_str_round_trip():
    """Printed values parse back to themselves"""
    for text in ["3-sqrt(2)", "(1+sqrt(5))/4", "7/3", "-2*sqrt(3)", "sqrt(8)/5"]:
        x = q(text)
        assert q(str(x)) == x


# ── Certified comparison ──

def test_sign_quadratic_exact():
    """√2 < 3/2 < √3 decided exactly"""
    assert sign(q("sqrt(2)-3/2")) == -1
    assert sign(q("sqrt(3)-3/2")) == 1
    assert sign(q("0")) == 0


def test_compare_orders():
    """compare() returns LT, EQ, GT"""
    assert compare(q("sqrt(2)"), q("3/2")) == LT
    assert compare(q("(1+sqrt(5))/2"), q("1+(sqrt(5)-1)/2")) == EQ
    assert compare(q("3-sqrt(2)"), q("3/2")) == GT


def test_floor_and_frac():
    """⌊9φ/2⌋ = 7 and {√2} = √2 − 1"""
    assert floor(q("9*(1+sqrt(5))/4")) == 7
    assert floor(q("-sqrt(2)")) == -2
    assert frac(q("sqrt(2)")) == q("sqrt(2)-1")


def _decimal_oracle(x):
    a, b = x.coords
    d = x.basis.d
    return (Decimal(a.numerator) / Decimal(a.denominator)
            + Decimal(b.numerator) / Decimal(b.denominator) * Decimal(d).sqrt())


def _random_surds(seed, count, d):
    rng = random.Random(seed)
    basis = quadratic_basis(d)
    return [make(basis, (Fraction(rng.randint(-60, 60), rng.randint(1, 30)),
                         Fraction(rng.randint(-20, 20), rng.randint(1, 30))))
            for _ in range(count)]


def test_total_order_matches_decimal():
    """Exact sorting of 1000 surds agrees with 120-digit decimals"""
    values = _random_surds(1000, 1000, 7)
    ordered = sorted(values, key=cmp_to_key(lambda x, y: sign(x - y)))
    with localcontext() as ctx:
        ctx.prec = 120
        decimals = [_decimal_oracle(x) for x in ordered]
    for lo, hi, x, y in zip(decimals, decimals[1:], ordered, ordered[1:]):
        assert lo <= hi
        assert (lo == hi) == (x == y)


def test_to_decimal_hundred_digits():
    """to_decimal(100) is within 10^-90 of the decimal value"""
    with localcontext() as ctx:
        ctx.prec = 120
        for x in _random_surds(100, 50, 13):
            assert abs(Decimal(x.to_decimal(100)) - _decimal_oracle(x)) < Decimal("1e-90")


def test_formal_comparison_by_enclosure():
    """π − 3 > 0 and ⌊π⌋ = 3 over a formal basis"""
    b = formal_basis(["pi"])
    pi = make(b, [0, 1])
    assert sign(pi - 3) == 1
    assert floor(pi) == 3
    assert compare(pi, make(b, [Fraction(22, 7), 0])) == LT


def test_minimal_quadratic_of_half_golden():
    """(1+√5)/4 is a root of 4x² − 2x − 1, Δ = 20"""
    assert minimal_quadratic(q("(1+sqrt(5))/4")) == (4, -2, -1, 20)
    assert minimal_quadratic(q("sqrt(2)")) == (1, 0, -2, 8)


# ── Modules and spans ──

def test_zmodule_rank_and_membership():
    """ℤ + ℤ√2 has rank 2 and contains 3 − 5√2"""
    m = zmodule_of([1, q("sqrt(2)"), q("1+sqrt(2)")])
    assert m.rank == 2
    assert m.contains(q("3-5*sqrt(2)"))
    assert not m.contains(q("1/2"))


def test_zmodule_rational_generators():
    """ℤ·1/2 + ℤ·1/3 = ℤ·1/6"""
    m = zmodule_of([q("1/2"), q("1/3")])
    assert m.rank == 1
    assert m.contains(q("1/6"))
    assert m == zmodule_of([q("1/6")])


def test_submodule():
    """ℤ + 2√2ℤ ⊂ ℤ + √2ℤ"""
    small = zmodule_of([1, q("2*sqrt(2)")])
    big = zmodule_of([1, q("sqrt(2)")])
    assert small.issubmodule(big)
    assert not big.issubmodule(small)


def test_qspan_dimension():
    """The ℚ-span of 1, √2, 3 is two-dimensional"""
    assert qspan_of([1, q("sqrt(2)"), 3]).dim == 2
    assert qspan_of([q("1/2"), 3]).dim == 1


def test_qspan_proportional_fields():
    """ℚ + ℚ√2 and ℚ + ℚ√3 are not proportional; one-dimensional spans always are"""
    a = qspan_of([1, q("sqrt(2)")])
    b = qspan_of([1, q("sqrt(3)")])
    assert qspan_proportional(a, b) is False
    assert qspan_proportional(qspan_of([q("sqrt(2)")]), qspan_of([q("sqrt(3)")])) is True
    assert qspan_proportional(a, qspan_of([q("sqrt(2)"), q("1+sqrt(2)")])) is True


# ── Wedge products ──

def test_wedge_coefficient():
    """(√2−1) ∧ (2−√2) has coefficient −1 on 1∧√2"""
    w = wedge(q("sqrt(2)-1"), q("2-sqrt(2)"))
    assert w.coefficient == -1


def test_wedge_antisymmetric():
    """x ∧ x = 0 and x ∧ y = −(y ∧ x)"""
    x, y = q("1+sqrt(2)"), q("3/2-sqrt(2)")
    assert wedge(x, x).is_zero()
    assert wedge(x, y) == -wedge(y, x)


def test_wedge_rational_is_zero():
    """Rational numbers wedge to zero"""
    assert wedge(q("1/3"), q("7")).is_zero()
    assert WedgeValue.zero(quadratic_basis(2)).is_zero()


def test_wedge_projective():
    """Projective normalization removes rational content and sign"""
    w = wedge(q("sqrt(2)"), q("6"))
    assert w.projective() == wedge(q("1"), q("sqrt(2)"))


def test_wedge_bilinear():
    """(x + y) ∧ z = x ∧ z + y ∧ z and (rx) ∧ z = r(x ∧ z)"""
    rng = random.Random(3)
    b = formal_basis(["sqrt(2)", "sqrt(3)"])
    for _ in range(50):
        x, y, z = (make(b, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)])
                   for _ in range(3))
        r = Fraction(rng.randint(-7, 7), rng.randint(1, 7))
        assert wedge(x + y, z) == wedge(x, z) + wedge(y, z)
        assert wedge(x.scale(r), z) == wedge(x, z).scale(r)
        assert wedge(x, x).is_zero()


def test_projective_and_frac_idempotent():
    """Normalizing twice changes nothing"""
    values = _random_surds(8, 60, 2)
    for x, y in zip(values, values[1:]):
        w = wedge(x, y)
        assert w.projective().projective() == w.projective()
        assert frac(frac(x)) == frac(x)
