"""Sturmian decision suite tests"""
import sys
import os
import random
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from sturmkit.decide import (
    self_mult_equivalent,
    sturmian_conjugate,
    sturmian_eventually_flow_equivalent,
    sturmian_flow_equivalent,
    sturmian_isogenous,
    verify_certificate,
)
from sturmkit.decision import NO, UNKNOWN, YES
from sturmkit.errors import RationalInput, SturmkitError
from sturmkit.expr_parser import parse_number
from sturmkit.moebius import IDENTITY, Mat2, apply
from sturmkit.realnum import formal_basis, make, quadratic_basis

PHI_HALF = parse_number("(1+sqrt(5))/4")
PSI_HALF = parse_number("(sqrt(5)-1)/4")


def q(text):
    return parse_number(text)


def _surd_pool(seed, count, cores=(2, 3, 5, 13)):
    rng = random.Random(seed)
    pool = []
    for _ in range(count):
        d = rng.choice(cores)
        pool.append(make(quadratic_basis(d), [
            Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
            Fraction(rng.choice([-1, 1]) * rng.randint(1, 3), rng.randint(1, 4)),
        ]))
    return pool


# ── Conjugacy ──

def test_conjugate_self():
    """α is conjugate to itself with sign 1 and shift 0"""
    decision = sturmian_conjugate(q("sqrt(2)"), q("sqrt(2)"))
    assert decision.verdict == YES
    assert decision.get("sign") == 1
    assert decision.get("shift") == 0


def test_conjugate_reflection():
    """2 − √2 = −(√2 − 1) + 1"""
    decision = sturmian_conjugate(q("sqrt(2)-1"), q("2-sqrt(2)"))
    assert decision.verdict == YES
    assert decision.get("sign") == -1
    assert decision.get("shift") == 1
    assert verify_certificate(decision, q("sqrt(2)-1"), q("2-sqrt(2)"))


def test_conjugate_no():
    """φ/2 and (φ−1)/2 differ by 1/2"""
    assert sturmian_conjugate(PHI_HALF, PSI_HALF).obstruction == "not-conjugate"


def test_conjugate_different_fields():
    """Surds from different fields are never conjugate"""
    decision = sturmian_conjugate(q("sqrt(2)"), q("sqrt(3)"))
    assert decision.verdict == NO
    assert decision.obstruction == "different-fields"


def test_rational_parameter_rejected():
    """Rational parameters raise RationalInput"""
    with pytest.raises(RationalInput):
        sturmian_conjugate(q("1/2"), q("sqrt(2)"))
    with pytest.raises(RationalInput):
        sturmian_flow_equivalent(q("sqrt(2)"), q("3"))


# ── Flow equivalence ──

def test_flow_half_golden_pair():
    """φ/2 and (φ−1)/2 are flow equivalent"""
    decision = sturmian_flow_equivalent(PHI_HALF, PSI_HALF)
    assert decision.verdict == YES
    assert verify_certificate(decision, PHI_HALF, PSI_HALF)


def test_flow_nine_multiple_fails():
    """9φ/2 and 9(φ−1)/2 have different CF cycles"""
    decision = sturmian_flow_equivalent(PHI_HALF.scale(9), PSI_HALF.scale(9))
    assert decision.verdict == NO
    assert decision.obstruction == "cf-cycles-differ"
    assert decision.get("cycles") == [[1, 1, 3, 1, 9, 3], [1, 1, 3, 9, 1, 3]]


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10])
def test_flow_even_multiples(k):
    """kφ/2 and k(φ−1)/2 are flow equivalent for even k"""
    assert sturmian_flow_equivalent(PHI_HALF.scale(k), PSI_HALF.scale(k)).verdict == YES


def test_flow_sqrt2_witness():
    """√2 ~ 3 − √2 via (2 1 / 1 1)"""
    alpha, beta = q("sqrt(2)"), q("3-sqrt(2)")
    decision = sturmian_flow_equivalent(alpha, beta)
    assert decision.verdict == YES
    assert decision.get("matrix") == Mat2(2, 1, 1, 1)
    assert verify_certificate(decision, alpha, beta)


def test_flow_virtual_not_flow():
    """√2/2 and (3−√2)/2 are not flow equivalent"""
    decision = sturmian_flow_equivalent(q("sqrt(2)/2"), q("(3-sqrt(2))/2"))
    assert decision.verdict == NO
    assert decision.get("cycles") == [[2], [1, 4]]


def test_flow_formal_conjugate_fast_path():
    """Formal parameters differing by an integer are flow equivalent"""
    pi = make(formal_basis(["pi"]), [0, 1])
    decision = sturmian_flow_equivalent(pi, pi + 2)
    assert decision.verdict == YES
    assert decision.get("matrix") == Mat2(1, 2, 0, 1)


def test_flow_formal_unknown():
    """Formal parameters without a conjugacy stay undecided"""
    pi = make(formal_basis(["pi"]), [0, 1])
    assert sturmian_flow_equivalent(pi, pi.scale(2)).verdict == UNKNOWN


def test_flow_is_equivalence_relation():
    """Symmetric, and transitive on YES, over a surd pool"""
    pool = _surd_pool(42, 20)
    verdict = {(i, j): sturmian_flow_equivalent(a, b).verdict == YES
               for i, a in enumerate(pool) for j, b in enumerate(pool)}
    n = len(pool)
    for i in range(n):
        assert verdict[i, i]
        for j in range(n):
            assert verdict[i, j] == verdict[j, i]
            for k in range(n):
                if verdict[i, j] and verdict[j, k]:
                    assert verdict[i, k]


# ── Isogeny ──

def test_isogeny_sqrt2():
    """√2 and (3 − √2)/7 are isogenous"""
    alpha, beta = q("sqrt(2)"), q("(3-sqrt(2))/7")
    decision = sturmian_isogenous(alpha, beta)
    assert decision.verdict == YES
    assert decision.get("matrix") == Mat2(1, -3, 0, -7).projective_normal()
    assert verify_certificate(decision, alpha, beta)


def test_isogeny_scaling():
    """α and 3α via diag(3, 1)"""
    alpha = q("(1+sqrt(5))/4")
    decision = sturmian_isogenous(alpha, alpha.scale(3))
    assert decision.get("matrix") == Mat2(3, 0, 0, 1)


def test_isogeny_cores_differ():
    """√2 and √3 are not isogenous"""
    decision = sturmian_isogenous(q("sqrt(2)"), q("sqrt(3)"))
    assert decision.verdict == NO
    assert decision.obstruction == "squarefree-cores-differ"
    assert decision.get("cores") == [2, 3]


def test_isogeny_classified_by_core():
    """Isogeny holds exactly when the squarefree cores agree"""
    pool = _surd_pool(7, 20)
    for a in pool:
        for b in pool:
            decision = sturmian_isogenous(a, b)
            assert (decision.verdict == YES) == (a.basis.d == b.basis.d)
            if decision.verdict == YES:
                assert verify_certificate(decision, a, b)


def test_implication_chain():
    """conjugate ⇒ flow equivalent ⇒ isogenous"""
    pool = _surd_pool(3, 12, cores=(2, 5)) + [q("sqrt(2)-1"), q("2-sqrt(2)"), q("sqrt(2)+4")]
    for a in pool:
        for b in pool:
            if sturmian_conjugate(a, b).verdict == YES:
                assert sturmian_flow_equivalent(a, b).verdict == YES
            if sturmian_flow_equivalent(a, b).verdict == YES:
                assert sturmian_isogenous(a, b).verdict == YES


# ── Eventual flow equivalence ──

def test_eventual_half_golden_fails_at_nine():
    """Multiples of φ/2 and (φ−1)/2 first fail at n = 9"""
    decision = sturmian_eventually_flow_equivalent(PHI_HALF, PSI_HALF, 12)
    assert decision.verdict == NO
    assert decision.obstruction == "multiple-not-flow-equivalent"
    assert decision.get("n") == 9


def test_eventual_bound_reached():
    """Below the failing multiple the answer is UNKNOWN with the bound"""
    decision = sturmian_eventually_flow_equivalent(PHI_HALF, PSI_HALF, 8)
    assert decision.verdict == UNKNOWN
    assert decision.bound == 8


def test_eventual_conjugate_is_yes():
    """α and α + 1 are conjugate, hence eventually flow equivalent"""
    assert sturmian_eventually_flow_equivalent(q("sqrt(3)"), q("sqrt(3)+1"), 5).verdict == YES


def test_eventual_not_equal_mod_q():
    """√2 and √3 differ by an irrational amount"""
    decision = sturmian_eventually_flow_equivalent(q("sqrt(2)"), q("sqrt(3)"), 5)
    assert decision.obstruction == "not-equal-mod-Q"
    decision = sturmian_eventually_flow_equivalent(q("sqrt(2)"), q("2*sqrt(2)"), 5)
    assert decision.obstruction == "not-equal-mod-Q"


def test_eventual_fifths():
    """√2/5 and (√2+2)/5 are either separated by a multiple or undecided"""
    decision = sturmian_eventually_flow_equivalent(q("sqrt(2)/5"), q("(sqrt(2)+2)/5"), 25)
    assert decision.verdict in (NO, UNKNOWN)
    if decision.verdict == NO:
        assert decision.get("n") <= 25


# ── Self-multiple equivalence ──

def test_self_mult_identity():
    """m = 1 is always YES"""
    decision = self_mult_equivalent(q("sqrt(2)"), 1)
    assert decision.verdict == YES
    assert decision.get("matrix") == IDENTITY


def test_self_mult_leading_coefficient():
    """√2 has leading coefficient 1, so no m > 1 works"""
    decision = self_mult_equivalent(q("sqrt(2)"), 2)
    assert decision.verdict == NO
    assert decision.obstruction == "multiplier-does-not-divide-leading-coefficient"


def test_self_mult_half_sqrt2():
    """√2/2 ~ √2 through (2 1 / 1 1)"""
    alpha = q("sqrt(2)/2")
    decision = self_mult_equivalent(alpha, 2)
    assert decision.verdict == YES
    M = decision.get("matrix")
    assert M == Mat2(2, 1, 1, 1)
    assert apply(M, alpha) == alpha.scale(2)
    assert verify_certificate(decision, alpha, alpha.scale(2))


def test_self_mult_bad_multiplier():
    """m must be positive"""
    with pytest.raises(SturmkitError):
        self_mult_equivalent(q("sqrt(2)"), 0)


def test_self_mult_agrees_with_flow():
    """The Pell route and the CF route give the same verdicts"""
    rng = random.Random(2718)
    for _ in range(30):
        d = rng.choice([2, 3, 5, 6, 7])
        alpha = make(quadratic_basis(d), [
            Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3, 4, 5, 6])),
            Fraction(rng.choice([-1, 1]) * rng.randint(1, 3), rng.choice([1, 2, 3, 4, 5, 6])),
        ])
        for m in (2, 3, 5):
            expected = sturmian_flow_equivalent(alpha, alpha.scale(m)).verdict
            assert self_mult_equivalent(alpha, m).verdict == expected, (str(alpha), m)


# ── Certificates ──

def test_verify_rejects_wrong_pair():
    """A certificate does not transfer to another pair"""
    decision = sturmian_flow_equivalent(q("sqrt(2)"), q("3-sqrt(2)"))
    assert not verify_certificate(decision, q("sqrt(2)"), q("sqrt(2)+5"))


def test_verify_rejects_no():
    """NO decisions carry nothing to verify"""
    decision = sturmian_flow_equivalent(q("sqrt(2)"), q("sqrt(3)"))
    assert not verify_certificate(decision, q("sqrt(2)"), q("sqrt(3)"))
