"""Denjoy system tests: normalization, powers, 2-AI equivalence and flow search"""
import sys
import os
import random
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from sturmkit.decision import NO, YES
from sturmkit.denjoy import (
    canonical_rep,
    flow_equivalent,
    from_sturmian,
    infinitesimal_rank,
    normalize,
    power_params,
    same_orbit,
    state_image,
    two_ai_equivalent,
    two_ai_infinitesimal,
    verify_isogeny_certificate,
)
from sturmkit.errors import NotAFactor, SturmkitError
from sturmkit.expr_parser import parse_number
from sturmkit.moebius import IDENTITY, apply
from sturmkit.realnum import formal_basis, frac, make, promote, quadratic_basis

RHO = parse_number("sqrt(2)-1")


def q(text):
    return parse_number(text)


def _random_params(seed, count):
    rng = random.Random(seed)
    basis = quadratic_basis(2)
    out = []
    for _ in range(count):
        rho = make(basis, [rng.randint(-5, 5), rng.choice([-1, 1]) * rng.randint(1, 4)]).scale(
            Fraction(1, rng.randint(1, 5)))
        reps = [make(basis, [Fraction(rng.randint(0, 9), rng.randint(1, 9)), Fraction(rng.randint(0, 3), 2)])
                for _ in range(rng.randint(0, 3))]
        out.append(normalize(rho, reps))
    return out


# ── Normalization ──

def test_origin_added_when_missing():
    """An empty representative list still carries the origin orbit"""
    p = normalize(RHO, [])
    assert p.origin_added
    assert p.n_orbits == 1
    assert p.reps[0].is_zero()


def test_duplicate_orbits_merged():
    """ρ lies on the origin orbit; 1/2 does not"""
    p = normalize(RHO, [0, RHO, q("1/2")])
    assert not p.origin_added
    assert p.n_orbits == 2
    assert infinitesimal_rank(p) == 1


def test_rotation_reduced_mod_one():
    """ρ = √2 normalizes to √2 − 1"""
    assert normalize(q("sqrt(2)"), [0]).rho == RHO


def test_rational_rotation_rejected():
    """Rotation numbers must be irrational"""
    with pytest.raises(SturmkitError):
        normalize(q("1/3"), [0])


def test_canonical_rep():
    """ρ + 3 is on the origin orbit"""
    assert canonical_rep(RHO, q("sqrt(2)+2")).is_zero()
    assert canonical_rep(RHO, q("7/2")) == promote(q("1/2"), RHO.basis)
    assert canonical_rep(RHO, q("7/2")).basis == RHO.basis


def test_same_orbit():
    """Orbits differ by elements of ℤ + ℤρ"""
    assert same_orbit(RHO, q("1/3"), q("1/3+sqrt(2)"))
    assert not same_orbit(RHO, q("0"), q("1/2"))


def test_state_image_contains_reps():
    """The state image contains 1, ρ and every representative"""
    p = normalize(RHO, [0, q("1/2")])
    module = state_image(p)
    assert module.contains(q("1/2"))
    assert module.contains(RHO)


# ── Powers ──

def test_power_splits_orbits():
    """The square of a Sturmian system has two cut orbits"""
    p2 = power_params(from_sturmian(RHO), 2)
    assert p2.rho == frac(RHO.scale(2))
    assert p2.n_orbits == 2


def test_power_composition():
    """(p^m)^n = p^(mn)"""
    for p in _random_params(11, 10):
        for m, n in [(2, 3), (3, 2), (1, 4)]:
            assert power_params(power_params(p, m), n) == power_params(p, m * n)


def test_power_inverse_keeps_orbits():
    """The inverse map runs on the same space: rotation 1 − ρ, same cut orbits"""
    for p in [normalize(RHO, [q("1/3")])] + _random_params(13, 10):
        inv = power_params(p, -1)
        assert inv.rho == frac(p.rho.scale(-1))
        assert inv.reps == p.reps
        assert power_params(inv, -1) == p


def test_power_zero_rejected():
    """m = 0 has no meaning"""
    with pytest.raises(SturmkitError):
        power_params(from_sturmian(RHO), 0)


# ── 2-AI equivalence ──

def test_sturmian_power_infinitesimal():
    """The m-th power of X_α factors infinitesimally onto X_{mα}"""
    for alpha in [q("sqrt(2)"), q("(1+sqrt(5))/4"), q("(3-sqrt(2))/7")]:
        for m in (2, 3, 5):
            big = power_params(from_sturmian(alpha), m)
            small = from_sturmian(frac(alpha.scale(m)))
            assert two_ai_infinitesimal(big, small)


def test_two_ai_not_a_factor():
    """A representative missing from the larger system is rejected"""
    big = from_sturmian(RHO)
    small = normalize(RHO, [0, q("1/3")])
    with pytest.raises(NotAFactor):
        two_ai_infinitesimal(big, small)


def test_two_ai_reflexive_and_symmetric():
    """2-AI equivalence is reflexive and symmetric"""
    pool = _random_params(5, 12)
    for p in pool:
        assert two_ai_equivalent(p, p).verdict == YES
    for p1 in pool:
        for p2 in pool:
            assert two_ai_equivalent(p1, p2).verdict == two_ai_equivalent(p2, p1).verdict


def test_two_ai_reversed_rotation():
    """ρ and 1 − ρ are 2-AI equivalent with orientation −1"""
    decision = two_ai_equivalent(from_sturmian(RHO), from_sturmian(1 - RHO))
    assert decision.verdict == YES
    assert decision.get("sign") == -1


def test_two_ai_rotation_mismatch():
    """Unrelated rotation numbers are not 2-AI equivalent"""
    decision = two_ai_equivalent(from_sturmian(RHO), from_sturmian(q("sqrt(2)/3")))
    assert decision.verdict == NO
    assert decision.obstruction == "rotation-numbers-differ"


def test_two_ai_span_mismatch_formal():
    """An extra rationally independent cut point changes the ℚ-span"""
    basis = formal_basis(["pi", "sqrt(2)"])
    rho = make(basis, [-3, 1, 0])
    p1 = normalize(rho, [0])
    p2 = normalize(rho, [0, make(basis, [0, 0, 1])])
    decision = two_ai_equivalent(p1, p2)
    assert decision.verdict == NO
    assert decision.obstruction == "qspan-mismatch"


# ── Isogeny certificates and flow equivalence ──

def test_identity_certificate():
    """The identity certifies a system against itself"""
    p = normalize(RHO, [0, q("1/2")])
    assert verify_isogeny_certificate(p, p, IDENTITY)


def test_flow_equivalent_sturmian():
    """X_{√2} and X_{3−√2} are flow equivalent"""
    p0, p1 = from_sturmian(q("sqrt(2)")), from_sturmian(q("3-sqrt(2)"))
    decision = flow_equivalent(p0, p1, 2)
    assert decision.verdict == YES
    M = decision.get("matrix")
    assert (apply(M, p0.rho) - p1.rho).is_integer()
    assert verify_isogeny_certificate(p0, p1, M)


def test_flow_equivalent_self_two_orbits():
    """A two-orbit system is flow equivalent to itself at k = j = 0"""
    p = normalize(RHO, [0, q("1/2")])
    decision = flow_equivalent(p, p, 1)
    assert decision.verdict == YES
    assert decision.get("k") == 0 and decision.get("j") == 0


def test_flow_rotation_obstruction():
    """√2 and φ rotation numbers are not PGL₂(ℤ)-equivalent"""
    decision = flow_equivalent(from_sturmian(RHO), from_sturmian(q("(sqrt(5)-1)/2")), 2)
    assert decision.verdict == NO
    assert decision.obstruction == "rotation-numbers-not-PGL2Z-equivalent"


def test_flow_orbit_count_obstruction():
    """Different numbers of cut orbits"""
    decision = flow_equivalent(normalize(RHO, [0, q("1/2")]), from_sturmian(RHO), 2)
    assert decision.verdict == NO
    assert decision.obstruction == "orbit-count"
