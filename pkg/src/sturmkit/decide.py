"""
Sturmian decision suite.
src/sturmkit/decide.py

Every procedure returns a Decision. YES certificates are re-checkable with
verify_certificate(); NO carries the obstruction that fired; UNKNOWN carries
the exhausted bound (or None when the input class is not decidable here).
"""

import logging
from fractions import Fraction

from lib.config_loader import get_setting

from .cfrac import canonical_cycle, expand_periodic, pgl2z_witness
from .decision import NO, YES, Decision
from .errors import BasisMismatch, RationalInput, SturmkitError
from .moebius import IDENTITY, Mat2, apply, order_mod, pell_fundamental, rational_stabilizer_element, stabilizer_matrix
from .realnum import FORMAL, QUADRATIC, minimal_quadratic, unify

logger = logging.getLogger(__name__)

__all__ = [
    "Decision",
    "sturmian_conjugate",
    "sturmian_flow_equivalent",
    "sturmian_isogenous",
    "sturmian_eventually_flow_equivalent",
    "self_mult_equivalent",
    "verify_certificate",
]


def _require_irrational(*values):
    for x in values:
        if x.is_rational():
            raise RationalInput(f"{x} is rational; Sturmian parameters must be irrational")


def _both_quadratic(alpha, beta):
    return alpha.basis.kind == QUADRATIC and beta.basis.kind == QUADRATIC


def _conjugacy_shift(alpha, beta):
    """(sign, shift) with β = sign·α + shift, or None."""
    alpha, beta = unify(alpha, beta)
    diff = beta - alpha
    if diff.is_integer():
        return 1, int(diff.rational_part)
    total = beta + alpha
    if total.is_integer():
        return -1, int(total.rational_part)
    return None


def _affine_matrix(sign, shift):
    return Mat2(sign, shift, 0, 1)


# ─────────────────────────────────────────────────────────────────────────────
# Conjugacy and flow equivalence
# ─────────────────────────────────────────────────────────────────────────────

def sturmian_conjugate(alpha, beta):
    """YES(sign, shift) iff α = ±β mod ℤ, i.e. ℤ + αℤ = ℤ + βℤ."""
    _require_irrational(alpha, beta)
    try:
        found = _conjugacy_shift(alpha, beta)
    except BasisMismatch:
        if _both_quadratic(alpha, beta):
            return Decision.no("different-fields")
        raise
    if found is None:
        return Decision.no("not-conjugate")
    sign, shift = found
    return Decision.yes({"sign": sign, "shift": shift})


def sturmian_flow_equivalent(alpha, beta):
    """PGL₂(ℤ)-equivalence of the parameters, decided by CF period cycles."""
    _require_irrational(alpha, beta)
    if alpha.basis.kind == FORMAL or beta.basis.kind == FORMAL:
        try:
            found = _conjugacy_shift(alpha, beta)
        except BasisMismatch:
            found = None
        if found is not None:
            return Decision.yes({"matrix": _affine_matrix(*found)})
        return Decision.unknown(None, note="formal parameters: only the conjugacy fast path is decidable")

    witness = pgl2z_witness(alpha, beta)
    if witness is None:
        cycles = [list(canonical_cycle(expand_periodic(x))) for x in (alpha, beta)]
        logger.info(f"[Decide] {alpha} and {beta} have cycles {cycles[0]} and {cycles[1]}")
        return Decision.no("cf-cycles-differ", certificate={"cycles": cycles})
    witness = witness.projective_normal()
    logger.info(f"[Decide] Flow witness {witness} for {alpha} → {beta}")
    return Decision.yes({"matrix": witness})


def sturmian_isogenous(alpha, beta):
    """PGL₂(ℚ)-equivalence: an affine rational map whenever β ∈ ℚ + ℚα."""
    _require_irrational(alpha, beta)
    if alpha.basis != beta.basis:
        if _both_quadratic(alpha, beta):
            return Decision.no("squarefree-cores-differ",
                               certificate={"cores": [alpha.basis.d, beta.basis.d]})
        return Decision.unknown(None, note="parameters in unrelated bases")

    pivot = next(i for i, c in enumerate(alpha.coords) if i and c)
    s = beta.coords[pivot] / alpha.coords[pivot]
    if any(b != s * a for a, b in zip(alpha.coords[1:], beta.coords[1:])):
        # a quadratic basis is two-dimensional, so this is formal only
        return Decision.unknown(None, note="no affine rational relation between formal parameters")
    r = beta.coords[0] - s * alpha.coords[0]
    witness = Mat2(s, r, 0, 1).projective_normal()
    return Decision.yes({"matrix": witness})


# ─────────────────────────────────────────────────────────────────────────────
# Eventual flow equivalence
# ─────────────────────────────────────────────────────────────────────────────

def sturmian_eventually_flow_equivalent(alpha, beta, n_max=None):
    """
    YES when α = ±β mod ℤ; NO when α ≠ ±β mod ℚ or some multiple pair nα, nβ
    with n ≤ n_max is not flow equivalent; otherwise UNKNOWN.
    """
    n_max = n_max or int(get_setting("search.eventual_n_max", 12))
    conj = sturmian_conjugate(alpha, beta)
    if conj:
        return conj
    try:
        alpha, beta = unify(alpha, beta)
    except BasisMismatch:
        return Decision.no("not-equal-mod-Q")
    if not ((alpha - beta).is_rational() or (alpha + beta).is_rational()):
        return Decision.no("not-equal-mod-Q")

    for n in range(1, n_max + 1):
        decision = sturmian_flow_equivalent(alpha.scale(n), beta.scale(n))
        logger.debug(f"[Decide] n={n}: {decision.verdict}")
        if decision.verdict == NO:
            logger.info(f"[Decide] Multiples fail to be flow equivalent at n={n}")
            return Decision.no("multiple-not-flow-equivalent",
                               certificate={"n": n, "cycles": decision.get("cycles")})
    return Decision.unknown(n_max, note="conjecturally NO: every multiple up to the bound is flow equivalent")


# ─────────────────────────────────────────────────────────────────────────────
# Self-multiple equivalence
# ─────────────────────────────────────────────────────────────────────────────

def self_mult_equivalent(alpha, m):
    """Is α PGL₂(ℤ)-equivalent to mα? Decided through the Pell–Fermat classes of ±4m."""
    _require_irrational(alpha)
    if m < 1:
        raise SturmkitError(f"multiplier must be a positive integer, got {m}")
    if m == 1:
        return Decision.yes({"matrix": IDENTITY})
    if alpha.basis.kind != QUADRATIC:
        return Decision.unknown(None, note="self-multiple equivalence needs a quadratic parameter")

    a, b, c, delta = minimal_quadratic(alpha)
    if a % m:
        return Decision.no("multiplier-does-not-divide-leading-coefficient",
                           certificate={"polynomial": [a, b, c]})
    F = stabilizer_matrix(alpha)
    period = order_mod(F, m)
    target = alpha.scale(m)
    for sol in pell_fundamental(delta, m):
        N = rational_stabilizer_element(alpha, Fraction(sol.x, 2), sol.s)
        for k in range(period):
            if N.m21 % m == 0 and N.m22 % m == 0:
                M = Mat2(N.m11, N.m12, N.m21 / m, N.m22 / m)
                if M.is_integral() and (apply(M, alpha) - target).is_zero():
                    logger.info(f"[Decide] {alpha} ~ {m}·{alpha} via {M}")
                    return Decision.yes({
                        "matrix": M,
                        "pell": {"x": sol.x, "s": sol.s, "sign": sol.sign},
                        "power": k,
                    })
            N = N @ F
    return Decision.no("no-admissible-pell-solution", certificate={"delta": delta, "unit_order": period})


# ─────────────────────────────────────────────────────────────────────────────
# Certificate verification
# ─────────────────────────────────────────────────────────────────────────────

def verify_certificate(decision, alpha, beta):
    """Re-check a YES certificate exactly: a matrix witness or a sign/shift pair."""
    if decision.verdict != YES:
        return False
    matrix = decision.get("matrix")
    if matrix is not None:
        return (apply(matrix, alpha) - beta).is_zero()
    if decision.get("sign") is not None:
        return (alpha.scale(decision.get("sign")) + decision.get("shift", 0) - beta).is_zero()
    return False
