"""
Denjoy systems.
src/sturmkit/denjoy.py

A Denjoy system is given by its rotation number ρ ∈ [0, 1) and finitely many
cut-point orbit representatives. Two points lie in the same orbit when they
differ by an element of ℤ + ℤρ; each orbit is stored by a canonical
representative (one irrational coordinate reduced modulo ρ's, then mod 1),
so orbit sets compare by plain equality.
"""

import logging
import math
from dataclasses import dataclass
from functools import cmp_to_key
from itertools import product

from .cfrac import pgl2z_witness
from .decision import Decision
from .errors import BasisMismatch, NotAFactor, SturmkitError
from .moebius import apply, stabilizer_matrix
from .realnum import QUADRATIC, RealValue, frac, promote, qspan_of, sign, unify, zmodule_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DenjoyParams:
    rho: RealValue
    reps: tuple
    origin_added: bool = False

    def __post_init__(self):
        if not self.reps or not self.reps[0].is_zero():
            raise SturmkitError("first orbit representative must be the origin")

    @property
    def n_orbits(self):
        return len(self.reps)

    @property
    def basis(self):
        return self.rho.basis


def _orbit_step(rho):
    """(index, coefficient) of the first irrational coordinate of ρ."""
    for i, c in enumerate(rho.coords[1:], start=1):
        if c:
            return i, c
    raise SturmkitError(f"rotation number {rho} must be irrational")


def canonical_rep(rho, q):
    """Canonical point of the orbit q + ℤ + ℤρ in [0, 1)."""
    q = promote(q, rho.basis)
    i, r = _orbit_step(rho)
    step = rho if r > 0 else -rho
    k = math.floor(q.coords[i] / abs(r))
    return frac(q - step.scale(k))


def same_orbit(rho, q1, q2):
    return zmodule_of([1, rho], basis=rho.basis).contains(q1 - q2)


def _sorted(values):
    return sorted(values, key=cmp_to_key(lambda a, b: sign(a - b)))


def _build(rho, reps, origin_added=False):
    canon = {canonical_rep(rho, promote(q, rho.basis)) for q in reps}
    zero = RealValue.rational(rho.basis, 0)
    if zero not in canon:
        origin_added = True
        canon.add(zero)
    return DenjoyParams(rho, tuple(_sorted(canon)), origin_added)


def normalize(rho, raw_reps):
    """Reduce ρ and the representatives mod 1 and deduplicate orbits."""
    values = unify(rho, *raw_reps) if raw_reps else (rho,)
    rho = frac(values[0])
    if rho.is_rational():
        raise SturmkitError(f"rotation number {rho} must be irrational")
    params = _build(rho, values[1:])
    if params.origin_added:
        logger.warning("[Denjoy] Origin orbit missing from representatives, added")
    return params


def from_sturmian(alpha):
    return normalize(alpha, [0])


# ─────────────────────────────────────────────────────────────────────────────
# Invariants
# ─────────────────────────────────────────────────────────────────────────────

def state_image(p):
    """ℤ + ℤρ + Σ ℤ·q over the representatives."""
    return zmodule_of([1, p.rho, *p.reps], basis=p.basis)


def infinitesimal_rank(p):
    return (p.n_orbits + 1) - state_image(p).rank


def _span(p):
    return qspan_of([1, p.rho, *p.reps], basis=p.basis)


def power_params(p, m):
    """Parameters of the m-th power: rotation mρ, each orbit split into |m|."""
    if m == 0:
        raise SturmkitError("power must be nonzero")
    rho = frac(p.rho.scale(m))
    reps = [q + p.rho.scale(k) for q in p.reps for k in range(abs(m))]
    return _build(rho, reps, p.origin_added)


def two_ai_infinitesimal(big, small):
    """Is the factor from `big` onto `small` infinitesimal (equal ℚ-spans)?"""
    if big.rho != small.rho:
        raise SturmkitError("2-AI factors need a common rotation number")
    missing = set(small.reps) - set(big.reps)
    if missing:
        raise NotAFactor(f"orbits {sorted(str(q) for q in missing)} are not cut orbits of the larger system")
    return _span(big) == _span(small)


def two_ai_equivalent(p1, p2):
    try:
        unify(p1.rho, p2.rho)
    except BasisMismatch:
        return Decision.no("basis-mismatch")
    if (p1.rho - p2.rho).is_integer():
        orientation = 1
    elif (p1.rho + p2.rho).is_integer():
        orientation = -1
    else:
        return Decision.no("rotation-numbers-differ")
    if _span(p1) != qspan_of([1, p2.rho, *(q.scale(orientation) for q in p2.reps)], basis=p1.basis):
        return Decision.no("qspan-mismatch", certificate={"sign": orientation})
    return Decision.yes({"sign": orientation})


# ─────────────────────────────────────────────────────────────────────────────
# Isogeny certificates and flow equivalence
# ─────────────────────────────────────────────────────────────────────────────

def _scale_factor(M, rho0):
    return 1 / (rho0.scale(M.m21) + M.m22)


def verify_isogeny_certificate(p0, p1, M):
    """Check ρ₁ ≡ M·ρ₀ mod ℤ and ℚQ₁ = c·ℚQ₀ + r for some matched rotation r."""
    try:
        unify(p0.rho, p1.rho)
    except BasisMismatch:
        return False
    image = apply(M, p0.rho)
    try:
        if not (image - p1.rho).is_integer():
            return False
    except BasisMismatch:
        return False
    c = _scale_factor(M, p0.rho)
    target = qspan_of([1, p1.rho, *p1.reps], basis=p1.basis)
    for q0, q1 in product(p0.reps, p1.reps):
        r = q1 - c * q0
        scaled = [c, c * p0.rho, r, *(c * q + r for q in p0.reps)]
        if qspan_of(scaled, basis=p1.basis) == target:
            return True
    return False


def _matches(p0, p1, M):
    """Rotation r with q ↦ c·q + r a bijection of orbit sets, else None."""
    c = _scale_factor(M, p0.rho)
    targets = set(p1.reps)
    for q1 in p1.reps:
        r = q1 - c * p0.reps[0]
        image = {canonical_rep(p1.rho, c * q + r) for q in p0.reps}
        if image == targets:
            return canonical_rep(p1.rho, r)
    return None


def _candidate_order(bound):
    pairs = [(k, j) for k in range(-bound, bound + 1) for j in range(-bound, bound + 1)]
    return sorted(pairs, key=lambda kj: (abs(kj[0]) + abs(kj[1]), kj[0], kj[1]))


def flow_equivalent(p0, p1, k_bound):
    """Bounded search for M = ±F₁^k·M₀·F₀^j matching the cut-orbit sets."""
    if p0.basis.kind != QUADRATIC or p1.basis.kind != QUADRATIC:
        raise SturmkitError("Denjoy flow equivalence is decided on quadratic bases only")
    M0 = pgl2z_witness(p0.rho, p1.rho)
    if M0 is None:
        return Decision.no("rotation-numbers-not-PGL2Z-equivalent")
    if p0.n_orbits != p1.n_orbits:
        return Decision.no("orbit-count", certificate={"orbits": [p0.n_orbits, p1.n_orbits]})
    F0, F1 = stabilizer_matrix(p0.rho), stabilizer_matrix(p1.rho)
    for k, j in _candidate_order(k_bound):
        base = (F1 ** k) @ M0 @ (F0 ** j)
        for orientation in (1, -1):
            M = base.scaled(orientation)
            r = _matches(p0, p1, M)
            if r is not None:
                logger.info(f"[Denjoy] Flow witness {M} at k={k} j={j}")
                return Decision.yes({"matrix": M, "rotation": r, "k": k, "j": j, "sign": orientation})
    logger.info(f"[Denjoy] No flow witness within |k|,|j| ≤ {k_bound}")
    return Decision.unknown(k_bound)
