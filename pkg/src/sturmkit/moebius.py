"""
Möbius actions, Smith factorization, quadratic stabilizers and Pell classes.
src/sturmkit/moebius.py

Mat2 acts on the projective line by x ↦ (m11·x + m12)/(m21·x + m22).
For a quadratic irrational x with primitive minimal polynomial ax² + bx + c
and discriminant Δ, every rational matrix fixing x has the form

    t·I + s·S,   S = ( -b/2  -c  )
                     (  a    b/2 ),   det = t² − s²Δ/4

Integral stabilizers of determinant ±1 come from solutions (2t, s) of the
Pell–Fermat equation (2t)² − s²Δ = ±4.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from math import isqrt

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex
from sympy.solvers.diophantine.diophantine import diop_DN

from .errors import NotCoprime, PoleHit, SingularMatrix, SingularResult, SturmkitError
from .realnum import make, minimal_quadratic, quadratic_basis, rational_content, sign, squarefree_core

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────────────────────────────────────
# Mat2
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Mat2:
    m11: Fraction
    m12: Fraction
    m21: Fraction
    m22: Fraction

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.det == 0:
            raise SingularMatrix(f"singular matrix {self.rows()}")

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self):
        return self.m11 + self.m22

    def rows(self):
        return [[self.m11, self.m12], [self.m21, self.m22]]

    def entries(self):
        return (self.m11, self.m12, self.m21, self.m22)

    def is_integral(self):
        return all(e.denominator == 1 for e in self.entries())

    def __matmul__(self, other):
        return Mat2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def inverse(self):
        d = self.det
        return Mat2(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)

    def scaled(self, q):
        q = Fraction(q)
        return Mat2(*(q * e for e in self.entries()))

    def __neg__(self):
        return self.scaled(-1)

    def __pow__(self, k):
        base = self if k >= 0 else self.inverse()
        result = IDENTITY
        for _ in range(abs(k)):
            result = result @ base
        return result

    def projective_normal(self):
        """Divide by the rational content and make the first nonzero entry positive."""
        g = rational_content(self.entries())
        lead = next(e for e in self.entries() if e)
        return self.scaled((1 if lead > 0 else -1) / g)

    def projectively_equal(self, other):
        return self.projective_normal() == other.projective_normal()

    def __str__(self):
        return f"({self.m11} {self.m12} / {self.m21} {self.m22})"


def mat_from_rows(rows):
    (a, b), (c, d) = rows
    return Mat2(Fraction(a), Fraction(b), Fraction(c), Fraction(d))


IDENTITY = Mat2(1, 0, 0, 1)
L = Mat2(1, 0, 1, 1)
R = Mat2(1, 1, 0, 1)
J = Mat2(0, 1, 1, 0)


def apply(M, x):
    """(m11·x + m12)/(m21·x + m22), exact in the basis of x."""
    den = x.scale(M.m21) + M.m22
    if den.is_zero():
        raise PoleHit(f"{M} sends {x} to infinity")
    return (x.scale(M.m11) + M.m12) / den


# ─────────────────────────────────────────────────────────────────────────────
# Smith factorization
# ─────────────────────────────────────────────────────────────────────────────

def _complete(v):
    """Integer vector c with det[c v] = 1, for primitive v."""
    s, t, g = igcdex(int(v[0]), int(v[1]))
    if g != 1:
        raise SturmkitError(f"vector {v} is not primitive")
    # det[(t, -s), (v0, v1)] = t·v1 + s·v0 = 1
    return (int(t), int(-s))


def _primitive_image(M):
    """Smallest primitive w (by max-norm) whose image M·w is primitive."""
    for bound in count(1):
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if max(abs(x), abs(y)) != bound:
                    continue
                if _gcd2(x, y) != 1:
                    continue
                u = (int(M.m11 * x + M.m12 * y), int(M.m21 * x + M.m22 * y))
                if _gcd2(*u) == 1:
                    return (x, y), u


def _gcd2(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def smith_factor(M):
    """
    Factor an integer matrix with coprime entries as U·diag(m, 1)·V.

    U, V ∈ SL₂(ℤ) and m = det M, so |m| is the Smith invariant.
    """
    if not M.is_integral():
        raise SturmkitError("smith_factor needs integer entries")
    if _gcd2(_gcd2(int(M.m11), int(M.m12)), _gcd2(int(M.m21), int(M.m22))) != 1:
        raise NotCoprime(f"entries of {M} share a common factor")
    m = int(M.det)

    w, u = _primitive_image(M)
    w_c = _complete(w)
    u_c = _complete(u)
    v = (int(M.m11 * w_c[0] + M.m12 * w_c[1]), int(M.m21 * w_c[0] + M.m22 * w_c[1]))
    # M·w_c = m·u_c + beta·u
    beta = u_c[0] * v[1] - u_c[1] * v[0]
    w_c = (w_c[0] - beta * w[0], w_c[1] - beta * w[1])

    v_inv = Mat2(w_c[0], w[0], w_c[1], w[1])
    U = Mat2(u_c[0], u[0], u_c[1], u[1])
    V = v_inv.inverse()
    logger.debug(f"[Moebius] smith {M} = {U} diag({m},1) {V}")
    return U, m, V


# ─────────────────────────────────────────────────────────────────────────────
# Pell–Fermat
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class PellSolution:
    """x² − s²·delta = 4·sign·m, with x playing the role of 2t."""
    x: int
    s: int
    sign: int
    delta: int
    m: int

    def __post_init__(self):
        if self.x * self.x - self.s * self.s * self.delta != 4 * self.sign * self.m:
            raise SturmkitError(f"({self.x}, {self.s}) does not solve the Pell equation")


def _check_delta(delta):
    if delta <= 0 or delta % 4 not in (0, 1) or _is_square(delta):
        raise SturmkitError(f"discriminant must be a positive non-square ≡ 0,1 mod 4, got {delta}")


def _is_square(n):
    return n >= 0 and isqrt(n) ** 2 == n


def pell_unit(delta):
    """Fundamental solution (u, v), u, v > 0, of u² − v²Δ = 4."""
    from .cfrac import convergent_matrix, expand_periodic

    _check_delta(delta)
    sigma = delta % 2
    omega = _half_surd(sigma, 1, delta)
    cf = expand_periodic(omega)
    pre = convergent_matrix(cf.preperiod)
    G = pre @ convergent_matrix(cf.period) @ pre.inverse()
    if G.det == -1:
        G = G @ G
    if G.trace < 0:
        G = -G
    u, v = int(G.trace), abs(int(G.m21))
    return u, v


def _half_surd(x, s, delta):
    """(x + s·√Δ)/2 as a RealValue in ℚ(√core(Δ))."""
    d = squarefree_core(delta)
    f = _isqrt_exact(delta // d)
    return make(quadratic_basis(d), (Fraction(x, 2), Fraction(s * f, 2)))


def _isqrt_exact(n):
    r = isqrt(n)
    if r * r != n:
        raise SturmkitError(f"{n} is not a square")
    return r


def pell_fundamental(delta, m):
    """
    Representatives of the solution classes of x² − s²Δ = ±4m.

    Classes are taken modulo ±ε^k with ε = (u + v√Δ)/2 the fundamental unit;
    each representative η = (x + s√Δ)/2 is normalized into √m < η ≤ √m·ε.
    """
    _check_delta(delta)
    u, v = pell_unit(delta)
    eps = _half_surd(u, v, delta)
    eps_inv = _half_surd(u, -v, delta)
    f = _isqrt_exact(delta // squarefree_core(delta))

    reps = {}
    for sgn in (1, -1):
        for x0, s0 in diop_DN(delta, 4 * sgn * m):
            for x, s in {(x0, s0), (x0, -s0), (-x0, s0), (-x0, -s0)}:
                eta = _half_surd(int(x), int(s), delta)
                if sign(eta) < 0:
                    eta = -eta
                while sign(eta * eta - m) <= 0:
                    eta = eta * eps
                while sign(eta * eta - (eps * eps).scale(m)) > 0:
                    eta = eta * eps_inv
                key = (int(eta.coords[0] * 2), int(eta.coords[1] * 2 / f))
                reps[key] = sgn
    solutions = [PellSolution(x, s, sgn, delta, m) for (x, s), sgn in reps.items()]
    solutions.sort(key=lambda p: (-p.sign, abs(p.s), p.x, p.s))
    logger.debug(f"[Moebius] pell Δ={delta} m={m}: {len(solutions)} classes")
    return solutions


# ─────────────────────────────────────────────────────────────────────────────
# Stabilizers
# ─────────────────────────────────────────────────────────────────────────────

def rational_stabilizer_element(x, t, s):
    """t·I + s·S for the minimal polynomial of x; fixes x."""
    a, b, c, delta = minimal_quadratic(x)
    t, s = Fraction(t), Fraction(s)
    if t == 0 and s == 0:
        raise SturmkitError("(t, s) must not both vanish")
    if t * t == s * s * Fraction(delta, 4):
        raise SingularResult(f"t² = s²Δ/4 for (t, s) = ({t}, {s})")
    return Mat2(t - s * Fraction(b, 2), -s * c, s * a, t + s * Fraction(b, 2))


def stabilizer_matrix(x):
    """Primitive hyperbolic F_x ∈ SL₂(ℤ) with positive trace fixing x."""
    _, _, _, delta = minimal_quadratic(x)
    u, v = pell_unit(delta)
    F = rational_stabilizer_element(x, Fraction(u, 2), v)
    if not F.is_integral():
        raise SturmkitError(f"stabilizer {F} of {x} is not integral")
    return F


def order_mod(F, m):
    """Multiplicative order of an integer matrix in GL₂(ℤ/m)."""
    ident = (1 % m, 0, 0, 1 % m)
    power = F
    for k in count(1):
        if tuple(int(e) % m for e in power.entries()) == ident:
            return k
        power = power @ F
