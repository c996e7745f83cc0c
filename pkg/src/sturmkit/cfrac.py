"""
Continued fractions.
src/sturmkit/cfrac.py

Quadratic expansions run on the reduced-surd representation
x_k = (P_k + √N)/Q_k with Q_k | N − P_k², so every step is integer
arithmetic and periodicity is detected by a repeated (P, Q) pair.
Formal-basis values expand digit by digit from certified enclosures.
"""

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .errors import FormalBasisUnsupported, PrecisionExhausted, RationalInput, SturmkitError
from .moebius import IDENTITY, Mat2, apply
from .realnum import (
    FORMAL,
    QUADRATIC,
    RealValue,
    enclosure,
    make,
    max_digits,
    quadratic_basis,
    rational_basis,
    squarefree_core,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContinuedFraction:
    """[c0; c1, ..., (p1, ..., pk)]; an empty period means a finite expansion."""
    preperiod: tuple
    period: tuple = ()

    def __post_init__(self):
        pre = tuple(int(c) for c in self.preperiod)
        per = tuple(int(c) for c in self.period)
        if not pre:
            raise SturmkitError("continued fraction needs an integer part")
        if any(c < 1 for c in pre[1:] + per):
            raise SturmkitError("partial quotients after the first must be ≥ 1")
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def is_finite(self):
        return not self.period

    def digits(self, n):
        """First n partial quotients, unrolling the period."""
        out = list(self.preperiod[:n])
        while len(out) < n and self.period:
            out.extend(self.period[: n - len(out)])
        return out

    def __str__(self):
        head, tail = self.preperiod[0], [str(c) for c in self.preperiod[1:]]
        if self.period:
            tail.append("(" + ", ".join(str(c) for c in self.period) + ")")
        return f"[{head}; {', '.join(tail)}]" if tail else f"[{head}]"


_CF_TEXT = re.compile(r"^\[\s*(-?\d+)\s*(?:;(.*))?\]$")


def parse_cf_text(text):
    """Inverse of str(ContinuedFraction): "[0; 1, (4)]"."""
    m = _CF_TEXT.match(text.strip())
    if not m:
        raise SturmkitError(f"not a continued fraction: {text!r}")
    pre = [int(m.group(1))]
    period = []
    body = (m.group(2) or "").strip()
    if "(" in body:
        body, _, rest = body.partition("(")
        period = [int(c) for c in rest.rstrip(")").split(",") if c.strip()]
    pre += [int(c) for c in body.split(",") if c.strip()]
    return canonical(pre, period)


def canonical(preperiod, period=()):
    """Shortest preperiod (keeping c0), primitive period, no trailing 1."""
    pre, per = list(preperiod), list(period)
    if not per:
        if len(pre) >= 2 and pre[-1] == 1:
            pre = pre[:-2] + [pre[-2] + 1]
        return ContinuedFraction(tuple(pre))
    n = len(per)
    for p in range(1, n + 1):
        if n % p == 0 and per == per[:p] * (n // p):
            per = per[:p]
            break
    while len(pre) > 1 and pre[-1] == per[-1]:
        pre.pop()
        per = [per[-1]] + per[:-1]
    return ContinuedFraction(tuple(pre), tuple(per))


def canonical_cycle(cf):
    """Lexicographically least rotation of the period."""
    per = list(cf.period)
    return min(tuple(per[i:] + per[:i]) for i in range(len(per))) if per else ()


# ─────────────────────────────────────────────────────────────────────────────
# Expansion
# ─────────────────────────────────────────────────────────────────────────────

def _surd_state(x):
    """(P, Q, N) with x = (P + √N)/Q and Q | N − P²."""
    p, q = x.coords
    c = lcm(p.denominator, q.denominator)
    a, b = int(p * c), int(q * c)
    n = b * b * x.basis.d
    if b > 0:
        P, Q = a, c
    else:
        P, Q = -a, -c
    if (n - P * P) % Q:
        P, n, Q = P * abs(Q), n * Q * Q, Q * abs(Q)
    return P, Q, n


def _surd_digit(P, Q, s):
    if Q > 0:
        return (P + s) // Q
    return (-P - s - 1) // (-Q)


def _surd_digits(x):
    """Yield (digit, state) pairs of the expansion of a quadratic irrational."""
    P, Q, N = _surd_state(x)
    s = isqrt(N)
    while True:
        a = _surd_digit(P, Q, s)
        yield a, (P, Q)
        P = a * Q - P
        Q = (N - P * P) // Q


def _rational_digits(q):
    q = Fraction(q)
    while True:
        a = math.floor(q)
        yield a
        q -= a
        if q == 0:
            return
        q = 1 / q


def _formal_digits(x):
    num, den = x, make(x.basis, [1] + [0] * (x.basis.rank - 1))
    cap = max_digits()
    while True:
        digits = x.basis.working_digits()
        while True:
            n_lo, n_hi = enclosure(num, digits)
            d_lo, d_hi = enclosure(den, digits)
            if d_lo > 0:
                lo = min(n_lo / d_lo, n_lo / d_hi)
                hi = max(n_hi / d_lo, n_hi / d_hi)
                if math.floor(lo) == math.floor(hi):
                    break
            if digits >= cap:
                raise PrecisionExhausted(f"digit of {num}/({den}) undecided at {cap} digits")
            digits = min(2 * digits, cap)
        a = math.floor(lo)
        yield a
        num, den = den, num - den.scale(a)
        if den.is_zero():
            return


def expand_prefix(x, n):
    """First n partial quotients (fewer if x is rational with a shorter expansion)."""
    if n < 1:
        raise SturmkitError("n must be ≥ 1")
    if x.is_rational():
        gen = _rational_digits(x.coords[0])
    elif x.basis.kind == QUADRATIC:
        gen = (a for a, _ in _surd_digits(x))
    else:
        gen = _formal_digits(x)
    out = []
    for a in gen:
        out.append(a)
        if len(out) == n:
            break
    return out


def expand_periodic(x):
    """Exact eventually periodic expansion of a rational or quadratic value."""
    if x.is_rational():
        return canonical(list(_rational_digits(x.coords[0])))
    if x.basis.kind == FORMAL:
        raise FormalBasisUnsupported("periodicity is undecidable for formal values")
    seen = {}
    digits = []
    for a, state in _surd_digits(x):
        if state in seen:
            start = seen[state]
            break
        seen[state] = len(digits)
        digits.append(a)
    pre, per = digits[:start], digits[start:]
    if not pre:
        pre, per = [per[0]], per[1:] + [per[0]]
    cf = canonical(pre, per)
    logger.debug(f"[CFrac] {x} = {cf}")
    return cf


def complete_quotient(x, k):
    """x_k with x = convergent_matrix(first k digits)·x_k."""
    for a in expand_prefix(x, k) if k else []:
        x = 1 / (x - a)
    return x


# ─────────────────────────────────────────────────────────────────────────────
# Reconstruction
# ─────────────────────────────────────────────────────────────────────────────

def convergent_matrix(digits):
    """Π (c 1 / 1 0) over the digits; maps the tail to the full number."""
    M = IDENTITY
    for c in digits:
        M = M @ Mat2(c, 1, 1, 0)
    return M


def from_cf(cf):
    pre = convergent_matrix(cf.preperiod)
    if cf.is_finite:
        return RealValue.rational(rational_basis(), pre.m11 / pre.m21)
    M = convergent_matrix(cf.period)
    # purely periodic tail y > 1 solves m21·y² + (m22 − m11)·y − m12 = 0;
    # dividing out the content leaves the primitive form of y, whose
    # discriminant stays small however long the period is
    a, b, c = int(M.m21), int(M.m22 - M.m11), int(-M.m12)
    g = math.gcd(a, b, c)
    a, b, c = a // g, b // g, c // g
    disc = b * b - 4 * a * c
    d = squarefree_core(disc)
    f = isqrt(disc // d)
    y = make(quadratic_basis(d), (Fraction(-b, 2 * a), Fraction(f, 2 * a)))
    return apply(pre, y)


def pgl2z_witness(x, y):
    """M ∈ GL₂(ℤ) with M·x = y when the tails of x and y agree, else None."""
    if x.is_rational() or y.is_rational():
        raise RationalInput("tail equivalence needs irrational inputs")
    cx, cy = expand_periodic(x), expand_periodic(y)
    cycle = canonical_cycle(cx)
    if cycle != canonical_cycle(cy):
        return None
    return _tail_matrix(cy, cycle) @ _tail_matrix(cx, cycle).inverse()


def _tail_matrix(cf, cycle):
    per = list(cf.period)
    for i in range(len(per)):
        if tuple(per[i:] + per[:i]) == cycle:
            return convergent_matrix(list(cf.preperiod) + per[:i])
    raise SturmkitError("cycle is not a rotation of the period")
