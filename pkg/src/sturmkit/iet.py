"""
Interval exchange transformations.
src/sturmkit/iet.py

Conventions:
  - intervals are right-closed: I_k = (α_{k−1}, α_k], domain (0, α_d]
  - perm[k−1] is the position of T(I_k) in the image, letters are 1-based
  - orbit words use 0-based symbols (letter k ↦ symbol k−1)

Lengths are stored normalized to total 1 whenever the basis can divide by
the total; `scale` keeps the original total so that actual lengths
(scale·λ_k) survive renormalization. Formal bases with an irrational total
keep unnormalized lengths and scale 1.
"""

import logging
from dataclasses import dataclass
from functools import cached_property, cmp_to_key
from math import lcm
from typing import Optional

from lib.config_loader import get_setting

from .decision import NO, Decision
from .errors import (
    EmptyCylinder,
    IterationCapExceeded,
    KeaneViolation,
    NonPositiveLength,
    NotBijection,
    OutOfDomain,
    SturmkitError,
)
from .realnum import QSpan, RealValue, WedgeValue, qspan_of, qspan_proportional, sign, unify, wedge
from .sturmian import Word

logger = logging.getLogger(__name__)

TOP = "TOP"
BOTTOM = "BOTTOM"


# ─────────────────────────────────────────────────────────────────────────────
# IETSpec
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class IETSpec:
    perm: tuple
    lengths: tuple
    scale: RealValue

    @property
    def d(self):
        return len(self.perm)

    @property
    def basis(self):
        return self.scale.basis

    @property
    def irreducible(self):
        return all(set(self.perm[:k]) != set(range(1, k + 1)) for k in range(1, self.d))

    @cached_property
    def discontinuities(self):
        """α_1, ..., α_d."""
        out, acc = [], RealValue.rational(self.basis, 0)
        for length in self.lengths:
            acc = acc + length
            out.append(acc)
        return tuple(out)

    @property
    def total(self):
        return self.discontinuities[-1]

    @cached_property
    def translations(self):
        """T(x) − x on each interval."""
        zero = RealValue.rational(self.basis, 0)
        out = []
        for k in range(self.d):
            image_left = sum((self.lengths[l] for l in range(self.d) if self.perm[l] < self.perm[k]), zero)
            left = self.discontinuities[k - 1] if k else zero
            out.append(image_left - left)
        return tuple(out)

    def actual_lengths(self):
        return [self.scale * length for length in self.lengths]


def _from_actual(perm, actual):
    actual = list(unify(*actual))
    total = sum(actual[1:], actual[0])
    if total.basis.divisible or total.is_rational():
        return IETSpec(tuple(perm), tuple(a / total for a in actual), total)
    return IETSpec(tuple(perm), tuple(actual), RealValue.rational(total.basis, 1))


def new_iet(perm, lengths):
    """Validated IET; lengths are normalized to total 1 where possible."""
    perm = tuple(int(p) for p in perm)
    d = len(perm)
    if d == 0 or sorted(perm) != list(range(1, d + 1)):
        raise NotBijection(f"{list(perm)} is not a permutation of 1..{d}")
    if len(lengths) != d:
        raise SturmkitError(f"{len(lengths)} lengths for {d} intervals")
    values = unify(*lengths)
    for k, length in enumerate(values, start=1):
        if sign(length) <= 0:
            raise NonPositiveLength(f"length λ_{k} = {length} is not positive")
    return _from_actual(perm, values)


def sturmian_iet(alpha):
    """Two-interval exchange coding the rotation by α with the Sturmian letters."""
    return new_iet((2, 1), [1 - alpha, alpha])


def inverse(T):
    order = sorted(range(T.d), key=lambda k: T.perm[k])
    perm = [0] * T.d
    for i, k in enumerate(order):
        perm[i] = k + 1
    return IETSpec(tuple(perm), tuple(T.lengths[k] for k in order), T.scale)


def reverse(T):
    """Conjugate by the order reversing involution x ↦ total − x."""
    d = T.d
    perm = tuple(d + 1 - T.perm[d - k] for k in range(1, d + 1))
    return IETSpec(perm, tuple(reversed(T.lengths)), T.scale)


def locate(T, x):
    """1-based letter of the interval containing x."""
    if sign(x) <= 0 or sign(x - T.total) > 0:
        raise OutOfDomain(f"{x} is outside (0, {T.total}]")
    lo, hi = 0, T.d - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if sign(x - T.discontinuities[mid]) <= 0:
            hi = mid
        else:
            lo = mid + 1
    return lo + 1


def evaluate(T, x):
    x = unify(x, T.scale)[0]
    return x + T.translations[locate(T, x) - 1]


def orbit_word(T, x, n):
    x = unify(x, T.scale)[0]
    symbols = []
    for _ in range(n):
        k = locate(T, x)
        symbols.append(k - 1)
        x = x + T.translations[k - 1]
    return Word(tuple(symbols), 0, T.d)


def first_return(T, x, right, cap=None):
    """First T-iterate of x landing back in (0, right]."""
    cap = cap or int(get_setting("search.induce_iter_cap", 100000))
    y = evaluate(T, x)
    for _ in range(cap):
        if sign(y - right) <= 0:
            return y
        y = evaluate(T, y)
    raise IterationCapExceeded(f"no return of {x} within {cap} steps")


# ─────────────────────────────────────────────────────────────────────────────
# Discontinuities of powers, language
# ─────────────────────────────────────────────────────────────────────────────

def _sorted(values):
    return sorted(values, key=cmp_to_key(lambda a, b: sign(a - b)))


def power_discontinuities(T, m):
    """Right endpoints of the continuity intervals of T^m, including α_d."""
    if m == 0:
        raise SturmkitError("power must be nonzero")
    base = T if m > 0 else inverse(T)
    back = inverse(base)
    points = {base.total}
    for alpha in base.discontinuities[:-1]:
        y = alpha
        for _ in range(abs(m)):
            points.add(y)
            y = evaluate(back, y)
    return _sorted(points)


def power_factors(T, n):
    """Exact language of length n: one word per continuity interval of T^n."""
    return {orbit_word(T, x, n) for x in power_discontinuities(T, n)}


# ─────────────────────────────────────────────────────────────────────────────
# Rauzy–Veech induction
# ─────────────────────────────────────────────────────────────────────────────

def rauzy_step(T):
    """One step of right Rauzy–Veech induction: (TOP|BOTTOM, induced map)."""
    d = T.d
    t = d - 1
    b = T.perm.index(d)
    if t == b:
        raise KeaneViolation("last interval is fixed in place; permutation is reducible")
    cmp = sign(T.lengths[t] - T.lengths[b])
    if cmp == 0:
        raise KeaneViolation(f"tie λ_{t + 1} = λ_{b + 1} = {T.lengths[t]}")
    actual = T.actual_lengths()
    perm = list(T.perm)
    if cmp > 0:
        kind = TOP
        actual[t] = actual[t] - actual[b]
        pivot = T.perm[t]
        for l in range(d):
            if pivot < T.perm[l] < d:
                perm[l] = T.perm[l] + 1
        perm[b] = pivot + 1
    else:
        kind = BOTTOM
        actual[b] = actual[b] - actual[t]
        order = list(range(b + 1)) + [t] + list(range(b + 1, t))
        perm = [T.perm[l] for l in order]
        actual = [actual[l] for l in order]
    logger.debug(f"[IET] Rauzy {kind}: perm {T.perm} → {tuple(perm)}")
    return kind, _from_actual(perm, actual)


def _projective_key(T):
    if T.basis.divisible or T.total.is_rational():
        return T.perm, T.lengths
    lead = next(c for c in T.lengths[0].coords if c)
    return T.perm, tuple(length.scale(1 / lead) for length in T.lengths)


def _snapshot(T):
    return {"perm": list(T.perm), "lengths": list(_projective_key(T)[1])}


@dataclass(frozen=True)
class RauzyPath:
    steps: tuple
    states: tuple
    period: Optional[tuple] = None
    violation: Optional[int] = None

    @property
    def word(self):
        return "".join(self.steps)

    def types(self, n):
        """First n step types, unrolling a detected period."""
        steps = list(self.steps[:n])
        if self.period is not None:
            pre, per = self.period
            while len(steps) < n:
                steps.append(self.steps[pre + (len(steps) - pre) % per])
        return steps


def rauzy_path(T, depth):
    """Iterate rauzy_step, stopping at a tie or an exactly repeated projective state."""
    seen = {_projective_key(T): 0}
    states = [_snapshot(T)]
    steps = []
    for i in range(depth):
        try:
            kind, T = rauzy_step(T)
        except KeaneViolation:
            logger.debug(f"[IET] Rauzy tie at step {i}")
            return RauzyPath(tuple(steps), tuple(states), violation=i)
        steps.append(kind[0])
        states.append(_snapshot(T))
        key = _projective_key(T)
        if key in seen:
            start = seen[key]
            return RauzyPath(tuple(steps), tuple(states), period=(start, len(steps) - start))
        seen[key] = len(steps)
    return RauzyPath(tuple(steps), tuple(states))


def run_lengths(types):
    """Run lengths of a T/B sequence, starting with the (possibly empty) T run."""
    runs, current, count = [], "T", 0
    for step in types:
        if step == current:
            count += 1
        else:
            runs.append(count)
            current, count = step, 1
    runs.append(count)
    return runs


# ─────────────────────────────────────────────────────────────────────────────
# Keane's condition
# ─────────────────────────────────────────────────────────────────────────────

def keane_check(T, search_depth=None):
    """YES when ido is certified, NO on a witnessed connection, else UNKNOWN."""
    depth = search_depth or int(get_setting("search.keane_depth", 200))
    if not T.irreducible:
        return Decision.no("reducible")
    if T.d == 1:
        return Decision.yes({"reason": "no-discontinuities"})
    if qspan_of(T.actual_lengths(), basis=T.basis).dim == T.d:
        return Decision.yes({"reason": "rationally-independent-lengths"})

    back = inverse(T)
    cuts = {alpha: k for k, alpha in enumerate(T.discontinuities[:-1], start=1)}
    for alpha, k in cuts.items():
        y = alpha
        for n in range(1, depth + 1):
            y = evaluate(back, y)
            if y in cuts:
                return Decision.no("connection", {"from": k, "to": cuts[y], "steps": n})

    path = rauzy_path(T, depth)
    if path.violation is not None:
        return Decision.no("rauzy-tie", {"step": path.violation})
    if path.period is not None:
        pre, per = path.period
        return Decision.yes({"reason": "self-induced", "preperiod": pre, "period": per})
    return Decision.unknown(depth)


def _require_keane(T, depth=None):
    decision = keane_check(T, depth)
    if decision.verdict == NO:
        raise KeaneViolation(f"Keane's condition fails: {decision.obstruction}")
    return decision


# ─────────────────────────────────────────────────────────────────────────────
# Cylinder induction and minimal models
# ─────────────────────────────────────────────────────────────────────────────

def cylinder_interval(T, w):
    """(a, b] of points whose orbit word starts with w."""
    if len(w) == 0:
        return RealValue.rational(T.basis, 0), T.total
    zero = RealValue.rational(T.basis, 0)

    def interval(letter):
        if not 0 <= letter < T.d:
            raise EmptyCylinder(f"symbol {letter} outside the alphabet")
        return (T.discontinuities[letter - 1] if letter else zero), T.discontinuities[letter]

    lo, hi = interval(w.symbols[0])
    shift = zero
    for prev, letter in zip(w.symbols, w.symbols[1:]):
        t = T.translations[prev]
        lo, hi, shift = lo + t, hi + t, shift + t
        a, b = interval(letter)
        lo = lo if sign(lo - a) >= 0 else a
        hi = hi if sign(hi - b) <= 0 else b
        if sign(hi - lo) <= 0:
            raise EmptyCylinder(f"{w.text} is not a factor")
    return lo - shift, hi - shift


def _split(T, lo, hi):
    """Cut (lo, hi] at interior discontinuities; yields (lo, hi, letter index)."""
    cuts = [a for a in T.discontinuities[:-1] if sign(a - lo) > 0 and sign(a - hi) < 0]
    edges = [lo, *cuts, hi]
    for left, right in zip(edges, edges[1:]):
        yield left, right, locate(T, right) - 1


def induced_on_cylinder(T, w, iter_cap=None):
    """First-return IET of T on the cylinder interval of w."""
    cap = iter_cap or int(get_setting("search.induce_iter_cap", 100000))
    a, b = cylinder_interval(T, w)
    zero = RealValue.rational(T.basis, 0)
    active = [(a, b, zero)]
    returned = []
    steps = 0
    while active:
        lo, hi, shift = active.pop()
        steps += 1
        if steps > cap:
            raise IterationCapExceeded(f"inducing on {w.text} exceeded {cap} piece moves")
        for left, right, k in _split(T, lo + shift, hi + shift):
            moved = shift + T.translations[k]
            p, q = left + T.translations[k], right + T.translations[k]
            inner_lo = p if sign(p - a) >= 0 else a
            inner_hi = q if sign(q - b) <= 0 else b
            if sign(inner_hi - inner_lo) > 0:
                returned.append((inner_lo - moved, inner_hi - moved, moved))
            if sign(p - a) < 0:
                active.append((p - moved, (q if sign(q - a) <= 0 else a) - moved, moved))
            if sign(q - b) > 0:
                active.append(((p if sign(p - b) >= 0 else b) - moved, q - moved, moved))

    returned = _sorted_pieces(returned)
    merged = []
    for lo, hi, shift in returned:
        if merged and merged[-1][1] == lo and merged[-1][2] == shift:
            merged[-1] = (merged[-1][0], hi, shift)
        else:
            merged.append((lo, hi, shift))
    image_order = sorted(range(len(merged)), key=cmp_to_key(
        lambda i, j: sign((merged[i][0] + merged[i][2]) - (merged[j][0] + merged[j][2]))))
    perm = [0] * len(merged)
    for position, i in enumerate(image_order, start=1):
        perm[i] = position
    actual = [T.scale * (hi - lo) for lo, hi, _ in merged]
    logger.debug(f"[IET] Induced on {w.text}: d={len(merged)} after {steps} piece moves")
    return _from_actual(perm, actual)


def _sorted_pieces(pieces):
    return sorted(pieces, key=cmp_to_key(lambda p, q: sign(p[0] - q[0])))


def minimal_model(T):
    """
    Merge letters k, k+1 whenever perm(k+1) = perm(k) + 1 until none remain.

    A cyclic-order-preserving permutation collapses this way to the
    two-letter rotation model (2, 1). The pair perm(k) = d, perm(k+1) = 1 is
    kept: on an interval it is not a removable discontinuity.
    """
    perm, actual = list(T.perm), T.actual_lengths()
    merged = True
    while merged:
        merged = False
        for k in range(len(perm) - 1):
            if perm[k + 1] == perm[k] + 1:
                actual[k] = actual[k] + actual.pop(k + 1)
                gone = perm.pop(k + 1)
                perm = [p - 1 if p > gone else p for p in perm]
                merged = True
                break
    return _from_actual(perm, actual)


# ─────────────────────────────────────────────────────────────────────────────
# SAF and rational invariants
# ─────────────────────────────────────────────────────────────────────────────

def saf(T):
    """Σ λ_k ∧ (translation of I_k), over actual lengths."""
    total = WedgeValue.zero(T.basis)
    for length, shift in zip(T.lengths, T.translations):
        total = total + wedge(T.scale * length, T.scale * shift)
    return total


@dataclass(frozen=True)
class RationalInvariants:
    span: QSpan
    saf: WedgeValue


def rational_invariants(T, search_depth=None):
    _require_keane(T, search_depth)
    span = qspan_of(T.actual_lengths(), basis=T.basis).projective()
    return RationalInvariants(span, saf(T).projective())


# ─────────────────────────────────────────────────────────────────────────────
# Conjugacy and flow equivalence of IES
# ─────────────────────────────────────────────────────────────────────────────

def _compare_paths(T1, T2, depth):
    """True/False when the Rauzy paths are decided equal/different, None if undecided."""
    if T1.perm != T2.perm:
        return False
    p1, p2 = rauzy_path(T1, depth), rauzy_path(T2, depth)
    for path in (p1, p2):
        if path.violation is not None:
            raise KeaneViolation(f"Rauzy tie at step {path.violation}")
    s1, s2 = p1.types(depth), p2.types(depth)
    if s1[: len(s2)] != s2[: len(s1)]:
        return False
    if p1.period is None or p2.period is None:
        return None
    horizon = max(p1.period[0], p2.period[0]) + lcm(p1.period[1], p2.period[1])
    return p1.types(horizon) == p2.types(horizon)


def _conjugate(T1, T2, depth):
    if T1.d != T2.d:
        return Decision.no("alphabet-size")
    undecided = False
    for relabel, candidate in (("identity", T2), ("reversal", reverse(T2))):
        if _projective_key(T1) == _projective_key(candidate):
            return Decision.yes({"relabel": relabel, "reason": "identical"})
        verdict = _compare_paths(T1, candidate, depth)
        if verdict:
            return Decision.yes({"relabel": relabel, "reason": "rauzy-path"})
        undecided = undecided or verdict is None
    if undecided:
        return Decision.unknown(depth)
    return Decision.no("rauzy-paths-differ")


def ies_conjugate(T1, T2, depth):
    _require_keane(T1)
    _require_keane(T2)
    return _conjugate(T1, T2, depth)


def ies_flow_equivalent(T1, T2, depth, iter_cap=None):
    """Search cylinder-induced systems up to word length depth for a conjugate pair."""
    _require_keane(T1)
    _require_keane(T2)
    rauzy_depth = int(get_setting("search.rauzy_depth", 200))
    m1, m2 = minimal_model(T1), minimal_model(T2)
    if m1.d != m2.d:
        return Decision.no("minimal-model-size", {"d": [m1.d, m2.d]})
    spans = [qspan_of(T.actual_lengths(), basis=T.basis) for T in (T1, T2)]
    if qspan_proportional(*spans) is False:
        return Decision.no("qspan-class")

    direct = _conjugate(T1, T2, rauzy_depth)
    if direct:
        return Decision.yes({"words": ["", ""], "evidence": direct.certificate})

    def ordered(T, n):
        return sorted(power_factors(T, n), key=lambda w: w.symbols)

    for n in range(1, depth + 1):
        induced2 = [(w, induced_on_cylinder(T2, w, iter_cap)) for w in ordered(T2, n)]
        for w1 in ordered(T1, n):
            I1 = induced_on_cylinder(T1, w1, iter_cap)
            for w2, I2 in induced2:
                if I1.d != I2.d or I1.perm not in (I2.perm, reverse(I2).perm):
                    continue
                decision = _conjugate(I1, I2, rauzy_depth)
                if decision:
                    logger.info(f"[IET] Flow equivalence via cylinders {w1.text}, {w2.text}")
                    return Decision.yes({"words": [w1.text, w2.text], "evidence": decision.certificate})
    return Decision.unknown(depth)
