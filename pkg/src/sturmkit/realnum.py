"""
Exact real numbers over a declared ℚ-basis.
src/sturmkit/realnum.py

A RealValue is a vector of rational coordinates over a Basis:
  - rational:  (1,)                      x
  - quadratic: (1, √D), D squarefree     x + y·√D
  - formal:    (1, e_1, ..., e_{r-1})    x + Σ c_i·e_i, e_i declared ℚ-independent

Quadratic comparisons are exact (sign of a + b√D by squaring). Formal
comparisons refine decimal enclosures of the basis elements, doubling the
working precision up to the configured cap, then raise PrecisionExhausted.

ZModule and QSpan give canonical forms for ℤ- and ℚ-spans (sympy HNF and
rref), WedgeValue represents elements of ℝ∧_ℚℝ in the basis.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt, lcm, log10

from sympy import Matrix, N, Rational, sqrt as sym_sqrt, sympify
from sympy.ntheory.factor_ import core
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from lib.config_loader import get_setting

from .errors import (
    BasisMismatch,
    FormalBasisUnsupported,
    PrecisionExhausted,
    RankMismatch,
    RationalInput,
    SturmkitError,
)

logger = logging.getLogger(__name__)

RATIONAL = "rational"
QUADRATIC = "quadratic"
FORMAL = "formal"

LT, EQ, GT = "LT", "EQ", "GT"


def default_digits():
    return int(get_setting("precision.default_digits", 50))


def max_digits():
    return int(get_setting("precision.max_digits", 10000))


# ─────────────────────────────────────────────────────────────────────────────
# Basis
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Basis:
    """ℚ-basis hosting a family of RealValues. The first element is always 1."""
    kind: str
    d: int = 0
    elements: tuple = ("1",)
    precision: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.kind == RATIONAL:
            object.__setattr__(self, "elements", ("1",))
        elif self.kind == QUADRATIC:
            if self.d < 2 or core(self.d) != self.d:
                raise SturmkitError(f"quadratic basis needs a squarefree D >= 2, got {self.d}")
            object.__setattr__(self, "elements", ("1", f"sqrt({self.d})"))
        elif self.kind == FORMAL:
            elements = tuple(str(e).strip() for e in self.elements)
            if not elements or elements[0] != "1":
                raise SturmkitError("formal basis must start with the constant 1")
            if len(set(elements)) != len(elements):
                raise SturmkitError("formal basis elements must be distinct")
            object.__setattr__(self, "elements", elements)
            for label in elements[1:]:
                approx = _element_approx(label, 10)
                if abs(approx) <= Fraction(1, 10 ** 10):
                    raise SturmkitError(f"formal element {label!r} is not separated from 0")
        else:
            raise SturmkitError(f"unknown basis kind {self.kind!r}")

    @property
    def rank(self):
        return len(self.elements)

    @property
    def divisible(self):
        """Whether every nonzero value has an inverse inside this basis."""
        return self.kind in (RATIONAL, QUADRATIC)

    def working_digits(self):
        return self.precision or default_digits()

    def to_dict(self):
        if self.kind == RATIONAL:
            return {"kind": RATIONAL}
        if self.kind == QUADRATIC:
            return {"kind": QUADRATIC, "d": self.d}
        return {
            "kind": FORMAL,
            "elements": list(self.elements),
            "precision": self.working_digits(),
            "independence": "axiom",
        }


def rational_basis():
    return Basis(RATIONAL)


def quadratic_basis(d):
    return Basis(QUADRATIC, d=int(d))


def formal_basis(elements, precision=None):
    elements = tuple(elements)
    if not elements or elements[0] != "1":
        elements = ("1",) + elements
    return Basis(FORMAL, elements=elements, precision=int(precision or 0))


@lru_cache(maxsize=4096)
def _element_approx(label, digits):
    """Rational a with |element − a| ≤ 10^-digits."""
    expr = sympify(label)
    magnitude = abs(N(expr, 15))
    extra = int(log10(float(magnitude))) + 1 if magnitude > 1 else 0
    value = Rational(expr.evalf(digits + extra + 5))
    return Fraction(int(value.p), int(value.q))


def _sqrt_approx(d, digits):
    scale = 10 ** digits
    return Fraction(isqrt(d * scale * scale), scale)


# ─────────────────────────────────────────────────────────────────────────────
# RealValue
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class RealValue:
    basis: Basis
    coords: tuple

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != self.basis.rank:
            raise RankMismatch(f"{len(coords)} coordinates for a rank-{self.basis.rank} basis")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def rational(cls, basis, q):
        return cls(basis, (Fraction(q),) + (Fraction(0),) * (basis.rank - 1))

    # ── predicates ──

    def is_zero(self):
        return not any(self.coords)

    def is_rational(self):
        return not any(self.coords[1:])

    def is_integer(self):
        return self.is_rational() and self.coords[0].denominator == 1

    @property
    def rational_part(self):
        return self.coords[0]

    # ── arithmetic ──

    def _pair(self, other):
        if isinstance(other, RealValue):
            return unify(self, other)
        if isinstance(other, (int, Fraction)):
            return self, RealValue.rational(self.basis, other)
        return None

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return RealValue(a.basis, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return RealValue(self.basis, tuple(-x for x in self.coords))

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return RealValue(a.basis, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q):
        q = Fraction(q)
        return RealValue(self.basis, tuple(q * x for x in self.coords))

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        if b.is_rational():
            return a.scale(b.coords[0])
        if a.is_rational():
            return b.scale(a.coords[0])
        if a.basis.kind != QUADRATIC:
            raise FormalBasisUnsupported("product of two irrational formal values")
        x1, y1 = a.coords
        x2, y2 = b.coords
        d = a.basis.d
        return RealValue(a.basis, (x1 * x2 + y1 * y2 * d, x1 * y2 + x2 * y1))

    __rmul__ = __mul__

    def conjugate(self):
        """Galois conjugate x − y√D (quadratic basis)."""
        if self.basis.kind != QUADRATIC:
            return self
        x, y = self.coords
        return RealValue(self.basis, (x, -y))

    def norm(self):
        x, y = self.coords
        return x * x - y * y * self.basis.d

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return RealValue.rational(self.basis, 1 / self.coords[0])
        if self.basis.kind != QUADRATIC:
            raise FormalBasisUnsupported("inverse of an irrational formal value")
        return self.conjugate().scale(1 / self.norm())

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a * b.inverse()

    def __rtruediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b * a.inverse()

    # ── order ──

    def sign(self):
        return sign(self)

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __abs__(self):
        return -self if sign(self) < 0 else self

    # ── rendering ──

    def __str__(self):
        return format_value(self)

    def to_decimal(self, digits=20):
        return str(N(to_sympy(self), digits))


def make(basis, coords):
    """RealValue from a basis and a rational coordinate vector."""
    return RealValue(basis, tuple(Fraction(c) for c in coords))


def promote(x, basis):
    """Embed x into basis; only rational-valued x may change basis."""
    if isinstance(x, (int, Fraction)):
        return RealValue.rational(basis, x)
    if x.basis == basis:
        return x
    if x.is_rational():
        return RealValue.rational(basis, x.coords[0])
    raise BasisMismatch(f"value {x} cannot be moved into basis {basis.to_dict()}")


def common_basis(values):
    target = None
    for v in values:
        if isinstance(v, RealValue) and not v.is_rational():
            if target is None:
                target = v.basis
            elif v.basis != target:
                raise BasisMismatch("values live in different bases")
    if target is None:
        for v in values:
            if isinstance(v, RealValue) and v.basis.kind != RATIONAL:
                return v.basis
        return rational_basis()
    return target


def unify(*values):
    """Bring values to one basis, promoting rational-valued entries."""
    basis = common_basis(values)
    return tuple(promote(v, basis) for v in values)


def to_sympy(x):
    if x.basis.kind == QUADRATIC:
        return _rat(x.coords[0]) + _rat(x.coords[1]) * sym_sqrt(x.basis.d)
    return sum((_rat(c) * sympify(label) for c, label in zip(x.coords, x.basis.elements)), Rational(0))


def _rat(q):
    return Rational(q.numerator, q.denominator)


def format_value(x):
    if x.basis.kind == FORMAL:
        parts = [str(x.coords[0])] if x.coords[0] or x.is_zero() else []
        for c, label in zip(x.coords[1:], x.basis.elements[1:]):
            if c:
                parts.append(f"{c}*[{label}]")
        return "+".join(parts).replace("+-", "-")
    p = x.coords[0]
    if x.is_rational():
        return str(p)
    q = x.coords[1]
    surd = f"sqrt({x.basis.d})"
    mag = abs(q)
    term = surd if mag == 1 else f"{mag}*{surd}"
    if p == 0:
        return term if q > 0 else f"-{term}"
    return f"{p}{'+' if q > 0 else '-'}{term}"


# ─────────────────────────────────────────────────────────────────────────────
# Certified comparison
# ─────────────────────────────────────────────────────────────────────────────

def enclosure(x, digits):
    """Rational interval [lo, hi] containing x, width ≤ 2·Σ|c_i|·10^-digits."""
    if x.is_rational():
        return x.coords[0], x.coords[0]
    eps = Fraction(1, 10 ** digits)
    if x.basis.kind == QUADRATIC:
        centre = x.coords[0] + x.coords[1] * _sqrt_approx(x.basis.d, digits)
        err = abs(x.coords[1]) * eps
    else:
        centre = x.coords[0]
        err = Fraction(0)
        for c, label in zip(x.coords[1:], x.basis.elements[1:]):
            if c:
                centre += c * _element_approx(label, digits)
                err += abs(c) * eps
    return centre - err, centre + err


def _refine(x, decide):
    """Widen precision until decide(lo, hi) returns a value, or hit the cap."""
    digits = x.basis.working_digits()
    cap = max_digits()
    while True:
        lo, hi = enclosure(x, digits)
        result = decide(lo, hi)
        if result is not None:
            return result
        if digits >= cap:
            raise PrecisionExhausted(f"enclosures of {x} not separated at {cap} digits")
        digits = min(2 * digits, cap)
        logger.debug(f"[RealNum] Refining {x} to {digits} digits")


def sign(x):
    """Exact sign of x as -1, 0 or 1."""
    if x.is_rational():
        c = x.coords[0]
        return (c > 0) - (c < 0)
    if x.basis.kind == QUADRATIC:
        a, b = x.coords
        d = x.basis.d
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sa == 0 or sa == sb:
            return sb
        # mixed signs: a + b√D has the sign of the term with larger square
        lhs, rhs = a * a, b * b * d
        return sa if lhs > rhs else sb
    return _refine(x, lambda lo, hi: 1 if lo > 0 else (-1 if hi < 0 else None))


def compare(x, y):
    s = sign(x - y) if isinstance(x, RealValue) else -sign(y - x)
    return LT if s < 0 else (GT if s > 0 else EQ)


def floor(x):
    """Greatest integer ≤ x."""
    if x.is_rational():
        return math.floor(x.coords[0])
    if x.basis.kind == QUADRATIC:
        digits = len(str(abs(x.coords[1].numerator))) + 2
        lo, _ = enclosure(x, digits)
        n = math.floor(lo)
        while sign(x - n) < 0:
            n -= 1
        while sign(x - (n + 1)) >= 0:
            n += 1
        return n
    return _refine(x, lambda lo, hi: math.floor(lo) if math.floor(lo) == math.floor(hi) else None)


def frac(x):
    """Fractional part x − ⌊x⌋ in [0, 1)."""
    return x - floor(x)


def minimal_quadratic(x):
    """Primitive (a, b, c) with a > 0 and ax² + bx + c = 0, plus Δ = b² − 4ac."""
    if x.basis.kind == FORMAL and not x.is_rational():
        raise FormalBasisUnsupported("minimal polynomial of a formal value")
    if x.is_rational():
        raise RationalInput(f"{x} is rational")
    p, q = x.coords
    coeffs = [Fraction(1), -2 * p, p * p - q * q * x.basis.d]
    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = gcd(*ints)
    a, b, c = (v // g for v in ints)
    return a, b, c, b * b - 4 * a * c


def squarefree_core(n):
    return int(core(n)) if n > 0 else 0


def rational_content(values):
    """Positive rational g with values/g integral and globally coprime."""
    nonzero = [Fraction(v) for v in values if v]
    if not nonzero:
        return Fraction(1)
    return Fraction(gcd(*(v.numerator for v in nonzero)), lcm(*(v.denominator for v in nonzero)))


# ─────────────────────────────────────────────────────────────────────────────
# ℤ-modules and ℚ-spans
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ZModule:
    """ℤ-span stored as (1/denominator)·columns with columns in Hermite normal form."""
    basis: Basis
    denominator: int
    columns: tuple

    @property
    def rank(self):
        return len(self.columns)

    def generators(self):
        return [make(self.basis, [Fraction(v, self.denominator) for v in col]) for col in self.columns]

    def contains(self, x):
        return zmodule_of(self.generators() + [x], basis=self.basis) == self

    def issubmodule(self, other):
        return all(other.contains(g) for g in self.generators())

    def to_qspan(self):
        return qspan_of(self.generators(), basis=self.basis)


def zmodule_of(values, basis=None):
    """Canonical ℤ-module generated by values."""
    values = list(values)
    if basis is None:
        basis = common_basis(values)
    values = [promote(v, basis) for v in values]
    den = lcm(1, *(c.denominator for v in values for c in v.coords))
    rows = [[int(v.coords[i] * den) for v in values] for i in range(basis.rank)]
    if not values or not any(any(row) for row in rows):
        return ZModule(basis, 1, ())
    hnf = hermite_normal_form(DomainMatrix.from_Matrix(Matrix(rows)).to_dense()).to_Matrix()
    columns = tuple(
        tuple(int(hnf[i, j]) for i in range(hnf.rows)) for j in range(hnf.cols)
    )
    return ZModule(basis, den, columns)


@dataclass(frozen=True)
class QSpan:
    """ℚ-subspace stored as its reduced row-echelon rows."""
    basis: Basis
    rows: tuple

    @property
    def dim(self):
        return len(self.rows)

    def generators(self):
        return [make(self.basis, row) for row in self.rows]

    def contains(self, x):
        return qspan_of(self.generators() + [x], basis=self.basis) == self

    def projective(self):
        """Representative of the class {c·V : c real}, when the basis allows division."""
        if not self.rows or not self.basis.divisible:
            return self
        pivot = self.generators()[0]
        return qspan_of([g / pivot for g in self.generators()], basis=self.basis)


def qspan_of(values, basis=None):
    values = list(values)
    if basis is None:
        basis = common_basis(values)
    values = [promote(v, basis) for v in values]
    if not values or all(v.is_zero() for v in values):
        return QSpan(basis, ())
    reduced, pivots = Matrix([[_rat(c) for c in v.coords] for v in values]).rref()
    rows = tuple(
        tuple(Fraction(int(reduced[i, j].p), int(reduced[i, j].q)) for j in range(reduced.cols))
        for i in range(len(pivots))
    )
    return QSpan(basis, rows)


def qspan_proportional(a, b):
    """Is there a real c ≠ 0 with c·A = B? None when it cannot be decided."""
    if a.dim != b.dim:
        return False
    if a.dim <= 1:
        return True
    if a.basis == b.basis:
        if a.basis.divisible or a == b:
            return True
        return None
    if a.basis.kind == QUADRATIC and b.basis.kind == QUADRATIC:
        # both are whole fields; distinct quadratic fields are never proportional
        return False
    return None


# ─────────────────────────────────────────────────────────────────────────────
# Wedge products
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class WedgeValue:
    basis: Basis
    matrix: tuple

    @classmethod
    def zero(cls, basis):
        r = basis.rank
        return cls(basis, tuple(tuple(Fraction(0) for _ in range(r)) for _ in range(r)))

    def is_zero(self):
        return not any(any(row) for row in self.matrix)

    @property
    def coefficient(self):
        """Coefficient on 1∧e_1 (the whole value for a quadratic basis)."""
        return self.matrix[0][1] if self.basis.rank > 1 else Fraction(0)

    def __add__(self, other):
        if self.basis != other.basis:
            raise BasisMismatch("wedge values from different bases")
        return WedgeValue(self.basis, tuple(
            tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix)
        ))

    def scale(self, q):
        q = Fraction(q)
        return WedgeValue(self.basis, tuple(tuple(q * x for x in row) for row in self.matrix))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def upper(self):
        r = self.basis.rank
        return [self.matrix[i][j] for i in range(r) for j in range(i + 1, r)]

    def projective(self):
        """Content-normalized with the first nonzero upper entry positive."""
        entries = self.upper()
        if not any(entries):
            return self
        g = rational_content(entries)
        lead = next(e for e in entries if e)
        return self.scale((1 if lead > 0 else -1) / g)


def wedge(x, y):
    x, y = unify(x, y)
    r = x.basis.rank
    return WedgeValue(x.basis, tuple(
        tuple(x.coords[i] * y.coords[j] - x.coords[j] * y.coords[i] for j in range(r))
        for i in range(r)
    ))
