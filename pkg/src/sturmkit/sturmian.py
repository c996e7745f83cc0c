"""
Sturmian words.
src/sturmkit/sturmian.py

Coding convention: x_n = 0 when {nα} ∈ [0, 1−α), else 1; equivalently
x_n = ⌊(n+1)α⌋ − ⌊nα⌋. The language of length n is read off the circle
partition by the points {−kα}, 0 ≤ k ≤ n, one factor per arc.

S-adic generation: for α = [0; a1, a2, ...] put d1 = a1 − 1, dk = ak and
σ_d = L'^d ∘ J (σ_d(0) = 0^d 1, σ_d(1) = 0). The standard words
s_k = σ_{d1} ∘ ... ∘ σ_{dk}(0) converge to the characteristic word, and
"0" + s_k is a prefix of the coding from n = 0.
"""

from dataclasses import dataclass
from math import isqrt

import numpy as np

from .cfrac import expand_prefix
from .errors import SturmkitError
from .realnum import QUADRATIC, floor, frac, sign, zmodule_of


@dataclass(frozen=True)
class Word:
    symbols: tuple
    offset: int = 0
    alphabet: int = 2

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        if any(s < 0 or s >= self.alphabet for s in symbols):
            raise SturmkitError(f"symbol outside alphabet of size {self.alphabet}")
        object.__setattr__(self, "symbols", symbols)

    def __len__(self):
        return len(self.symbols)

    @property
    def text(self):
        return "".join(str(s) for s in self.symbols)

    def __str__(self):
        return f"{self.text}@{self.offset}"

    def to_dict(self):
        return {"alphabet": self.alphabet, "offset": self.offset, "symbols": self.text}


def word_from_text(text, alphabet=2):
    """Parse "0110" or "0110@3"."""
    body, _, offset = text.partition("@")
    return Word(tuple(int(c) for c in body.strip()), int(offset or 0), alphabet)


def subwords(word, n):
    """Distinct length-n subwords, via numpy sliding windows."""
    if n > len(word) or n < 1:
        return set()
    arr = np.asarray(word.symbols, dtype=np.int64)
    windows = np.unique(np.lib.stride_tricks.sliding_window_view(arr, n), axis=0)
    return {Word(tuple(int(s) for s in row), 0, word.alphabet) for row in windows}


def letter_frequency(word):
    counts = np.bincount(np.asarray(word.symbols, dtype=np.int64), minlength=word.alphabet)
    return counts / max(len(word), 1)


# ─────────────────────────────────────────────────────────────────────────────
# Parameters and coding
# ─────────────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class SturmianParams:
    alpha: object

    def __post_init__(self):
        if self.alpha.is_rational():
            raise SturmkitError(f"Sturmian parameter must be irrational, got {self.alpha}")
        if sign(self.alpha) <= 0 or sign(self.alpha - 1) >= 0:
            raise SturmkitError(f"Sturmian parameter must lie in (0, 1), got {self.alpha}")


def sturmian_params(alpha):
    """Parameters for α reduced mod 1."""
    return SturmianParams(frac(alpha))


def _floor_multiple(alpha, n):
    """⌊nα⌋; integer-only for quadratic α."""
    if n == 0:
        return 0
    if alpha.basis.kind != QUADRATIC:
        return floor(alpha.scale(n))
    p, q = alpha.coords
    c = p.denominator * q.denominator
    a, b = int(n * p * c), int(n * q * c)
    r = isqrt(b * b * alpha.basis.d)
    return (a + r) // c if b > 0 else (a - r - 1) // c


def _symbol_at(alpha, n):
    return _floor_multiple(alpha, n + 1) - _floor_multiple(alpha, n)


def sturmian_window(p, i, j):
    """Symbols x_n for i ≤ n < j."""
    if i >= j:
        raise SturmkitError("window needs i < j")
    floors = [_floor_multiple(p.alpha, n) for n in range(i, j + 1)]
    return Word(tuple(b - a for a, b in zip(floors, floors[1:])), i)


def _coding_word(alpha, start, n):
    cut = 1 - alpha
    symbols = []
    y = start
    for _ in range(n):
        symbols.append(0 if sign(y - cut) < 0 else 1)
        y = frac(y + alpha)
    return Word(tuple(symbols))


def factors(p, n):
    """All length-n factors, one per arc of the partition by {−kα}, 0 ≤ k ≤ n."""
    if n < 1:
        raise SturmkitError("factor length must be ≥ 1")
    points = {frac(p.alpha.scale(-k)) for k in range(n + 1)}
    return {_coding_word(p.alpha, t, n) for t in points}


# ─────────────────────────────────────────────────────────────────────────────
# Substitutions
# ─────────────────────────────────────────────────────────────────────────────

SUBSTITUTIONS = {
    "J": ("1", "0"),
    "R": ("01", "1"),
    "L": ("0", "10"),
    # mirror images of R and L
    "R'": ("10", "1"),
    "L'": ("0", "01"),
}


def _substitute_text(name, text):
    try:
        image0, image1 = SUBSTITUTIONS[name]
    except KeyError:
        raise SturmkitError(f"unknown substitution {name!r}") from None
    return "".join(image0 if c == "0" else image1 for c in text)


def substitution_apply(name, w):
    if w.alphabet != 2:
        raise SturmkitError("substitutions act on binary words")
    return word_from_text(_substitute_text(name, w.text))


def _sigma(d, text):
    text = _substitute_text("J", text)
    for _ in range(d):
        text = _substitute_text("L'", text)
    return text


def sadic_prefix(p, length):
    """Length-`length` prefix of the coding from n = 0, built from CF digits."""
    if length < 1:
        raise SturmkitError("prefix length must be ≥ 1")
    depth = 2
    while True:
        digits = expand_prefix(p.alpha, depth + 1)[1:]
        exponents = [digits[0] - 1] + digits[1:]
        text = "0"
        for d in reversed(exponents):
            text = _sigma(d, text)
        if len(text) >= length - 1:
            break
        depth += 4
    return word_from_text(("0" + text)[:length])


def state_image(p):
    """ℤ + αℤ."""
    return zmodule_of([1, p.alpha])
