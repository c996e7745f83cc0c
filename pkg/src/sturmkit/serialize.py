"""
JSON schemas.
src/sturmkit/serialize.py

to_json() turns library objects into plain JSON data; every top-level
document carries "schema": "sturmkit/1". Rationals are written as
numerator/denominator string pairs so nothing passes through floats.
"""

import json
from fractions import Fraction
from functools import singledispatch

from .cfrac import ContinuedFraction
from .decision import Decision
from .denjoy import DenjoyParams
from .errors import SturmkitError
from .expr_parser import parse_number
from .iet import IETSpec, RationalInvariants, RauzyPath
from .moebius import Mat2, PellSolution
from .realnum import FORMAL, QUADRATIC, Basis, QSpan, RealValue, WedgeValue, ZModule, formal_basis, make, quadratic_basis, rational_basis
from .sturmian import Word

SCHEMA = "sturmkit/1"


def _frac(q):
    q = Fraction(q)
    return [str(q.numerator), str(q.denominator)]


def _rational_string(q):
    return str(Fraction(q))


@singledispatch
def to_json(obj):
    """Plain JSON data for a library object; containers are walked recursively."""
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [to_json(v) for v in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    raise SturmkitError(f"no JSON form for {type(obj).__name__}")


@to_json.register
def _(obj: Fraction):
    return _rational_string(obj)


@to_json.register
def _(obj: Basis):
    return obj.to_dict()


@to_json.register
def _(obj: RealValue):
    return {"basis": obj.basis.to_dict(), "coords": [_frac(c) for c in obj.coords], "text": str(obj)}


@to_json.register
def _(obj: ContinuedFraction):
    return {"preperiod": list(obj.preperiod), "period": list(obj.period), "text": str(obj)}


@to_json.register
def _(obj: Mat2):
    return {"m": [[_rational_string(e) for e in row] for row in obj.rows()]}


@to_json.register
def _(obj: Word):
    return obj.to_dict()


@to_json.register
def _(obj: ZModule):
    return {
        "basis": obj.basis.to_dict(),
        "rank": obj.rank,
        "generators": [to_json(g) for g in obj.generators()],
    }


@to_json.register
def _(obj: QSpan):
    return {
        "basis": obj.basis.to_dict(),
        "dim": obj.dim,
        "rows": [[_frac(c) for c in row] for row in obj.rows],
    }


@to_json.register
def _(obj: WedgeValue):
    r = obj.basis.rank
    terms = [
        {"left": obj.basis.elements[i], "right": obj.basis.elements[j], "coefficient": _rational_string(obj.matrix[i][j])}
        for i in range(r) for j in range(i + 1, r) if obj.matrix[i][j]
    ]
    return {"basis": obj.basis.to_dict(), "terms": terms, "zero": obj.is_zero()}


@to_json.register
def _(obj: Decision):
    data = {
        "verdict": obj.verdict,
        "certificate": to_json(obj.certificate),
        "obstruction": obj.obstruction,
        "bound": obj.bound,
    }
    if obj.note:
        data["note"] = obj.note
    return data


@to_json.register
def _(obj: IETSpec):
    return {
        "perm": list(obj.perm),
        "lengths": [to_json(length) for length in obj.actual_lengths()],
    }


@to_json.register
def _(obj: RauzyPath):
    data = {"steps": obj.word}
    if obj.period is not None:
        data["period"] = {"preperiod": obj.period[0], "period": obj.period[1]}
    if obj.violation is not None:
        data["violation"] = obj.violation
    return data


@to_json.register
def _(obj: DenjoyParams):
    return {
        "rho": to_json(obj.rho),
        "reps": [to_json(q) for q in obj.reps],
        "origin_added": obj.origin_added,
    }


@to_json.register
def _(obj: PellSolution):
    return {"x": obj.x, "s": obj.s, "sign": obj.sign, "delta": obj.delta, "m": obj.m}


@to_json.register
def _(obj: RationalInvariants):
    return {"span": to_json(obj.span), "saf": to_json(obj.saf)}


# ─────────────────────────────────────────────────────────────────────────────
# Input side
# ─────────────────────────────────────────────────────────────────────────────

def basis_from_json(data, precision=None):
    kind = data.get("kind")
    if kind == QUADRATIC:
        return quadratic_basis(data["d"])
    if kind == FORMAL:
        return formal_basis(data["elements"], precision or data.get("precision"))
    return rational_basis()


def value_from_json(data, precision=None):
    """A number from a grammar string, an integer, or the {"basis", "coords"} form."""
    if isinstance(data, bool):
        raise SturmkitError("booleans are not numbers")
    if isinstance(data, int):
        return RealValue.rational(rational_basis(), data)
    if isinstance(data, str):
        text = data.strip()
        if text.startswith("{"):
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise SturmkitError(f"malformed JSON number: {e}") from None
            return value_from_json(data, precision)
        return parse_number(text)
    if isinstance(data, dict) and "coords" in data:
        basis = basis_from_json(data.get("basis", {}), precision)
        coords = [Fraction(int(c[0]), int(c[1])) if isinstance(c, list) else Fraction(c) for c in data["coords"]]
        return make(basis, coords)
    raise SturmkitError(f"cannot read a number from {data!r}")


def envelope(command, result):
    return {"schema": SCHEMA, "command": command, "result": to_json(result)}


def error_envelope(error):
    return {"schema": SCHEMA, "error": error.to_dict()}


def dumps(data):
    """Deterministic JSON text: sorted keys, no trailing spaces."""
    return json.dumps(data, sort_keys=True, ensure_ascii=False)
