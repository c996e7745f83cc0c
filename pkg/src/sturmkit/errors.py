# Sturmkit Errors
# Every library failure is a SturmkitError (a ValueError), tagged with a
# stable machine code used by the JSON error envelope.


class SturmkitError(ValueError):
    """Base class for all sturmkit failures."""

    code = "error"

    def to_dict(self):
        return {"code": self.code, "message": str(self)}


class RankMismatch(SturmkitError):
    code = "rank-mismatch"


class BasisMismatch(SturmkitError):
    code = "basis-mismatch"


class PrecisionExhausted(SturmkitError):
    code = "precision-exhausted"


class RationalInput(SturmkitError):
    code = "rational-input"


class FormalBasisUnsupported(SturmkitError):
    code = "formal-basis-unsupported"


class PoleHit(SturmkitError):
    code = "pole-hit"


class NotCoprime(SturmkitError):
    code = "not-coprime"


class SingularMatrix(SturmkitError):
    code = "singular-matrix"


class SingularResult(SturmkitError):
    code = "singular-result"


class NotAFactor(SturmkitError):
    code = "not-a-factor"


class NotBijection(SturmkitError):
    code = "not-bijection"


class NonPositiveLength(SturmkitError):
    code = "non-positive-length"


class OutOfDomain(SturmkitError):
    code = "out-of-domain"


class KeaneViolation(SturmkitError):
    code = "keane-violation"


class EmptyCylinder(SturmkitError):
    code = "empty-cylinder"


class IterationCapExceeded(SturmkitError):
    code = "iteration-cap-exceeded"


class ExpressionSyntaxError(SturmkitError):
    """Malformed number expression; position is a 0-based character offset."""

    code = "syntax"

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} at position {position}")
        self.position = position

    def to_dict(self):
        data = super().to_dict()
        data["position"] = self.position
        return data
