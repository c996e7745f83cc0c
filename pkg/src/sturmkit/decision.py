# Decision: the three-valued answer of every semi-decision procedure.
# YES carries a certificate, NO an obstruction code, UNKNOWN the exhausted bound.

from dataclasses import dataclass
from typing import Any, Optional

YES = "YES"
NO = "NO"
UNKNOWN = "UNKNOWN"

EXIT_CODES = {YES: 0, NO: 1, UNKNOWN: 2}


@dataclass(frozen=True)
class Decision:
    verdict: str
    certificate: Optional[dict] = None
    obstruction: Optional[str] = None
    bound: Optional[int] = None
    note: Optional[str] = None

    @classmethod
    def yes(cls, certificate=None, note=None):
        return cls(YES, certificate=certificate or {}, note=note)

    @classmethod
    def no(cls, obstruction, certificate=None, note=None):
        return cls(NO, certificate=certificate, obstruction=obstruction, note=note)

    @classmethod
    def unknown(cls, bound, note=None):
        return cls(UNKNOWN, bound=bound, note=note)

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def __bool__(self):
        return self.verdict == YES

    def get(self, key, default=None) -> Any:
        return (self.certificate or {}).get(key, default)
