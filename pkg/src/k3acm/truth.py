"""Three-valued answers for predicates that are only partly decidable numerically."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any


class Truth(str, Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ThreeValued:
    value: Truth
    reason: str = ""
    witness: Any = None

    @classmethod
    def yes(cls, reason: str = "", witness: Any = None) -> "ThreeValued":
        return cls(Truth.YES, reason, witness)

    @classmethod
    def no(cls, reason: str = "", witness: Any = None) -> "ThreeValued":
        return cls(Truth.NO, reason, witness)

    @classmethod
    def unknown(cls, reason: str = "", witness: Any = None) -> "ThreeValued":
        return cls(Truth.UNKNOWN, reason, witness)

    @classmethod
    def of(cls, flag: bool, reason: str = "", witness: Any = None) -> "ThreeValued":
        return cls(Truth.YES if flag else Truth.NO, reason, witness)

    @property
    def is_yes(self) -> bool:
        return self.value is Truth.YES

    @property
    def is_no(self) -> bool:
        return self.value is Truth.NO

    @property
    def is_unknown(self) -> bool:
        return self.value is Truth.UNKNOWN

    def __str__(self) -> str:
        return self.value.value

    def negate(self) -> "ThreeValued":
        flipped = {Truth.YES: Truth.NO, Truth.NO: Truth.YES, Truth.UNKNOWN: Truth.UNKNOWN}
        return ThreeValued(flipped[self.value], self.reason, self.witness)


def conjunction(values) -> ThreeValued:
    """No if any is No, else Unknown if any is Unknown, else Yes."""
    values = list(values)
    for v in values:
        if v.is_no:
            return v
    for v in values:
        if v.is_unknown:
            return v
    return ThreeValued.yes()
