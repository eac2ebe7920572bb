"""Result and error types shared by the engines."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .kripke import KripkeModel


class Verdict(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNSAT_UP_TO_BOUND = "UNSAT-UP-TO-BOUND"

    @property
    def is_sat(self) -> bool:
        return self is Verdict.SAT

    def __str__(self) -> str:
        return self.value


class FragmentError(ValueError):
    """The input lies outside the fragment an engine is proved correct for."""


class VerificationError(RuntimeError):
    """An engine produced a witness that fails independent model checking."""


@dataclass
class SatResult:
    verdict: Verdict
    witness: Optional[KripkeModel] = None
    trace: List[Any] = field(default_factory=list)
    root: Optional[str] = None
    engine: str = ""
    info: Dict[str, Any] = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.verdict.is_sat

    def __post_init__(self):
        if (self.witness is not None) != self.verdict.is_sat:
            raise ValueError("a witness is present exactly for SAT results")
