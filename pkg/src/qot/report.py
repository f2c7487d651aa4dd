"""Interval certificates for supremum-type quantities.

Every estimated supremum is reported as a certificate: a lower bound realized
by an explicit witness plus an upper bound (possibly +inf), never a bare point
value.  Method tags record how each side was obtained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import matrix_to_json

# canonical method tags used across reports
METHOD_EXACT = "exact"
METHOD_CLOSED_FORM = "closed-form"
METHOD_ASCENT_LOWER = "ascent-lower"
METHOD_THEORY_UPPER = "theory-upper"
METHOD_SAMPLE_MAX = "sample-max"


@dataclass
class CostReport:
    """(lower-bound witness, upper bound, metadata) certificate."""

    lower: float
    upper: float
    witness: np.ndarray | None
    method: list[str] = field(default_factory=list)
    seed: int = 0
    checks: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if math.isfinite(self.lower) and math.isfinite(self.upper):
            if self.lower > self.upper + 1e-9:
                raise ValueError(f"certificate has lower {self.lower} > upper {self.upper}")

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.lower) or (math.isinf(self.upper) and self.witness is None)

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "witness": None if self.witness is None else matrix_to_json(self.witness),
            "method": list(self.method),
            "seed": int(self.seed),
            "checks": list(self.checks),
        }
