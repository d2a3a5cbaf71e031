"""Result records shared by the verification routines."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator


def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


@dataclass
class IdentityReport:
    """Outcome of one identity check.

    ``certified_precision`` and ``tail_bound`` are u-adic exponents and only
    appear for checks done at the infinite place; ``witness`` names the first
    differing monomial or coefficient on failure.
    """

    identity: str
    params: dict[str, Any]
    passed: bool
    witness: Any = None
    certified_precision: Any = None
    tail_bound: Any = None
    millis: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self, timing: bool = True) -> dict[str, Any]:
        out = {
            "identity": self.identity,
            "params": _plain(self.params),
            "pass": self.passed,
            "witness": _plain(self.witness),
            "certified_precision_exponent": _plain(self.certified_precision),
            "tail_bound_exponent": _plain(self.tail_bound),
        }
        if self.details:
            out["details"] = _plain(self.details)
        if timing:
            out["millis"] = round(self.millis, 3)
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True)


@contextmanager
def stopwatch() -> Iterator[list[float]]:
    """Yields a one-element list that receives the elapsed milliseconds."""
    box = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = (time.perf_counter() - t0) * 1000.0
