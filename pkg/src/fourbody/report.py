"""Check records and their JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

PASS = "pass"
FAIL = "fail"
REPORTED = "reported-discrepancy"
STATUSES = (PASS, FAIL, REPORTED)


@dataclass
class Check:
    check_id: str
    status: str
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @classmethod
    def of(cls, check_id: str, ok: bool, **details) -> "Check":
        return cls(check_id, PASS if ok else FAIL, details)

    @property
    def failed(self) -> bool:
        return self.status == FAIL


def rational_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def jsonable(obj: Any) -> Any:
    """Fractions become ``"p/q"``; operators and polynomials their printed form."""
    from .diffop import DiffOperator
    from .poly import Polynomial

    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return rational_str(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (DiffOperator, Polynomial)):
        return obj.to_str()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=str) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return str(obj)


def report_dict(checks: Iterable[Check]) -> dict:
    ordered = sorted(checks, key=lambda c: c.check_id)
    return {"version": 1,
            "checks": [{"check_id": c.check_id, "status": c.status, "details": jsonable(c.details)}
                       for c in ordered]}


def dumps(checks: Iterable[Check]) -> str:
    return json.dumps(report_dict(checks), indent=2, sort_keys=False) + "\n"
