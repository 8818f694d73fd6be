"""Check reports shared by every verification routine.

A report is a flat list of entries, one per checked condition, plus an
overall verdict that is the conjunction of the entries.  Reports convert to
plain dicts with rounded floats so that JSON output is byte-stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


class PoleHit(ValueError):
    """An evaluator was asked for a value at (or too near) a declared pole."""


class UndeclaredPole(PoleHit):
    """An evaluator returned a non-finite value away from every declared pole."""


class ConfigError(ValueError):
    """Invalid run configuration or malformed user input."""


def clean_float(x: float, digits: int = 12) -> float | None:
    """Round for serialization; non-finite values become None."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return None
    return float(f"{x:.{digits}g}")


@dataclass
class Entry:
    id: str
    max_residual: float
    samples_used: int
    passed: bool
    tol: float | None = None
    note: str = ""
    extra: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "id": self.id,
            "max_residual": clean_float(self.max_residual),
            "samples_used": int(self.samples_used),
            "pass": bool(self.passed),
        }
        if self.tol is not None:
            d["tol"] = clean_float(self.tol)
        if self.note:
            d["note"] = self.note
        if self.extra:
            d["extra"] = _clean(self.extra)
        return d


def _clean(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int,)):
        return int(obj)
    if isinstance(obj, float):
        return clean_float(obj)
    if isinstance(obj, complex):
        return [clean_float(obj.real), clean_float(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    try:
        import numpy as np

        if isinstance(obj, np.generic):
            return _clean(obj.item())
        if isinstance(obj, np.ndarray):
            return [_clean(v) for v in obj.tolist()]
    except ImportError:  # pragma: no cover
        pass
    return str(obj)


@dataclass
class CheckReport:
    name: str
    entries: list[Entry] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def add(self, id: str, residual: float, tol: float | None, samples: int = 0,
            note: str = "", passed: bool | None = None, **extra: Any) -> Entry:
        r = float(residual)
        if passed is None:
            passed = bool(tol is not None and math.isfinite(r) and r <= tol)
        e = Entry(id, r, samples, bool(passed), tol, note, dict(extra))
        self.entries.append(e)
        return e

    def merge(self, other: "CheckReport", prefix: str = "") -> None:
        for e in other.entries:
            self.entries.append(Entry(prefix + e.id, e.max_residual, e.samples_used,
                                      e.passed, e.tol, e.note, dict(e.extra)))

    def get(self, id: str) -> Entry:
        for e in self.entries:
            if e.id == id:
                return e
        raise KeyError(id)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failed_ids(self) -> list[str]:
        return [e.id for e in self.entries if not e.passed]

    def max_residual(self) -> float:
        return max((e.max_residual for e in self.entries), default=0.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "conditions": [e.to_dict() for e in self.entries],
            "meta": _clean(self.meta),
            "pass": self.passed,
        }

    def summary(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for e in self.entries:
            tag = "ok " if e.passed else "BAD"
            lines.append(f"  [{tag}] {e.id:<28} residual={e.max_residual:.3e}")
        return "\n".join(lines)
