"""Numeric check entries shared by the verification suites."""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["Check", "status_of"]


def status_of(holds: bool, expect_hold: bool) -> str:
    if holds:
        return "pass"
    return "fail" if expect_hold else "flagged"


@dataclass
class Check:
    """A scalar metric compared against a tolerance (``metric <= tolerance``).

    ``expect_hold=False`` marks a known discrepancy: if it fails it is
    reported as ``flagged`` rather than ``fail``.
    """

    name: str
    anchor: str
    metric: float
    tolerance: float
    expect_hold: bool = True
    note: str = ""

    @property
    def holds(self) -> bool:
        return math.isfinite(self.metric) and self.metric <= self.tolerance

    @property
    def status(self) -> str:
        return status_of(self.holds, self.expect_hold)

    def as_entry(self) -> dict:
        return {
            "name": self.name,
            "paper_anchor": self.anchor,
            "status": self.status,
            "metric": float(self.metric),
            "tolerance": float(self.tolerance),
            "note": self.note,
        }
