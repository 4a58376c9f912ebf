"""Verdict records shared by the inequality checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

__all__ = ["VerdictReport", "make_report", "INEQUALITY_IDS"]

INEQUALITY_IDS = (
    "isoperimetric",
    "cramer_rao_renyi",
    "cramer_rao_omega",
    "cramer_rao_weighted",
    "moment_entropy",
    "cramer_rao_tsallis",
    "cramer_rao_matrix",
    "cm_bound",
    "appendix_b",
    "epi_gaussian",
    "secant_witness",
)


def _plain(v: Any) -> Any:
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


@dataclass
class VerdictReport:
    """Outcome of one inequality check.

    ``passed`` holds iff ``margin >= -tolerance``; when equality is expected
    it additionally requires ``|margin| <= tolerance``.
    """

    inequality_id: str
    inputs: dict
    lhs: Union[float, dict]
    rhs: float
    margin: float
    passed: bool
    tolerance: float
    equality_expected: bool
    anchor: str = ""
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "inputs": _plain(self.inputs),
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
            "margin": _plain(self.margin),
            "pass": bool(self.passed),
            "tolerance": self.tolerance,
            "equality_expected": bool(self.equality_expected),
            "anchor": self.anchor,
            "details": _plain(self.details),
        }


def make_report(inequality_id: str, inputs: dict, lhs, rhs: float, margin: float, tolerance: float,
                equality_expected: bool, anchor: str = "", details: dict | None = None) -> VerdictReport:
    margin = float(margin)
    ok = math.isfinite(margin) and margin >= -tolerance
    if equality_expected:
        ok = ok and abs(margin) <= tolerance
    return VerdictReport(inequality_id, dict(inputs), lhs, float(rhs), margin, bool(ok), float(tolerance),
                         bool(equality_expected), anchor, dict(details or {}))
