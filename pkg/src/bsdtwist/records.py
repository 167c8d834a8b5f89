"""Curve database records."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .curve import CurveModel, make_curve


@dataclass(frozen=True)
class CurveDBRecord:
    label: str
    ainvs: tuple[int, int, int, int, int]
    optimal: bool
    manin_constant: int
    conductor: Optional[int] = None
    rank: Optional[int] = None
    torsion: Optional[tuple[int, ...]] = None
    sha: Optional[int] = None
    isogeny_degrees: Optional[tuple[int, ...]] = None
    # order of Sha for the curve 2-isogenous to this one, when known
    two_isogenous_sha: Optional[int] = None

    def curve(self) -> CurveModel:
        return make_curve(*self.ainvs)

    def to_json(self) -> dict:
        out = {"label": self.label, "ainvs": list(self.ainvs)}
        for key in ("conductor", "rank", "torsion", "optimal", "manin_constant", "sha",
                    "isogeny_degrees", "two_isogenous_sha"):
            val = getattr(self, key)
            if val is not None:
                out[key] = list(val) if isinstance(val, tuple) else val
        return out
