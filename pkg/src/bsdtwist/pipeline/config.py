"""Run configuration shared by the CLI subcommands."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from ..algebra.ntheory import DEFAULT_SEED
from ..bsdfilter import DEFAULT_S_WITNESS_BOUND
from ..lseries.series import DEFAULT_PRECISION_BITS, DEFAULT_TERM_BUDGET

WORKERS_ENV = "BSDTWIST_WORKERS"
OUT_ENV = "BSDTWIST_OUT"


FAMILIES = ("bsd", "generic")


@dataclass(frozen=True)
class RunConfig:
    input: Optional[Path] = None
    out: Path = Path("out")
    conductor_bound: Optional[int] = None
    d_lo: int = 1
    d_hi: int = 1000
    precision_bits: int = DEFAULT_PRECISION_BITS
    term_budget: int = DEFAULT_TERM_BUDGET
    s_witness_bound: int = DEFAULT_S_WITNESS_BOUND
    strict_a3: bool = False
    seed: int = DEFAULT_SEED
    workers: int = 1
    family: str = "bsd"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.precision_bits < DEFAULT_PRECISION_BITS:
            raise ValueError(f"precision must be at least {DEFAULT_PRECISION_BITS} bits")
        for name in ("term_budget", "s_witness_bound", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.conductor_bound is not None and self.conductor_bound <= 0:
            raise ValueError("conductor_bound must be positive")
        if self.d_lo > self.d_hi:
            raise ValueError("empty twist range")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    def with_env(self, environ=os.environ) -> "RunConfig":
        """Apply the environment overrides (workers and output directory only)."""
        changes = {}
        if environ.get(WORKERS_ENV):
            changes["workers"] = int(environ[WORKERS_ENV])
        if environ.get(OUT_ENV):
            changes["out"] = Path(environ[OUT_ENV])
        return replace(self, **changes) if changes else self

    def fingerprint(self) -> dict:
        """Settings that change computed numbers; a checkpoint is only reused if these agree."""
        return {
            "precision_bits": self.precision_bits,
            "term_budget": self.term_budget,
            "seed": self.seed,
        }
