"""Algebraic L-values and analytic orders of Sha for rank-0 curves and twists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from ..algebra.ntheory import DEFAULT_SEED, fundamental_discriminant, kronecker, squarefree_part
from ..curve import CurveModel, minimal_model, quadratic_twist, torsion_subgroup
from ..localdata import conductor as conductor_of
from ..localdata import local_data
from .period import PrecisionError, least_real_period, real_period, snap_rational
from .points import ApTable, ap_table
from .series import (
    DEFAULT_PRECISION_BITS,
    DEFAULT_TERM_BUDGET,
    DEFAULT_TOL,
    BudgetExceeded,
    LValueResult,
    an_array,
    l_value_at_1,
    numerical_root_number,
    terms_needed,
)

VANISHING_THRESHOLD = 1e-4
SHA_RESIDUAL_TOL = 1e-2
# residuals above this trigger recomputation at a tighter tolerance
ESCALATE_RESIDUAL = 1e-6


class ShaStatus(str, Enum):
    OK = "ok"
    ANOMALY = "anomaly"
    EXCLUDED_VANISHING = "excluded-vanishing"
    EXCLUDED_BUDGET = "excluded-budget"


class BaseCurve:
    """A minimal base curve with its conductor, local data and a growing a_p table."""

    def __init__(self, E: CurveModel, seed: int = DEFAULT_SEED, table_bound: int = 1000):
        self.E = minimal_model(E)[0]
        self.seed = seed
        self.conductor = conductor_of(self.E)
        self.local = local_data(self.E)
        self.table: ApTable = ap_table(self.E, table_bound, seed)
        self._root_number: int | None = None
        self._an: np.ndarray | None = None

    def coefficients(self, M: int) -> np.ndarray:
        """a_0..a_M' (M' >= M) of the base curve, cached and grown geometrically."""
        if self._an is None or len(self._an) <= M:
            size = M if self._an is None else max(M, (len(self._an) - 1) * 3 // 2)
            self.ensure_table(size)
            self._an = an_array(self.table, size)
        return self._an

    def ensure_table(self, bound: int) -> ApTable:
        if self.table.bound < bound:
            self.table = self.table.extend(max(bound, self.table.bound * 3 // 2), self.seed)
        return self.table

    @property
    def root_number(self) -> int:
        if self._root_number is None:
            self.ensure_table(terms_needed(self.conductor, 1e-10) * 2)
            self._root_number = numerical_root_number(self.table, self.conductor)
        return self._root_number

    @property
    def tamagawa_product(self) -> int:
        return math.prod(ld.tamagawa for ld in self.local.values())


@dataclass(frozen=True)
class AlgebraicLValue:
    value: Fraction
    raw: float
    l_value: float
    period: float
    sign: int

    @property
    def ord2(self) -> int | None:
        """2-adic valuation (None for the zero value)."""
        if self.value == 0:
            return None
        v = 0
        num, den = self.value.numerator, self.value.denominator
        while num % 2 == 0:
            num //= 2
            v += 1
        while den % 2 == 0:
            den //= 2
            v -= 1
        return v


def algebraic_l_value(
    base: BaseCurve,
    least_period: bool = False,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    torsion_order: int | None = None,
) -> AlgebraicLValue:
    """L(E,1)/Omega as an exact rational.

    Omega is the full real period (the least period times the number of real
    components) unless ``least_period`` is set.  Rank >= 1 gives exactly 0.
    """
    E = base.E
    omega = least_real_period(E, precision_bits) if least_period else real_period(E, precision_bits)
    sign = base.root_number
    if sign == -1:
        return AlgebraicLValue(Fraction(0), 0.0, 0.0, omega, -1)
    base.ensure_table(terms_needed(base.conductor, DEFAULT_TOL))
    L = l_value_at_1(base.table, base.conductor, 1, precision_bits=precision_bits)
    raw = L.value / omega
    if raw < VANISHING_THRESHOLD:
        return AlgebraicLValue(Fraction(0), raw, L.value, omega, 1)
    tors = torsion_order if torsion_order is not None else torsion_subgroup(E).order
    max_den = 2 * tors * tors * base.tamagawa_product * 2**6
    return AlgebraicLValue(snap_rational(raw, max_den), raw, L.value, omega, 1)


@dataclass(frozen=True)
class ShaAnalytic:
    d: int
    l_value: float
    omega: float
    tamagawa: int
    torsion: int
    raw: float
    snapped: int
    residual: float
    status: ShaStatus
    n_terms: int = 0
    error_bound: float = 0.0
    twist_conductor: int = 0
    notes: tuple[str, ...] = field(default=())

    @property
    def retained(self) -> bool:
        return self.status in (ShaStatus.OK, ShaStatus.ANOMALY)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def twist_data(base: BaseCurve, d: int) -> tuple[int, CurveModel, int]:
    """(fundamental discriminant D, minimal model of E_d, conductor of E_d)."""
    D = fundamental_discriminant(d)
    if math.gcd(D, base.conductor) != 1:
        raise ValueError(f"twist discriminant {D} is not coprime to N = {base.conductor}")
    Ed = quadratic_twist(base.E, squarefree_part(d))
    return D, Ed, base.conductor * D * D


def analytic_sha_rank0(
    base: BaseCurve,
    d: int,
    tol: float = DEFAULT_TOL,
    term_budget: int = DEFAULT_TERM_BUDGET,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> ShaAnalytic:
    """|Sha(E_d)| forced by the BSD formula at rank 0, snapped to an integer."""
    D, Ed, Nd = twist_data(base, d)
    sign = base.root_number * kronecker(D, -base.conductor)
    omega = real_period(Ed, precision_bits)
    cp = math.prod(ld.tamagawa for ld in local_data(Ed).values())
    notes: list[str] = []
    if sign == -1:
        return ShaAnalytic(d, 0.0, omega, cp, 0, 0.0, 0, 0.0, ShaStatus.EXCLUDED_VANISHING,
                           twist_conductor=Nd, notes=("root number -1",))
    ladder = [(tol, precision_bits), (tol * 1e-2, 2 * precision_bits), (tol * 1e-4, 4 * precision_bits)]
    tors = None
    L: LValueResult | None = None
    for rung, (t, bits) in enumerate(ladder):
        M = terms_needed(Nd, t)
        if M > term_budget:
            return ShaAnalytic(d, 0.0, omega, cp, 0, 0.0, 0, 0.0, ShaStatus.EXCLUDED_BUDGET,
                               n_terms=M, twist_conductor=Nd, notes=(f"needs {M} terms",))
        try:
            L = l_value_at_1(base.table, Nd, 1, t, term_budget, bits, character=D,
                             coefficients=base.coefficients(M))
        except BudgetExceeded as exc:
            return ShaAnalytic(d, 0.0, omega, cp, 0, 0.0, 0, 0.0, ShaStatus.EXCLUDED_BUDGET,
                               n_terms=exc.needed, twist_conductor=Nd, notes=(str(exc),))
        if L.value / omega < VANISHING_THRESHOLD:
            return ShaAnalytic(d, L.value, omega, cp, 0, 0.0, 0, 0.0, ShaStatus.EXCLUDED_VANISHING,
                               n_terms=L.n_terms, error_bound=L.error_bound, twist_conductor=Nd,
                               notes=("L(E_d,1) below vanishing threshold",))
        if tors is None:
            tors = torsion_subgroup(Ed).order
        raw = L.value * tors * tors / (omega * cp)
        snapped = round(raw)
        residual = abs(raw - snapped)
        if residual <= ESCALATE_RESIDUAL:
            break
        notes.append(f"rung {rung}: residual {residual:.3g}")
    status = ShaStatus.OK
    if residual >= SHA_RESIDUAL_TOL or not _is_square(snapped) or snapped == 0:
        status = ShaStatus.ANOMALY
    return ShaAnalytic(d, L.value, omega, cp, tors, raw, snapped, residual, status,
                       L.n_terms, L.error_bound, Nd, tuple(notes))


__all__ = [
    "AlgebraicLValue",
    "BaseCurve",
    "PrecisionError",
    "ShaAnalytic",
    "ShaStatus",
    "algebraic_l_value",
    "analytic_sha_rank0",
    "twist_data",
]
