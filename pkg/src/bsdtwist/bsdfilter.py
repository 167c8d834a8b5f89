"""Eligibility of base curves and admissibility of their quadratic twists.

Reason codes name the step that failed together with its line in the
eligibility (``E``) or twist (``T``) procedure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .algebra.ntheory import DEFAULT_SEED, factorize, fundamental_discriminant, is_prime, kronecker, valuation
from .algebra.poly import cubic_inert, discriminant_cubic, roots_mod_p
from .curve import (
    CurveModel,
    make_curve,
    minimal_model,
    has_rational_p_isogeny,
    is_squarefree,
    torsion_subgroup,
    two_isogenous_curve,
    two_torsion_rank,
)
from .localdata import local_data
from .lseries.period import real_period
from .lseries.sha import BaseCurve, algebraic_l_value
from .records import CurveDBRecord

DEFAULT_S_WITNESS_BOUND = 10_000


class Branch(str, Enum):
    TWO_TORSION_CLZ = "TwoTorsionCLZ"
    NO_TWO_TORSION_NEG_DISC = "NoTwoTorsionNegDisc"
    NO_TWO_TORSION_POS_DISC = "NoTwoTorsionPosDisc"
    NONE = "none"


class Reason(str, Enum):
    CONDUCTOR = "E1-conductor-not-squarefree-composite"
    A3 = "E2-a3-out-of-range"
    ISOGENY = "E4-rational-p-isogeny"
    RAMIFICATION = "E5-discriminant-valuation"
    OPTIMALITY = "E6-not-optimal"
    MANIN = "E7-manin-constant-even"
    RANK = "E9-rank-nonzero"
    FULL_TWO_TORSION = "E10-full-two-torsion"
    LALG_CLZ = "E11-ord2-lalg"
    ISOGENOUS_CURVE = "E13-isogenous-curve"
    NO_WITNESS = "E15-witness-not-found-below-bound"
    LALG_NEG = "E18-ord2-lalg"
    LALG_POS = "E21-ord2-lalg"


STEP_NAMES = (
    "conductor", "a3", "isogeny", "ramification", "optimality", "manin", "rank",
    "lalg", "isogenous_curve", "witness",
)


class IncompleteDataError(ValueError):
    def __init__(self, field_name: str):
        super().__init__(f"database record lacks required field '{field_name}'")
        self.field_name = field_name


class RankMismatchError(RuntimeError):
    pass


@dataclass
class EligibilityVerdict:
    label: str
    accepted: bool
    branch: Branch
    reason: Optional[Reason]
    evidence: dict = field(default_factory=dict)
    tags: tuple[str, ...] = ()

    @property
    def s_witness(self) -> Optional[int]:
        return self.evidence.get("s_witness")


class TwistReason(str, Enum):
    NOT_SQUAREFREE = "T0-not-squarefree"
    GCD = "T2-gcd-with-conductor"
    AP_DIVISIBLE = "T3-p-divides-ap"
    PRIME_CONDITION = "T5-prime-divisor-condition"
    CONGRUENCE_KRONECKER = "T6-congruence-or-kronecker"
    MOD4 = "T8-d-not-1-mod-4"
    NOT_INERT = "T11-prime-not-inert"
    KRONECKER = "T12-kronecker"
    NEGATIVE = "T14-d-not-positive"


@dataclass(frozen=True)
class TwistVerdict:
    d: int
    accepted: bool
    reason: Optional[TwistReason] = None


# -- curve eligibility ---------------------------------------------------------------


def base_curve(E: CurveModel | BaseCurve, seed: int = DEFAULT_SEED) -> BaseCurve:
    """Shared per-curve state (minimal model, conductor, a_p table), cached by model."""
    if isinstance(E, BaseCurve):
        return E
    return _base_cached(minimal_model(E)[0].ainvs, seed)


@lru_cache(maxsize=64)
def _base_cached(ainvs: tuple[int, ...], seed: int) -> BaseCurve:
    return BaseCurve(make_curve(*ainvs), seed)


def s_witness(E: CurveModel | BaseCurve, bound: int = DEFAULT_S_WITNESS_BOUND) -> Optional[int]:
    """Smallest prime q <= bound, q = 1 mod 4, q not dividing N, with ord_2(1 + q - a_q) = 1."""
    base = base_curve(E)
    N = base.conductor
    if bound >= 5:
        base.ensure_table(bound)
    for q in range(5, bound + 1, 4):
        if N % q == 0 or not is_prime(q):
            continue
        nq = 1 + q - base.table[q]
        if valuation(nq, 2) == 1:
            return q
    return None


def _analytic_sha_isogenous(base: BaseCurve, Eprime, precision_bits: int) -> tuple[int, float]:
    """Analytic Sha of a curve isogenous to the rank-0 base curve (shares its L-value)."""
    alg = algebraic_l_value(base, precision_bits=precision_bits)
    omega = real_period(Eprime, precision_bits)
    cp = math.prod(ld.tamagawa for ld in local_data(Eprime).values())
    tors = torsion_subgroup(Eprime).order
    raw = alg.l_value * tors * tors / (omega * cp)
    return round(raw), abs(raw - round(raw))


def algorithm1(
    E: CurveModel | BaseCurve | None,
    record: CurveDBRecord,
    *,
    strict_a3: bool = False,
    s_witness_bound: int = DEFAULT_S_WITNESS_BOUND,
    precision_bits: int = 80,
    seed: Optional[int] = None,
    negate: Iterable[str] = (),
) -> EligibilityVerdict:
    """Decide whether E, described by ``record``, is eligible.

    ``E`` may be None to use the record's own model.  ``negate`` inverts the
    named checks (see STEP_NAMES); it exists for mutation testing only.
    """
    flip = set(negate)
    unknown = flip - set(STEP_NAMES)
    if unknown:
        raise ValueError(f"unknown steps {sorted(unknown)}")
    for name in ("optimal", "manin_constant"):
        if getattr(record, name) is None:
            raise IncompleteDataError(name)
    seed = DEFAULT_SEED if seed is None else seed
    base = base_curve(record.curve() if E is None else E, seed)
    if base.E.ainvs != minimal_model(record.curve())[0].ainvs:
        raise ValueError(f"{record.label}: curve does not match the database model")
    E = base.E
    N = base.conductor
    ev: dict = {"conductor": N}
    tags: list[str] = []

    def check(name: str, ok: bool) -> bool:
        return (not ok) if name in flip else ok

    def reject(reason: Reason) -> EligibilityVerdict:
        return EligibilityVerdict(record.label, False, Branch.NONE, reason, ev, tuple(tags))

    fac = factorize(N)
    if not check("conductor", fac.is_squarefree() and len(fac) > 1):
        return reject(Reason.CONDUCTOR)

    table = base.ensure_table(7)
    a3 = table[3]
    ev["a3"] = a3
    a3_ok = a3 in (-2, -1, 0, 1, 2) and (a3 != 0 or not strict_a3)
    if not check("a3", a3_ok):
        return reject(Reason.A3)

    A = [p for p in (3, 5, 7) if N % p == 0 or table[p] % p != 0]
    ev["A"] = A
    isog = [p for p in A if has_rational_p_isogeny(E, p, record.isogeny_degrees)]
    ev["isogenies_in_A"] = isog
    if not check("isogeny", not isog):
        return reject(Reason.ISOGENY)

    primes = fac.primes
    vd = {p: valuation(E.discriminant, p) for p in primes}
    ram_ok = all(any(vd[p] % ell != 0 for p in primes if p != ell) for ell in primes)
    ev["disc_valuations"] = vd
    if not check("ramification", ram_ok):
        return reject(Reason.RAMIFICATION)

    if not check("optimality", bool(record.optimal)):
        return reject(Reason.OPTIMALITY)
    if not check("manin", record.manin_constant % 2 == 1):
        return reject(Reason.MANIN)

    full = algebraic_l_value(base, precision_bits=precision_bits)
    analytic_rank0 = full.value != 0
    ev["root_number"] = full.sign
    if record.rank is not None and (record.rank == 0) != analytic_rank0:
        raise RankMismatchError(
            f"{record.label}: analytic rank-0 test {analytic_rank0} contradicts database rank {record.rank}"
        )
    if not check("rank", analytic_rank0):
        return reject(Reason.RANK)

    t2 = two_torsion_rank(E)
    ev["two_torsion_rank"] = t2
    if t2 == 2:
        return reject(Reason.FULL_TWO_TORSION)

    if t2 == 1:
        ev["lalg"] = str(full.value)
        if not check("lalg", full.ord2 == -1):
            return reject(Reason.LALG_CLZ)
        Ep = two_isogenous_curve(E)
        ev["isogenous_ainvs"] = list(Ep.ainvs)
        ep_t2 = two_torsion_rank(Ep)
        ev["isogenous_two_torsion_rank"] = ep_t2
        if record.two_isogenous_sha is not None:
            sha_p = record.two_isogenous_sha
            ev["isogenous_sha"] = sha_p
        else:
            sha_p, resid = _analytic_sha_isogenous(base, Ep, precision_bits)
            ev["isogenous_sha"] = sha_p
            ev["isogenous_sha_residual"] = resid
            tags.append("analytic-surrogate")
        if not check("isogenous_curve", ep_t2 == 1 and sha_p % 2 == 1):
            return reject(Reason.ISOGENOUS_CURVE)
        q = s_witness(base, s_witness_bound)
        ev["s_witness"] = q
        if not check("witness", q is not None):
            return reject(Reason.NO_WITNESS)
        return EligibilityVerdict(record.label, True, Branch.TWO_TORSION_CLZ, None, ev, tuple(tags))

    # trivial 2-torsion: the algebraic value is taken against the least real period
    least = algebraic_l_value(base, least_period=True, precision_bits=precision_bits)
    ev["lalg"] = str(least.value)
    if E.discriminant < 0:
        if not check("lalg", least.ord2 == 0):
            return reject(Reason.LALG_NEG)
        return EligibilityVerdict(record.label, True, Branch.NO_TWO_TORSION_NEG_DISC, None, ev, tuple(tags))
    if not check("lalg", least.ord2 == 1):
        return reject(Reason.LALG_POS)
    return EligibilityVerdict(record.label, True, Branch.NO_TWO_TORSION_POS_DISC, None, ev, tuple(tags))


# -- twist admissibility --------------------------------------------------------------


def _field_disc(d: int) -> int:
    return 1 if d == 1 else fundamental_discriminant(d)


class TwistContext:
    """Per-curve data needed to test twists: conductor, a_p, 2-division cubic."""

    def __init__(self, base: BaseCurve, branch: Branch):
        if branch is Branch.NONE:
            raise ValueError("curve is not eligible")
        self.base = base
        self.branch = branch
        self.N = base.conductor
        self.E = base.E
        self.cubic = self.E.two_division_cubic()
        t2 = two_torsion_rank(self.E)
        expected = 1 if branch is Branch.TWO_TORSION_CLZ else 0
        if t2 != expected:
            raise ValueError(f"branch {branch.value} does not match E(Q)[2] of rank {t2}")
        self._cubic_disc = int(discriminant_cubic(self.cubic.coeffs))

    def ap(self, p: int) -> int:
        return self.base.ensure_table(p)[p]

    def prime_ok(self, p: int) -> Optional[TwistReason]:
        """Conditions on a single prime divisor p of d (None when p is fine)."""
        a = self.ap(p)
        if a % p == 0:
            return TwistReason.AP_DIVISIBLE
        if self.branch is Branch.TWO_TORSION_CLZ:
            if p % 4 != 1 or valuation(p + 1 - a, 2) != 1:
                return TwistReason.PRIME_CONDITION
        elif not self._inert(p):
            return TwistReason.NOT_INERT
        return None

    def _inert(self, p: int) -> bool:
        if p == 2:
            return cubic_inert(self.cubic, 2)
        if self._cubic_disc % p == 0:
            return False
        return not roots_mod_p(self.cubic.integer_coeffs(), p)


def twist_context(E: CurveModel | BaseCurve | TwistContext, branch: Branch) -> TwistContext:
    if isinstance(E, TwistContext):
        if E.branch is not branch:
            raise ValueError(f"context is for branch {E.branch.value}, not {branch.value}")
        return E
    base = base_curve(E)
    return _context_cached(base, Branch(branch))


@lru_cache(maxsize=64)
def _context_cached(base: BaseCurve, branch: Branch) -> TwistContext:
    return TwistContext(base, branch)


def algorithm2(E: CurveModel | BaseCurve | TwistContext, branch: Branch, d: int) -> TwistVerdict:
    ctx = twist_context(E, branch)
    if d == 0 or not is_squarefree(d):
        raise ValueError(f"d = {d} is not a nonzero squarefree integer")
    N = ctx.N
    if math.gcd(d, N) != 1:
        return TwistVerdict(d, False, TwistReason.GCD)
    divisors = factorize(d).primes
    for p in divisors:
        if ctx.ap(p) % p == 0:
            return TwistVerdict(d, False, TwistReason.AP_DIVISIBLE)
    D = _field_disc(d)
    if ctx.branch is Branch.TWO_TORSION_CLZ:
        for p in divisors:
            if ctx.prime_ok(p) is not None:
                return TwistVerdict(d, False, TwistReason.PRIME_CONDITION)
        if d % 8 != 1 or any(kronecker(D, p) != 1 for p in factorize(N).primes if p != 2):
            return TwistVerdict(d, False, TwistReason.CONGRUENCE_KRONECKER)
        return TwistVerdict(d, True)
    if d % 4 != 1:
        return TwistVerdict(d, False, TwistReason.MOD4)
    for p in divisors:
        if not ctx._inert(p):
            return TwistVerdict(d, False, TwistReason.NOT_INERT)
    if any(kronecker(D, p) != 1 for p in factorize(N).primes):
        return TwistVerdict(d, False, TwistReason.KRONECKER)
    if ctx.branch is Branch.NO_TWO_TORSION_POS_DISC and d <= 0:
        return TwistVerdict(d, False, TwistReason.NEGATIVE)
    return TwistVerdict(d, True)


def _squarefree_mask(n: int) -> np.ndarray:
    """mask[k] true iff k is squarefree, 0 <= k <= n (mask[0] false)."""
    mask = np.ones(n + 1, dtype=bool)
    mask[0] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime(p):
            mask[p * p :: p * p] = False
    return mask


def enumerate_twists(
    E: CurveModel | BaseCurve | TwistContext, branch: Branch, d_lo: int, d_hi: int
) -> list[TwistVerdict]:
    """All accepted squarefree d in [d_lo, d_hi], ascending; d = 1 is left out.

    Prime divisors failing a per-prime condition are sieved out first, and the
    survivors are confirmed with :func:`algorithm2`.
    """
    if d_lo > d_hi:
        raise ValueError("empty range")
    ctx = twist_context(E, branch)
    if ctx.branch is Branch.TWO_TORSION_CLZ:
        d_lo = max(d_lo, 1)
    if ctx.branch is Branch.NO_TWO_TORSION_POS_DISC:
        d_lo = max(d_lo, 1)
    if d_lo > d_hi:
        return []
    M = max(abs(d_lo), abs(d_hi))
    good = _squarefree_mask(M)
    ctx.base.ensure_table(M)
    primes = ctx.base.table.primes
    for p in primes[primes <= M].tolist():
        if ctx.N % p == 0 or ctx.prime_ok(p) is not None:
            good[p::p] = False
    out = []
    for d in range(d_lo, d_hi + 1):
        if d in (0, 1) or not good[abs(d)]:
            continue
        v = algorithm2(ctx, branch, d)
        if v.accepted:
            out.append(v)
    return out


def generic_family(E: CurveModel | BaseCurve, X: int) -> list[int]:
    """Fundamental discriminants d, 1 < |d| <= X, coprime to N, whose twist has root number +1.

    Ordered by |d|, negative before positive at equal size.
    """
    base = base_curve(E)
    N = base.conductor
    w = base.root_number
    if w != 1:
        raise ValueError("base curve has root number -1")
    sf = _squarefree_mask(X)
    out = []
    for n in range(2, X + 1):
        for d in (-n, n):
            if d % 4 == 1:
                ok = sf[n]
            elif d % 4 == 0:
                m = d // 4
                ok = m % 4 in (2, 3) and sf[abs(m)]
            else:
                ok = False
            if ok and math.gcd(d, N) == 1 and w * kronecker(d, -N) == 1:
                out.append(d)
    return out
