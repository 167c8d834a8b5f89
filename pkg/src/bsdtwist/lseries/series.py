"""Dirichlet coefficients and central values L(E, 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import mpmath
import numpy as np

from ..algebra.ntheory import DEFAULT_SEED, factorize, legendre_table
from ..curve import CurveModel
from .points import ApTable, ap_table

DEFAULT_TOL = 1e-13
DEFAULT_TERM_BUDGET = 1 << 22
DEFAULT_PRECISION_BITS = 80
# above this many terms the sum is taken in float64 with exact (fsum) accumulation
MP_TERM_LIMIT = 20000


class BudgetExceeded(RuntimeError):
    """The series needs more terms than the configured budget allows."""

    def __init__(self, needed: int, budget: int, conductor: int):
        super().__init__(f"{needed} terms needed, budget {budget} (conductor {conductor})")
        self.needed = needed
        self.budget = budget
        self.conductor = conductor


@dataclass(frozen=True)
class LValueResult:
    value: float
    n_terms: int
    tail_bound: float
    sign: int
    rounding_bound: float = 0.0

    @property
    def error_bound(self) -> float:
        return self.tail_bound + self.rounding_bound


def an_array(table: ApTable, X: int) -> np.ndarray:
    """a_n for 0 <= n <= X (a_0 = 0) as int64, assembled multiplicatively."""
    if table.bound < X:
        raise ValueError(f"a_p table bound {table.bound} < {X}")
    an = np.ones(X + 1, dtype=np.int64)
    an[0] = 0
    bad = set(table.bad_primes)
    root = math.isqrt(X)
    primes = table.primes
    vals = table.values
    small = primes <= root
    for p, a in zip(primes[small].tolist(), vals[small].tolist()):
        # a_{p^k} by the Hecke recursion (bad p: a_p^k)
        powers = [1, a]
        pk = p
        while pk * p <= X:
            pk *= p
            nxt = a * powers[-1] if p in bad else a * powers[-1] - p * powers[-2]
            powers.append(nxt)
        idx = np.arange(p, X + 1, p)
        k = np.ones(len(idx), dtype=np.int64)
        q = idx // p
        while True:
            div = q % p == 0
            if not div.any():
                break
            k[div] += 1
            q[div] //= p
        an[idx] *= np.asarray(powers, dtype=np.int64)[k]
    big = ~small & (primes <= X)
    bp, bv = primes[big], vals[big]
    for j in range(1, X // (root + 1) + 1):
        sel = bp * j <= X
        if not sel.any():
            break
        an[bp[sel] * j] *= bv[sel]
    return an


def an_stream(table: ApTable, X: int) -> Iterator[int]:
    yield from an_array(table, X)[1:].tolist()


def kronecker_character(D: int, M: int) -> np.ndarray:
    """chi_D(n) = (D/n) for 0 <= n <= M, D a fundamental discriminant."""
    n = np.arange(M + 1, dtype=np.int64)
    chi = np.ones(M + 1, dtype=np.int64)
    odd = abs(D)
    while odd % 2 == 0:
        odd //= 2
    for q, _ in factorize(odd):
        chi *= legendre_table(q)[n % q]
    # the 2-part: remaining factor D / odd* where odd* = prod of q* = +-q, q* = 1 mod 4
    star = 1
    for q, _ in factorize(odd):
        star *= q if q % 4 == 1 else -q
    two = D // star
    r8 = n % 8
    if two == 1:
        pass
    elif two == -4:
        chi *= np.where(r8 % 2 == 0, 0, np.where(r8 % 4 == 1, 1, -1))
    elif two == 8:
        chi *= np.where(r8 % 2 == 0, 0, np.where((r8 == 1) | (r8 == 7), 1, -1))
    elif two == -8:
        chi *= np.where(r8 % 2 == 0, 0, np.where((r8 == 1) | (r8 == 3), 1, -1))
    else:
        raise ValueError(f"{D} is not a fundamental discriminant")
    return chi


def terms_needed(conductor: int, tol: float) -> int:
    """Smallest M with 4 q^(M+1) / (1 - q) < tol, q = exp(-2 pi / sqrt(N))."""
    rate = 2 * math.pi / math.sqrt(conductor)
    one_minus_q = -math.expm1(-rate)
    return max(1, math.ceil(math.log(4 / (tol * one_minus_q)) / rate) - 1)


def tail_bound(conductor: int, M: int) -> float:
    rate = 2 * math.pi / math.sqrt(conductor)
    return 4 * math.exp(-rate * (M + 1)) / -math.expm1(-rate)


def _sum_series(coeffs: np.ndarray, conductor: int, prec_bits: int, scale: float = 1.0) -> tuple[float, float]:
    """2 * sum a_n/n exp(-2 pi n scale / sqrt N) over the given a_1..a_M."""
    M = len(coeffs)
    if prec_bits > 53 and M <= MP_TERM_LIMIT:
        with mpmath.workprec(prec_bits):
            q = mpmath.exp(-2 * mpmath.pi * scale / mpmath.sqrt(conductor))
            total = mpmath.mpf(0)
            qn = mpmath.mpf(1)
            for n, a in enumerate(coeffs.tolist(), start=1):
                qn *= q
                if a:
                    total += a * qn / n
            return float(2 * total), 0.0
    n = np.arange(1, M + 1, dtype=np.float64)
    nz = coeffs != 0
    terms = coeffs[nz] / n[nz] * np.exp(-2 * math.pi * scale * n[nz] / math.sqrt(conductor))
    value = 2 * math.fsum(terms.tolist())
    # each term carries a few ulps of error from exp and the division
    rounding = 2 * 8 * np.finfo(float).eps * float(np.abs(terms).sum())
    return value, rounding


def l_value_at_1(
    table: ApTable,
    conductor: int,
    sign: int = 1,
    tol: float = DEFAULT_TOL,
    term_budget: int = DEFAULT_TERM_BUDGET,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    character: int | None = None,
    coefficients: np.ndarray | None = None,
) -> LValueResult:
    """L(E, 1) for root number +1, optionally twisted by the Kronecker character of D.

    ``conductor`` is the conductor of the (twisted) curve.  Root number -1
    returns an exact zero.  The table is extended on demand unless a long
    enough precomputed ``coefficients`` array (a_0, a_1, ...) is supplied.
    """
    if sign == -1:
        return LValueResult(0.0, 0, 0.0, -1)
    M = terms_needed(conductor, tol)
    if M > term_budget:
        raise BudgetExceeded(M, term_budget, conductor)
    if coefficients is not None and len(coefficients) > M:
        coeffs = coefficients[1 : M + 1]
    else:
        if table.bound < M:
            table = table.extend(M)
        coeffs = an_array(table, M)[1:]
    if character is not None:
        coeffs = coeffs * kronecker_character(character, M)[1:]
    value, rounding = _sum_series(coeffs, conductor, precision_bits)
    return LValueResult(value, M, tail_bound(conductor, M), 1, rounding)


def numerical_root_number(table: ApTable, conductor: int, t: float = 1.2, tol: float = 1e-10) -> int:
    """Decide w = +-1 from the t-independence of the approximate functional equation.

    For every t > 0, L(E, 1) = sum a_n/n (exp(-2 pi n t/sqrt N) + w exp(-2 pi n/(t sqrt N))).
    """
    M = int(terms_needed(conductor, tol) * t) + 1
    if table.bound < M:
        table = table.extend(M)
    coeffs = an_array(table, M)[1:]

    def S(scale):
        return _sum_series(coeffs, conductor, 53, scale)[0] / 2

    # at t = 1 both halves coincide: the sum is (1 + w) S(1)
    s1, s2, s2i = S(1.0), S(t), S(1 / t)
    best = None
    for w in (1, -1):
        gap = abs((1 + w) * s1 - (s2 + w * s2i))
        if best is None or gap < best[0]:
            best = (gap, w)
    gap_other = abs((1 - best[1]) * s1 - (s2 - best[1] * s2i))
    if gap_other < 1e3 * max(best[0], tol):
        raise ArithmeticError("root number not determined numerically")
    return best[1]


def base_l_value(E: CurveModel, conductor: int, sign: int, seed: int = DEFAULT_SEED, **kw) -> LValueResult:
    M = terms_needed(conductor, kw.get("tol", DEFAULT_TOL))
    return l_value_at_1(ap_table(E, max(M, 100), seed), conductor, sign, **kw)
