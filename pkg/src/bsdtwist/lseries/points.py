"""Counting points mod p and tables of a_p."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from ..algebra.ntheory import DEFAULT_SEED, legendre_table, prime_sieve, sqrt_mod_p
from ..curve import CurveModel, minimal_model
from ..localdata import local_data

FAST_THRESHOLD = 229


class BadReductionError(ValueError):
    pass


def count_points_naive(E: CurveModel, p: int) -> int:
    """a_p = p + 1 - #E(F_p) by enumerating x and looking up quadratic characters."""
    if E.discriminant % p == 0:
        raise BadReductionError(f"bad reduction at {p}")
    if p == 2:
        a1, a2, a3, a4, a6 = E.ainvs
        n = 1 + sum(
            1
            for x in (0, 1)
            for y in (0, 1)
            if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0
        )
        return 3 - n
    chi = legendre_table(p)
    x = np.arange(p, dtype=np.int64)
    d = (4 * x + E.b2 % p) % p
    d = (d * x + 2 * E.b4 % p) % p
    d = (d * x + E.b6 % p) % p
    return -int(chi[d].sum(dtype=np.int64))


# -- Shanks-Mestre ----------------------------------------------------------


def _add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _mul(P, n, A, p):
    R = None
    while n:
        if n & 1:
            R = _add(R, P, A, p)
        P = _add(P, P, A, p)
        n >>= 1
    return R


def _random_point(A, B, p, rng):
    while True:
        x = rng.randrange(p)
        f = (x * x * x + A * x + B) % p
        if f == 0:
            return (x, 0)
        if pow(f, (p - 1) // 2, p) == 1:
            return (x, sqrt_mod_p(f, p))


def _annihilators(P, lo, hi, A, p) -> list[int]:
    """All m in [lo, hi] with mP = 0, by baby-step giant-step."""
    s = math.isqrt(hi - lo) + 1
    baby = {}
    Q = None
    for j in range(s):
        if j and Q is None:
            # P has order j < s: the answer is every multiple of j
            first = -(-lo // j) * j
            return list(range(first, hi + 1, j))
        baby.setdefault(Q, j)
        Q = _add(Q, P, A, p)
    step = _mul(P, s, A, p)
    R = _mul(P, lo, A, p)
    out = []
    m = lo
    while m <= hi:
        key = None if R is None else (R[0], (-R[1]) % p)
        j = baby.get(key)
        if j is not None and m + j <= hi:
            out.append(m + j)
        R = _add(R, step, A, p)
        m += s
    return out


def count_points_fast(E: CurveModel, p: int, seed: int = DEFAULT_SEED) -> int:
    """a_p by Shanks-Mestre on E and its quadratic twist (p > 229)."""
    if p <= FAST_THRESHOLD:
        raise ValueError(f"fast counting needs p > {FAST_THRESHOLD}")
    if E.discriminant % p == 0:
        raise BadReductionError(f"bad reduction at {p}")
    A = (-27 * E.c4) % p
    B = (-54 * E.c6) % p
    g = 2
    while pow(g, (p - 1) // 2, p) == 1:
        g += 1
    At, Bt = A * g * g % p, B * g**3 % p
    r = math.isqrt(4 * p)
    lo, hi = p + 1 - r - 1, p + 1 + r + 1
    rng = random.Random(seed * 1000003 + p)
    candidates: set[int] | None = None
    for attempt in range(64):
        on_twist = attempt % 2 == 1
        a, b = (At, Bt) if on_twist else (A, B)
        P = _random_point(a, b, p, rng)
        if candidates is not None and len(candidates) <= 8:
            keep = set()
            for m in candidates:
                n = 2 * p + 2 - m if on_twist else m
                if _mul(P, n, a, p) is None:
                    keep.add(m)
            candidates = keep
        else:
            found = _annihilators(P, lo, hi, a, p)
            found = {2 * p + 2 - n for n in found} if on_twist else set(found)
            candidates = found if candidates is None else candidates & found
        if len(candidates) == 1:
            m = candidates.pop()
            return p + 1 - m
        if not candidates:
            break
    raise ArithmeticError(f"group order search failed at p = {p}")


def ap(E: CurveModel, p: int, seed: int = DEFAULT_SEED) -> int:
    return count_points_fast(E, p, seed) if p > FAST_THRESHOLD else count_points_naive(E, p)


@dataclass(frozen=True)
class ApTable:
    """a_p for all primes up to ``bound`` of a minimal model.

    Bad primes carry +1 (split), -1 (nonsplit) or 0 (additive).
    """

    ainvs: tuple[int, ...]
    bound: int
    primes: np.ndarray
    values: np.ndarray
    bad: tuple[tuple[int, int], ...]

    @property
    def bad_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.bad)

    def __getitem__(self, p: int) -> int:
        i = int(np.searchsorted(self.primes, p))
        if i >= len(self.primes) or self.primes[i] != p:
            raise KeyError(p)
        return int(self.values[i])

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.primes.tolist(), self.values.tolist()))

    def extend(self, bound: int, seed: int = DEFAULT_SEED) -> "ApTable":
        if bound <= self.bound:
            return self
        E = CurveModel(*self.ainvs)
        new_primes = prime_sieve(bound)
        new_primes = new_primes[new_primes > self.bound]
        bad = dict(self.bad)
        vals = [bad[p] if p in bad else ap(E, p, seed) for p in new_primes.tolist()]
        return ApTable(
            self.ainvs,
            bound,
            np.concatenate([self.primes, new_primes]),
            np.concatenate([self.values, np.asarray(vals, dtype=np.int64)]),
            self.bad,
        )


def ap_table(E: CurveModel, bound: int, seed: int = DEFAULT_SEED) -> ApTable:
    Emin = minimal_model(E)[0]
    bad = {p: ld.ap_bad for p, ld in local_data(Emin).items()}
    primes = prime_sieve(bound)
    vals = np.empty(len(primes), dtype=np.int64)
    for i, p in enumerate(primes.tolist()):
        vals[i] = bad[p] if p in bad else ap(Emin, p, seed)
    return ApTable(Emin.ainvs, bound, primes, vals, tuple(sorted(bad.items())))
