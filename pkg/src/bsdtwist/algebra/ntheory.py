"""Integer arithmetic: primality, factorisation, Kronecker symbols, sieves."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterator

import numpy as np

DEFAULT_SEED = 20240917

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Miller-Rabin with the first 13 prime bases is deterministic below this bound.
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981
_TRIAL_BOUND = 1000


def _miller_rabin(n: int, bases) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test, deterministic for ``n < 3.3e24``.

    Larger inputs fall back to a strong BPSW test (no known counterexample).
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _MR_DETERMINISTIC_BOUND:
        return _miller_rabin(n, _SMALL_PRIMES)
    import gmpy2

    return bool(gmpy2.is_strong_bpsw_prp(n))


@dataclass(frozen=True)
class PrimeFactorization:
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def _brent_rho(n: int, rng: random.Random) -> int:
    """Return a non-trivial factor of the odd composite ``n``."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, seed: int = DEFAULT_SEED) -> PrimeFactorization:
    """Factor a nonzero integer (sign is dropped).

    Trial division below 1000, then Brent's variant of Pollard rho driven by a
    seeded generator; every reported prime passes :func:`is_prime`.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in range(2, _TRIAL_BOUND):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n > 1:
        rng = random.Random(seed)
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            r = math.isqrt(m)
            if r * r == m:
                stack.extend((r, r))
                continue
            f = _brent_rho(m, rng)
            stack.extend((f, m // f))
    return PrimeFactorization(tuple(sorted(out.items())))


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def squarefree_part(d: int) -> int:
    """Signed squarefree kernel: d = squarefree_part(d) * m**2."""
    sign = -1 if d < 0 else 1
    out = 1
    for p, e in factorize(d):
        if e % 2:
            out *= p
    return sign * out


def squarefree_and_fundamental(d: int) -> tuple[bool, int]:
    """Return (d is squarefree, discriminant of Q(sqrt(d)))."""
    if d == 0:
        raise ValueError("d must be nonzero")
    fac = factorize(d)
    sqf = fac.is_squarefree()
    core = squarefree_part(d)
    if core == 1:
        raise ValueError("Q(sqrt(d)) is not a quadratic field for square d")
    disc = core if core % 4 == 1 else 4 * core
    return sqf, disc


def fundamental_discriminant(d: int) -> int:
    return squarefree_and_fundamental(d)[1]


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return factorize(d).is_squarefree()
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and factorize(m).is_squarefree()
    return False


def prime_sieve(n: int) -> np.ndarray:
    """All primes <= n as an int64 array."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def least_prime_factor_sieve(n: int) -> np.ndarray:
    """lpf[k] = least prime factor of k for 2 <= k <= n (lpf[0] = lpf[1] = 0)."""
    lpf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if p * p > n:
            break
        if lpf[p] == 0:
            block = lpf[p * p :: p]
            block[block == 0] = p
    idx = np.nonzero(lpf == 0)[0]
    lpf[idx] = idx
    lpf[:2] = 0
    return lpf


def factor_with_sieve(n: int, lpf: np.ndarray) -> list[tuple[int, int]]:
    n = abs(n)
    out = []
    while n > 1:
        p = int(lpf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def primes_in_range(lo: int, hi: int) -> Iterator[int]:
    for p in prime_sieve(hi):
        if p >= lo:
            yield int(p)


def legendre_table(p: int) -> np.ndarray:
    """chi[r] = (r/p) for 0 <= r < p, p an odd prime."""
    chi = -np.ones(p, dtype=np.int8)
    sq = (np.arange(1, (p - 1) // 2 + 1, dtype=np.int64) ** 2) % p
    chi[sq] = 1
    chi[0] = 0
    return chi


def sqrt_mod_p(a: int, p: int) -> int | None:
    """A square root of a mod the prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r
