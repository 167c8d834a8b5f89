"""Univariate polynomials over F_p and over Q.

Coefficient lists are stored constant term first.  Internally plain Python
lists are used; :class:`ModPPoly` and :class:`RationalPoly` are the immutable
values exchanged with the rest of the package.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ntheory import DEFAULT_SEED, is_prime

MAX_RATIONAL_DEGREE = 64


class CapabilityError(ValueError):
    """Input outside the design bounds of an algorithm."""


@dataclass(frozen=True)
class ModPPoly:
    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(a) % self.p for a in self.coeffs]
        object.__setattr__(self, "coeffs", tuple(_trim(c)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        return _eval(list(self.coeffs), x) % self.p


@dataclass(frozen=True)
class RationalPoly:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        c = [Fraction(a) for a in self.coeffs]
        object.__setattr__(self, "coeffs", tuple(_trim(c)))

    @classmethod
    def from_ints(cls, coeffs: Sequence[int]) -> "RationalPoly":
        return cls(tuple(Fraction(c) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        return _eval(list(self.coeffs), x)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        return RationalPoly(tuple(_mul(list(self.coeffs), list(other.coeffs))))

    def __pow__(self, e: int) -> "RationalPoly":
        out = RationalPoly((Fraction(1),))
        for _ in range(e):
            out = out * self
        return out

    def integer_coeffs(self) -> list[int]:
        """Coefficients after clearing denominators (not made primitive)."""
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return [int(c * den) for c in self.coeffs]

    def __repr__(self):
        return f"RationalPoly({[str(c) for c in self.coeffs]})"


# -- generic list helpers (work for int and Fraction coefficients) ----------


def _trim(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def _eval(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def _add(f, g):
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def _sub(f, g):
    n = max(len(f), len(g))
    return _trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)])


def _mul(f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return _trim(out)


def _scale(f, c):
    return _trim([a * c for a in f])


def _deriv(f):
    return _trim([i * f[i] for i in range(1, len(f))])


def _divmod_q(f, g):
    """Exact division with remainder over Q (or Z when g is monic)."""
    if not g:
        raise ZeroDivisionError
    f = list(f)
    dg = len(g) - 1
    lc = g[-1]
    if len(f) - 1 < dg:
        return [], _trim(f)
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c = f[k + dg]
        if c == 0:
            continue
        c = Fraction(c, 1) / lc if not isinstance(lc, int) or lc not in (1, -1) else c * lc
        q[k] = c
        for j in range(dg + 1):
            f[k + j] -= c * g[j]
    return _trim(q), _trim(f)


def _gcd_q(f, g):
    f = [Fraction(a) for a in f]
    g = [Fraction(a) for a in g]
    while g:
        _, r = _divmod_q(f, g)
        f, g = g, r
    if not f:
        return f
    lc = f[-1]
    return [a / lc for a in f]


def content(f: Sequence[int]) -> int:
    c = 0
    for a in f:
        c = math.gcd(c, int(a))
    return c


def primitive_part(f: Sequence[int]) -> list[int]:
    c = content(f)
    if c == 0:
        return []
    if f[-1] < 0:
        c = -c
    return [int(a) // c for a in f]


def _to_primitive_int(f) -> list[int]:
    den = 1
    for c in f:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    return primitive_part([int(Fraction(c) * den) for c in f])


def _exact_div_int(f: list[int], g: list[int]) -> list[int] | None:
    """f / g over Z if g divides f exactly, else None."""
    f = list(f)
    dg = len(g) - 1
    lc = g[-1]
    if len(f) - 1 < dg:
        return None
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c, r = divmod(f[k + dg], lc)
        if r:
            return None
        q[k] = c
        if c:
            for j in range(dg + 1):
                f[k + j] -= c * g[j]
    if any(f):
        return None
    return q


# -- arithmetic over F_p ----------------------------------------------------


def _pmod(f, p):
    return _trim([a % p for a in f])


def _mulp(f, g, p):
    return _pmod(_mul(f, g), p)


def _divmodp(f, g, p):
    f = [a % p for a in f]
    _trim(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    if len(f) - 1 < dg:
        return [], f
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c = f[k + dg] * inv % p
        if c == 0:
            continue
        q[k] = c
        for j in range(dg + 1):
            f[k + j] = (f[k + j] - c * g[j]) % p
    return _trim(q), _trim(f)


def _monicp(f, p):
    if not f:
        return f
    inv = pow(f[-1], -1, p)
    return [a * inv % p for a in f]


def _gcdp(f, g, p):
    f, g = _pmod(f, p), _pmod(g, p)
    while g:
        _, r = _divmodp(f, g, p)
        f, g = g, r
    return _monicp(f, p)


def _xgcdp(f, g, p):
    """Return (d, s, t) with s*f + t*g = d monic, over F_p."""
    r0, r1 = _pmod(f, p), _pmod(g, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmodp(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _pmod(_sub(s0, _mul(q, s1)), p)
        t0, t1 = t1, _pmod(_sub(t0, _mul(q, t1)), p)
    inv = pow(r0[-1], -1, p)
    return [a * inv % p for a in r0], [a * inv % p for a in s0], [a * inv % p for a in t0]


def _powmodp(base, e, mod, p):
    result = [1]
    base = _divmodp(base, mod, p)[1]
    while e:
        if e & 1:
            result = _divmodp(_mul(result, base), mod, p)[1]
        e >>= 1
        if e:
            base = _divmodp(_mul(base, base), mod, p)[1]
    return result


def _sqf_decomposition_p(f, p):
    """Squarefree decomposition of monic f over F_p: list of (g, multiplicity)."""
    out = []
    c = _gcdp(f, _pmod(_deriv(f), p), p)
    w = _divmodp(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = _gcdp(w, c, p)
        fac = _divmodp(w, y, p)[0]
        if len(fac) > 1:
            out.append((_monicp(fac, p), i))
        w = y
        c = _divmodp(c, y, p)[0]
        i += 1
    if len(c) > 1:
        # c is a p-th power: c(x) = h(x^p), and h^p = c over F_p
        h = [c[k] for k in range(0, len(c), p)]
        for g, e in _sqf_decomposition_p(_monicp(h, p), p):
            out.append((g, e * p))
    return out


def _ddf(f, p):
    out = []
    h = [0, 1]
    fstar = list(f)
    i = 1
    while len(fstar) - 1 >= 2 * i:
        h = _powmodp(h, p, fstar, p)
        g = _gcdp(fstar, _sub(h, [0, 1]), p)
        if len(g) > 1:
            out.append((g, i))
            fstar = _divmodp(fstar, g, p)[0]
            h = _divmodp(h, fstar, p)[1]
        i += 1
    if len(fstar) > 1:
        out.append((_monicp(fstar, p), len(fstar) - 1))
    return out


def _edf(f, d, p, rng):
    """Split f (product of distinct irreducibles of degree d) completely."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            t = list(a)
            b = list(a)
            for _ in range(d - 1):
                b = _divmodp(_mul(b, b), f, p)[1]
                t = _pmod(_add(t, b), p)
            g = _gcdp(f, t, p)
        else:
            b = _powmodp(a, (p**d - 1) // 2, f, p)
            g = _gcdp(f, _pmod(_sub(b, [1]), p), p)
        if 1 < len(g) < len(f):
            return _edf(g, d, p, rng) + _edf(_divmodp(f, g, p)[0], d, p, rng)


def _factor_sqf_p(f, p, rng):
    out = []
    for g, d in _ddf(f, p):
        out.extend(_edf(g, d, p, rng))
    return out


def poly_factor_mod_p(f: ModPPoly, seed: int = DEFAULT_SEED) -> list[tuple[ModPPoly, int]]:
    """Factor f over F_p into monic irreducibles with multiplicities.

    The leading coefficient (a unit) is not part of the output.  Factors are
    sorted by degree, then coefficients, so output is independent of the seed.
    """
    p = f.p
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(seed)
    monic = _monicp(list(f.coeffs), p)
    out = []
    if len(monic) == 1:
        return out
    for g, e in _sqf_decomposition_p(monic, p):
        for h in _factor_sqf_p(g, p, rng):
            out.append((ModPPoly(p, tuple(h)), e))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs[::-1], t[1]))
    return out


def roots_mod_p(coeffs: Sequence[int], p: int, seed: int = DEFAULT_SEED) -> list[int]:
    """Distinct roots in F_p of the polynomial with the given coefficients."""
    f = _pmod(list(coeffs), p)
    if not f:
        raise ValueError("zero polynomial")
    if len(f) == 1:
        return []
    if p < 64:
        return [x for x in range(p) if _eval(f, x) % p == 0]
    f = _monicp(f, p)
    g = _gcdp(f, _sub(_powmodp([0, 1], p, f, p), [0, 1]), p)
    if len(g) <= 1:
        return []
    lin = _edf(g, 1, p, random.Random(seed))
    return sorted((-h[0]) % p for h in lin)


# -- factorisation over Q ---------------------------------------------------


def _yun_q(f):
    """Squarefree decomposition over Q of a primitive integer polynomial."""
    out = []
    fq = [Fraction(a) for a in f]
    a0 = _gcd_q(fq, _deriv(fq))
    b = _divmod_q(fq, a0)[0]
    c = _divmod_q(_deriv(fq), a0)[0]
    d = _sub(c, _deriv(b))
    i = 1
    while len(b) > 1:
        a = _gcd_q(b, d)
        if len(a) > 1:
            out.append((_to_primitive_int(a), i))
        b = _divmod_q(b, a)[0]
        c = _divmod_q(d, a)[0]
        d = _sub(c, _deriv(b))
        i += 1
    return out


def _hensel_step(f, g, h, s, t, m):
    """One quadratic lifting step (von zur Gathen-Gerhard 15.10); h monic."""
    m2 = m * m
    e = _pmod(_sub(f, _mul(g, h)), m2)
    q, r = _divmod_monic_mod(_mul(s, e), h, m2)
    g2 = _pmod(_add(g, _add(_mul(t, e), _mul(q, g))), m2)
    h2 = _pmod(_add(h, r), m2)
    b = _pmod(_sub(_add(_mul(s, g2), _mul(t, h2)), [1]), m2)
    c, d = _divmod_monic_mod(_mul(s, b), h2, m2)
    s2 = _pmod(_sub(s, d), m2)
    t2 = _pmod(_sub(_sub(t, _mul(t, b)), _mul(c, g2)), m2)
    return g2, h2, s2, t2


def _divmod_monic_mod(f, g, m):
    f = [a % m for a in f]
    _trim(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], f
    q = [0] * (len(f) - dg)
    for k in range(len(f) - 1 - dg, -1, -1):
        c = f[k + dg] % m
        if c == 0:
            continue
        q[k] = c
        for j in range(dg + 1):
            f[k + j] = (f[k + j] - c * g[j]) % m
    return _trim(q), _trim(f)


def _hensel_lift(f, factors, p, k):
    """Lift f = lc * prod(factors) mod p to mod p**k; returns monic lifts."""
    target = p**k
    lifted = []
    cur = list(f)
    for i, u in enumerate(factors[:-1]):
        rest = [cur[-1] % p]
        for w in factors[i + 1 :]:
            rest = _mulp(rest, w, p)
        _, s, t = _xgcdp(rest, u, p)
        g, h = rest, list(u)
        m = p
        while m < target:
            g, h, s, t = _hensel_step(cur, g, h, s, t, m)
            m = m * m
        lifted.append(_pmod(h, target))
        cur = _pmod(g, target)
    lc_inv = pow(cur[-1], -1, target)
    lifted.append([a * lc_inv % target for a in cur])
    return lifted


def _symmetric(f, m):
    half = m // 2
    return [a - m if a > half else a for a in f]


def _choose_prime(f, tries=6):
    lc = f[-1]
    disc_ok = []
    p = 2
    while len(disc_ok) < tries:
        p += 1
        if not is_prime(p) or lc % p == 0:
            continue
        fp = _monicp(_pmod(f, p), p)
        if len(_gcdp(fp, _pmod(_deriv(fp), p), p)) > 1:
            continue
        disc_ok.append(p)
    return disc_ok


def _factor_squarefree_int(f, rng):
    n = len(f) - 1
    if n <= 1:
        return [f]
    best = None
    for p in _choose_prime(f):
        facs = _factor_sqf_p(_monicp(_pmod(f, p), p), p, rng)
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1:
            return [f]
    p, modfacs = best
    norm2 = math.isqrt(sum(a * a for a in f)) + 1
    bound = 2 * (2**n) * norm2 * abs(f[-1])
    k = 1
    while p**k <= bound:
        k += 1
    m = p**k
    lifted = _hensel_lift(f, modfacs, p, k)
    found = []
    g = list(f)
    remaining = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(remaining):
        hit = False
        for combo in itertools.combinations(remaining, size):
            lc = g[-1]
            cand = [lc % m]
            for idx in combo:
                cand = _pmod(_mul(cand, lifted[idx]), m)
            cand = _symmetric(cand, m)
            if cand[0] != 0 and g[0] % cand[0] != 0 and (lc * g[0]) % cand[0] != 0:
                continue
            cand = primitive_part(cand)
            q = _exact_div_int(g, cand)
            if q is None:
                continue
            found.append(cand)
            g = primitive_part(q)
            remaining = [i for i in remaining if i not in combo]
            hit = True
            break
        if not hit:
            size += 1
    found.append(g)
    return found


def poly_factor_over_Q(f: RationalPoly, seed: int = DEFAULT_SEED) -> list[tuple[RationalPoly, int]]:
    """Irreducible factorisation over Q (Zassenhaus with Hensel lifting).

    Factors are primitive integer polynomials with positive leading
    coefficient; a degree-0 factor carrying the remaining constant is included
    when it differs from 1, so the product reproduces ``f`` exactly.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree > MAX_RATIONAL_DEGREE:
        raise CapabilityError(f"degree {f.degree} exceeds design bound {MAX_RATIONAL_DEGREE}")
    rng = random.Random(seed)
    prim = _to_primitive_int(f.coeffs)
    out: list[tuple[list[int], int]] = []
    if len(prim) > 1:
        for g, e in _yun_q(prim):
            for h in _factor_squarefree_int(g, rng):
                out.append((primitive_part(h), e))
    out.sort(key=lambda t: (len(t[0]), [abs(c) for c in t[0][::-1]], t[0][::-1], t[1]))
    product = [Fraction(1)]
    for g, e in out:
        for _ in range(e):
            product = _mul(product, g)
    unit = f.coeffs[-1] / product[-1]
    res = [(RationalPoly(tuple(Fraction(c) for c in g)), e) for g, e in out]
    if unit != 1:
        res.insert(0, (RationalPoly((unit,)), 1))
    return res


def rational_roots(f: RationalPoly) -> list[Fraction]:
    """All distinct rational roots, found by p-adic lifting of roots mod p."""
    if f.is_zero():
        raise ValueError("zero polynomial has every root")
    g = _to_primitive_int(f.coeffs)
    roots = []
    if len(g) <= 1:
        return roots
    if g[0] == 0:
        roots.append(Fraction(0))
        while g and g[0] == 0:
            g = g[1:]
    if len(g) <= 1:
        return roots
    sq = _to_primitive_int(_divmod_q([Fraction(a) for a in g], _gcd_q(g, _deriv(g)))[0])
    lc, c0 = sq[-1], sq[0]
    p = _choose_prime(sq, tries=1)[0]
    bound = 2 * abs(lc) * abs(c0)
    dsq = _deriv(sq)
    for r in roots_mod_p(sq, p):
        m = p
        while m <= bound:
            m = m * m
            r = (r - _eval(sq, r) * pow(_eval(dsq, r), -1, m)) % m
        num = lc * r % m
        if num > m // 2:
            num -= m
        cand = Fraction(num, lc)
        if _eval(sq, cand) == 0:
            roots.append(cand)
    return sorted(set(roots))


def discriminant_cubic(coeffs: Sequence) -> Fraction:
    d, c, b, a = (Fraction(x) for x in coeffs)
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def _monic_integral_cubic(f: RationalPoly) -> list[int]:
    """y**3 + b y**2 + c*a y + d*a**2 for the primitive integer form a x^3+b x^2+c x+d."""
    d, c, b, a = _to_primitive_int(f.coeffs)
    return [d * a * a, c * a, b, 1]


def cubic_inert(f: RationalPoly, p: int) -> bool:
    """Is the prime p inert in Q[x]/(f) for an irreducible cubic f?

    Decided on the monic integral model of f: p must not divide its
    discriminant and the cubic must have no root mod p.
    """
    if f.degree != 3:
        raise ValueError("cubic_inert needs a cubic")
    if rational_roots(f):
        raise ValueError("cubic is reducible over Q")
    g = _monic_integral_cubic(f)
    if discriminant_cubic(g) % p == 0:
        return False
    return not roots_mod_p(g, p)
