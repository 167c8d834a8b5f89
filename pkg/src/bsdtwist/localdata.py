"""Local invariants at a prime via Tate's algorithm."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .algebra.ntheory import factorize, kronecker, valuation
from .algebra.poly import roots_mod_p
from .curve import CurveModel, change_coordinates, minimal_model


class NonMinimalModelError(ValueError):
    pass


class ReductionKind(str, Enum):
    GOOD = "good"
    SPLIT = "split"
    NONSPLIT = "nonsplit"
    ADDITIVE = "additive"


class ReductionClass(str, Enum):
    ORDINARY = "ordinary"
    SUPERSINGULAR = "supersingular"
    SPLIT_MULT = "split-mult"
    NONSPLIT_MULT = "nonsplit-mult"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class LocalData:
    p: int
    kodaira: str
    conductor_exponent: int
    tamagawa: int
    reduction_kind: ReductionKind
    disc_valuation: int

    @property
    def is_good(self) -> bool:
        return self.reduction_kind is ReductionKind.GOOD

    @property
    def ap_bad(self) -> int:
        """a_p at a bad prime: +1 split, -1 nonsplit, 0 additive."""
        return {ReductionKind.SPLIT: 1, ReductionKind.NONSPLIT: -1, ReductionKind.ADDITIVE: 0}[
            self.reduction_kind
        ]


def _v(n: int, p: int) -> int:
    return 10**9 if n == 0 else valuation(n, p)


def _quad_has_root(a: int, b: int, c: int, p: int) -> bool:
    """Does a T^2 + b T + c have a root mod p?"""
    a, b, c = a % p, b % p, c % p
    if a == 0:
        return b != 0 or c == 0
    if p == 2:
        return c == 0 or (a + b + c) % 2 == 0
    disc = (b * b - 4 * a * c) % p
    return disc == 0 or kronecker(disc, p) == 1


def _cubic_root_count(b: int, c: int, d: int, p: int) -> int:
    return len(roots_mod_p([d, c, b, 1], p))


def _rst(E: CurveModel, r: int = 0, s: int = 0, t: int = 0) -> CurveModel:
    return change_coordinates(E, 1, r, s, t)


def tate_local_data(E: CurveModel, p: int) -> LocalData:
    """Kodaira symbol, conductor exponent and Tamagawa number of E at p.

    E must be minimal at p; a non-minimal model raises NonMinimalModelError.
    """
    vD = _v(E.discriminant, p)
    if vD == 0:
        return LocalData(p, "I0", 0, 1, ReductionKind.GOOD, 0)
    # move the singular point of the reduction to (0, 0)
    if p == 2:
        if E.b2 % 2 == 0:
            r = E.a4 % 2
            t = (r * (1 + E.a2 + E.a4) + E.a6) % 2
        else:
            r = E.a3 % 2
            t = (r + E.a4) % 2
    elif p == 3:
        r = (-E.b6) % 3 if E.b2 % 3 == 0 else (-E.b2 * E.b4) % 3
        t = (E.a1 * r + E.a3) % 3
    else:
        if E.c4 % p == 0:
            r = -pow(12, -1, p) * E.b2 % p
        else:
            r = -pow(12 * E.c4, -1, p) * (E.c6 + E.b2 * E.c4) % p
        t = -pow(2, -1, p) * (E.a1 * r + E.a3) % p
    E = _rst(E, r, 0, t)
    assert E.a3 % p == 0 and E.a4 % p == 0 and E.a6 % p == 0

    if E.c4 % p:
        split = _quad_has_root(1, E.a1, -E.a2, p)
        if split:
            return LocalData(p, f"I{vD}", 1, vD, ReductionKind.SPLIT, vD)
        return LocalData(p, f"I{vD}", 1, 2 if vD % 2 == 0 else 1, ReductionKind.NONSPLIT, vD)

    add = ReductionKind.ADDITIVE
    if _v(E.a6, p) < 2:
        return LocalData(p, "II", vD, 1, add, vD)
    if _v(E.b8, p) < 3:
        return LocalData(p, "III", vD - 1, 2, add, vD)
    if _v(E.b6, p) < 3:
        cp = 3 if _quad_has_root(1, E.a3 // p, -(E.a6 // (p * p)), p) else 1
        return LocalData(p, "IV", vD - 2, cp, add, vD)

    # arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
    if p == 2:
        s = E.a2 % 2
        t = 2 * ((E.a6 // 4) % 2)
    else:
        inv2 = pow(2, -1, p)
        s = -E.a1 * inv2
        t = p * ((-(E.a3 // p) * inv2) % p)
    E = _rst(E, 0, s, t)
    b, c, d = E.a2 // p, E.a4 // (p * p), E.a6 // p**3
    w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
    x = 3 * c - b * b

    if w % p:
        cp = 1 + _cubic_root_count(b, c, d, p)
        return LocalData(p, "I0*", vD - 4, cp, add, vD)

    if x % p:
        # double root: move it to 0, then peel off I_m* layers
        if p == 2:
            r = c
        elif p == 3:
            r = c * b
        else:
            r = (b * c - 9 * d) * pow(2 * x, -1, p)
        E = _rst(E, p * (r % p), 0, 0)
        ix = iy = 3
        mx = my = p * p
        cp = 0
        while cp == 0:
            xa2 = E.a2 // p
            xa3 = E.a3 // my
            xa4 = E.a4 // (p * mx)
            xa6 = E.a6 // (mx * my)
            if (xa3 * xa3 + 4 * xa6) % p:
                cp = 4 if _quad_has_root(1, xa3, -xa6, p) else 2
                break
            t = my * xa6 if p == 2 else my * ((-xa3 * pow(2, -1, p)) % p)
            E = _rst(E, 0, 0, t)
            my *= p
            iy += 1
            xa2 = E.a2 // p
            xa3 = E.a3 // my
            xa4 = E.a4 // (p * mx)
            xa6 = E.a6 // (mx * my)
            if (xa4 * xa4 - 4 * xa2 * xa6) % p:
                cp = 4 if _quad_has_root(xa2, xa4, xa6, p) else 2
                break
            r = mx * ((xa6 * xa2) % 2) if p == 2 else mx * ((-xa4 * pow(2 * xa2, -1, p)) % p)
            E = _rst(E, r, 0, 0)
            mx *= p
            ix += 1
        m = ix + iy - 5
        return LocalData(p, f"I{m}*", vD - ix - iy + 1, cp, add, vD)

    # triple root: move it to 0
    if p == 2:
        r = b
    elif p == 3:
        r = -d
    else:
        r = -b * pow(3, -1, p)
    E = _rst(E, p * (r % p), 0, 0)
    x3 = E.a3 // (p * p)
    x6 = E.a6 // p**4
    if (x3 * x3 + 4 * x6) % p:
        cp = 3 if _quad_has_root(1, x3, -x6, p) else 1
        return LocalData(p, "IV*", vD - 6, cp, add, vD)
    t = x6 if p == 2 else x3 * pow(2, -1, p)
    E = _rst(E, 0, 0, -p * p * (t % p))
    if _v(E.a4, p) < 4:
        return LocalData(p, "III*", vD - 7, 2, add, vD)
    if _v(E.a6, p) < 6:
        return LocalData(p, "II*", vD - 8, 1, add, vD)
    raise NonMinimalModelError(f"model is not minimal at {p}")


def local_data(E: CurveModel) -> dict[int, LocalData]:
    """Tate data at every prime dividing the discriminant of E (must be minimal)."""
    return {p: tate_local_data(E, p) for p, _ in factorize(E.discriminant)}


def conductor(E: CurveModel) -> int:
    Emin = minimal_model(E)[0]
    return math.prod(p**ld.conductor_exponent for p, ld in local_data(Emin).items())


def tamagawa_product(E: CurveModel) -> int:
    """Product of c_p over bad primes of the minimal model of E."""
    Emin = minimal_model(E)[0]
    return math.prod(ld.tamagawa for ld in local_data(Emin).values())


def reduction_class(E: CurveModel, p: int, ap: int | None = None) -> ReductionClass:
    Emin = minimal_model(E)[0]
    ld = tate_local_data(Emin, p)
    if ld.is_good:
        if ap is None:
            raise ValueError(f"a_p required at the good prime {p}")
        return ReductionClass.SUPERSINGULAR if ap % p == 0 else ReductionClass.ORDINARY
    return {
        ReductionKind.SPLIT: ReductionClass.SPLIT_MULT,
        ReductionKind.NONSPLIT: ReductionClass.NONSPLIT_MULT,
        ReductionKind.ADDITIVE: ReductionClass.ADDITIVE,
    }[ld.reduction_kind]


def root_number_semistable(E: CurveModel) -> int:
    """Global root number of a semistable curve: -prod over p | N of (-a_p)."""
    Emin = minimal_model(E)[0]
    w = -1
    for ld in local_data(Emin).values():
        if ld.conductor_exponent != 1:
            raise ValueError("curve is not semistable")
        w *= -ld.ap_bad
    return w


def twist_root_number(E: CurveModel | int, d: int, base_sign: int = 1) -> int:
    """Root number of E_d for d coprime to the conductor N of E: w(E) * chi_d(-N).

    ``E`` may be given directly as its conductor.
    """
    N = E if isinstance(E, int) else conductor(E)
    if math.gcd(d, N) != 1:
        raise ValueError(f"d = {d} is not coprime to N = {N}")
    return base_sign * kronecker(d, -N)
