"""Integral Weierstrass models and the exact arithmetic built on them."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .algebra.ntheory import factorize, is_prime, valuation
from .algebra.poly import (
    RationalPoly,
    _divmod_q,
    _mul,
    _add,
    _sub,
    _scale,
    _eval,
    poly_factor_over_Q,
    rational_roots,
)

Point = Optional[tuple[Fraction, Fraction]]  # None is the point at infinity


class SingularCurveError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class IsogenyMismatchError(RuntimeError):
    """Computed isogeny data disagrees with the database record."""


@dataclass(frozen=True)
class CurveModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    b2: int = field(init=False, compare=False)
    b4: int = field(init=False, compare=False)
    b6: int = field(init=False, compare=False)
    b8: int = field(init=False, compare=False)
    c4: int = field(init=False, compare=False)
    c6: int = field(init=False, compare=False)
    discriminant: int = field(init=False, compare=False)
    j: Fraction = field(init=False, compare=False)

    def __post_init__(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        if disc == 0:
            raise SingularCurveError(f"singular model {self.ainvs}")
        for name, val in (("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8), ("c4", c4), ("c6", c6)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "discriminant", disc)
        object.__setattr__(self, "j", Fraction(c4**3, disc))

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def is_short(self) -> bool:
        return self.a1 == self.a2 == self.a3 == 0

    def two_division_cubic(self) -> RationalPoly:
        """4x^3 + b2 x^2 + 2 b4 x + b6, i.e. (2y + a1 x + a3)^2 on the curve."""
        return RationalPoly.from_ints([self.b6, 2 * self.b4, self.b2, 4])

    def contains(self, pt: Point) -> bool:
        if pt is None:
            return True
        x, y = pt
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x**3 + a2 * x * x + a4 * x + a6

    def __repr__(self):
        return f"CurveModel{self.ainvs}"


def make_curve(a1: int, a2: int, a3: int, a4: int, a6: int) -> CurveModel:
    return CurveModel(int(a1), int(a2), int(a3), int(a4), int(a6))


@dataclass(frozen=True)
class Scaling:
    """Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    @classmethod
    def identity(cls) -> "Scaling":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(0))


def change_coordinates(E: CurveModel, u, r, s, t) -> CurveModel:
    u, r, s, t = (Fraction(v) for v in (u, r, s, t))
    a1, a2, a3, a4, a6 = E.ainvs
    n1 = (a1 + 2 * s) / u
    n2 = (a2 - s * a1 + 3 * r - s * s) / u**2
    n3 = (a3 + r * a1 + 2 * t) / u**3
    n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4
    n6 = (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6
    new = (n1, n2, n3, n4, n6)
    if any(v.denominator != 1 for v in new):
        raise ValueError(f"coordinate change gives a non-integral model {new}")
    return make_curve(*(int(v) for v in new))


def short_model(E: CurveModel) -> CurveModel:
    """y^2 = x^3 - 27 c4 x - 54 c6, isomorphic to E over Q."""
    return make_curve(0, 0, 0, -27 * E.c4, -54 * E.c6)


def _kraus_ok(c4: int, c6: int, p: int) -> bool:
    if p == 3:
        return c6 == 0 or valuation(c6, 3) != 2
    if p == 2:
        return c6 % 4 == 3 or (c4 % 16 == 0 and c6 % 32 in (0, 8))
    return True


def _c4c6_to_ainvs(c4: int, c6: int) -> tuple[int, ...]:
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4 = (b2 * b2 - c4) // 24
    b6 = (-(b2**3) + 36 * b2 * b4 - c6) // 216
    a1 = b2 % 2
    a3 = b6 % 2
    a2 = (b2 - a1) // 4
    a4 = (b4 - a1 * a3) // 2
    a6 = (b6 - a3) // 4
    return a1, a2, a3, a4, a6


def minimal_model(E: CurveModel) -> tuple[CurveModel, Scaling]:
    """Global minimal model in reduced form, with the coordinate change used."""
    c4, c6, disc = E.c4, E.c6, E.discriminant
    u = 1
    for p, e in factorize(disc):
        if e < 12:
            continue
        d = e // 12
        if c4:
            d = min(d, valuation(c4, p) // 4)
        if c6:
            d = min(d, valuation(c6, p) // 6)
        while d > 0 and not _kraus_ok(c4 // p ** (4 * d), c6 // p ** (6 * d), p):
            d -= 1
        u *= p**d
    m4, m6 = c4 // u**4, c6 // u**6
    ainvs = _c4c6_to_ainvs(m4, m6)
    Emin = make_curve(*ainvs)
    if (Emin.c4, Emin.c6) != (m4, m6):
        raise ArithmeticError(f"minimal model reconstruction failed for {E}")
    a1, a2, a3 = E.a1, E.a2, E.a3
    s = Fraction(u * Emin.a1 - a1, 2)
    r = (u * u * Emin.a2 - a2 + s * a1 + s * s) / 3
    t = (u**3 * Emin.a3 - a3 - r * a1) / 2
    scaling = Scaling(Fraction(u), r, s, t)
    if change_coordinates(E, *(scaling.u, scaling.r, scaling.s, scaling.t)) != Emin:
        raise ArithmeticError("minimal model coordinate change inconsistent")
    return Emin, scaling


def is_squarefree(d: int) -> bool:
    return d != 0 and factorize(d).is_squarefree()


def quadratic_twist(E: CurveModel, d: int, minimal: bool = True) -> CurveModel:
    """Twist by Q(sqrt(d)) through the short model.

    With ``minimal=False`` the short twisted model y^2 = x^3 + A d^2 x + B d^3 is
    returned (starting from E itself when E is already short).
    """
    if not is_squarefree(d):
        raise ValueError(f"twist parameter {d} is not squarefree")
    S = E if E.is_short() else short_model(E)
    T = make_curve(0, 0, 0, S.a4 * d * d, S.a6 * d**3)
    return minimal_model(T)[0] if minimal else T


# -- group law over Q ------------------------------------------------------


def point_neg(E: CurveModel, P: Point) -> Point:
    if P is None:
        return None
    x, y = P
    return (x, -y - E.a1 * x - E.a3)


def point_add(E: CurveModel, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return None
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
    nu = y1 - lam * x1
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return (x3, y3)


def point_mul(E: CurveModel, P: Point, n: int) -> Point:
    if n < 0:
        return point_mul(E, point_neg(E, P), -n)
    R: Point = None
    while n:
        if n & 1:
            R = point_add(E, R, P)
        P = point_add(E, P, P)
        n >>= 1
    return R


def point_order(E: CurveModel, P: Point, cap: int = 16) -> int:
    Q = P
    for n in range(1, cap + 1):
        if Q is None:
            return n
        Q = point_add(E, Q, P)
    return 0


def points_with_x(E: CurveModel, x: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Rational points with the given x-coordinate."""
    x = Fraction(x)
    disc = 4 * x**3 + E.b2 * x * x + 2 * E.b4 * x + E.b6
    if disc < 0:
        return []
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return []
    root = Fraction(rn, rd)
    base = -(E.a1 * x + E.a3)
    ys = {(base + root) / 2, (base - root) / 2}
    return sorted((x, y) for y in ys)


# -- division polynomials ---------------------------------------------------


def _division_table(E: CurveModel, m: int) -> list[list[int]]:
    """f_k for k <= m: psi_k for odd k, psi_k / psi_2 for even k (integer lists)."""
    b2, b4, b6, b8 = E.b2, E.b4, E.b6, E.b8
    F = [b6, 2 * b4, b2, 4]
    F2 = _mul(F, F)
    f = [[], [1], [1], [b8, 3 * b6, 3 * b4, b2, 3]]
    f.append([b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2])
    for n in range(5, m + 1):
        k = n // 2
        if n % 2:
            t1 = _mul(f[k + 2], _mul(f[k], _mul(f[k], f[k])))
            t2 = _mul(f[k - 1], _mul(f[k + 1], _mul(f[k + 1], f[k + 1])))
            if k % 2 == 0:
                t1 = _mul(F2, t1)
            else:
                t2 = _mul(F2, t2)
            f.append(_sub(t1, t2))
        else:
            inner = _sub(
                _mul(f[k + 2], _mul(f[k - 1], f[k - 1])),
                _mul(f[k - 2], _mul(f[k + 1], f[k + 1])),
            )
            f.append(_mul(f[k], inner))
    return f


def division_polynomial(E: CurveModel, m: int) -> RationalPoly:
    """The m-division polynomial in x.

    m = 2 gives the 2-division cubic 4x^3 + b2 x^2 + 2 b4 x + b6.  Odd m gives
    psi_m (degree (m^2 - 1)/2); even m >= 4 gives psi_m / psi_2 (degree
    (m^2 - 4)/2).
    """
    if not 2 <= m <= 12:
        raise ValueError("division polynomials are provided for 2 <= m <= 12")
    if m == 2:
        return E.two_division_cubic()
    return RationalPoly.from_ints(_division_table(E, m)[m])


# -- torsion ------------------------------------------------------------------

MAZUR_CYCLIC = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12}
MAZUR_NONCYCLIC = {2, 4, 6, 8}  # Z/2 x Z/n2 with these n2
_PRIMARY_CAP = {2: 8, 3: 9, 5: 5, 7: 7}


@dataclass(frozen=True)
class TorsionStructure:
    invariants: tuple[int, ...]
    generators: tuple[tuple[Fraction, Fraction], ...]

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    @property
    def two_rank(self) -> int:
        return sum(1 for n in self.invariants if n % 2 == 0)


def _count_points_small(E: CurveModel, p: int) -> int:
    """#E(F_p) by enumeration; only for small p."""
    squares = [0] * p
    for y in range(p):
        squares[y * y % p] += 1
    count = 1
    for x in range(p):
        d = (4 * x**3 + E.b2 * x * x + 2 * E.b4 * x + E.b6) % p
        count += squares[d]
    return count


def torsion_bound(E: CurveModel, nprimes: int = 8) -> int:
    g = 0
    found = 0
    p = 10
    while found < nprimes:
        p += 1
        if not is_prime(p) or E.discriminant % p == 0:
            continue
        g = math.gcd(g, _count_points_small(E, p))
        found += 1
    return g


def _primary_points(E: CurveModel, ell: int, cap: int) -> set:
    """All rational points whose order divides cap (a power of ell)."""
    xs: set[Fraction] = set()
    if ell == 2:
        xs.update(rational_roots(E.two_division_cubic()))
        if cap >= 4:
            table = _division_table(E, cap)
            m = 4
            while m <= cap:
                xs.update(rational_roots(RationalPoly.from_ints(table[m])))
                m *= 2
    else:
        table = _division_table(E, cap)
        m = ell
        while m <= cap:
            xs.update(rational_roots(RationalPoly.from_ints(table[m])))
            m *= ell
    pts = {None}
    for x in xs:
        for P in points_with_x(E, x):
            if point_mul(E, P, cap) is None:
                pts.add(P)
    return pts


def torsion_subgroup(E: CurveModel) -> TorsionStructure:
    bound = torsion_bound(E)
    group = {None}
    for ell, e in factorize(bound) if bound > 1 else []:
        if ell not in _PRIMARY_CAP:
            continue
        cap = min(ell**e, _PRIMARY_CAP[ell])
        part = _primary_points(E, ell, cap)
        group = {point_add(E, P, Q) for P in group for Q in part}
    n = len(group)
    pts = sorted((P for P in group if P is not None), key=lambda P: (P[0], P[1]))
    if n == 1:
        return TorsionStructure((), ())
    orders = {P: point_order(E, P) for P in pts}
    top = max(orders.values())
    gen1 = min((P for P in pts if orders[P] == top), key=lambda P: (abs(P[0]), P[0], P[1]))
    if top == n:
        if n not in MAZUR_CYCLIC:
            raise ArithmeticError(f"torsion order {n} outside Mazur's list")
        return TorsionStructure((n,), (gen1,))
    if top * 2 != n or top not in MAZUR_NONCYCLIC:
        raise ArithmeticError(f"torsion of size {n} with exponent {top} is impossible")
    span = {point_mul(E, gen1, k) for k in range(top)}
    gen2 = next(P for P in pts if orders[P] == 2 and P not in span)
    return TorsionStructure((2, top), (gen2, gen1))


def two_torsion_rank(E: CurveModel) -> int:
    """Dimension of E(Q)[2] over F_2 (0, 1 or 2)."""
    n = len(rational_roots(E.two_division_cubic()))
    return {0: 0, 1: 1, 3: 2}[n]


def two_isogenous_curve(E: CurveModel) -> CurveModel:
    """E / E(Q)[2] for E with exactly one rational 2-torsion point (minimal model)."""
    S = short_model(E)
    roots = rational_roots(RationalPoly.from_ints([S.a6, S.a4, 0, 1]))
    if len(roots) != 1:
        raise PreconditionError(f"E(Q)[2] has {len(roots) + 1 if roots else 1} points, need exactly 2")
    x0 = roots[0]
    assert x0.denominator == 1
    x0 = int(x0)
    t = 3 * x0 * x0 + S.a4
    w = x0 * t
    return minimal_model(make_curve(0, 0, 0, S.a4 - 5 * t, S.a6 - 7 * w))[0]


def _closed_under_doubling(E: CurveModel, g: list[int]) -> bool:
    """Is the root set of g mapped into itself by x -> x(2P)?"""
    num = [-E.b8, -2 * E.b6, -E.b4, 0, 1]
    den = [E.b6, 2 * E.b4, E.b2, 4]
    deg = len(g) - 1
    total: list = []
    num_pow = [[1]]
    den_pow = [[1]]
    for _ in range(deg):
        num_pow.append(_mul(num_pow[-1], num))
        den_pow.append(_mul(den_pow[-1], den))
    for i, c in enumerate(g):
        total = _add(total, _scale(_mul(num_pow[i], den_pow[deg - i]), c))
    _, rem = _divmod_q([Fraction(c) for c in total], [Fraction(c) for c in g])
    return not rem


def has_rational_p_isogeny(E: CurveModel, p: int, db_degrees: Optional[Sequence[int]] = None) -> bool:
    """Whether E admits a Q-rational isogeny of degree p in {3, 5, 7}.

    Looks for a rational factor of psi_p of degree (p-1)/2 whose roots are
    permuted by the doubling map; such a factor is the kernel polynomial of a
    cyclic subgroup of order p.  When ``db_degrees`` is supplied the computed
    answer must agree with it.
    """
    if p not in (3, 5, 7):
        raise ValueError("p must be 3, 5 or 7")
    psi = division_polynomial(E, p)
    target = (p - 1) // 2
    factors = []
    for g, e in poly_factor_over_Q(psi):
        if 0 < g.degree <= target:
            factors.extend([g] * e)
    found = False
    for r in range(1, len(factors) + 1):
        for combo in itertools.combinations(range(len(factors)), r):
            if sum(factors[i].degree for i in combo) != target:
                continue
            g = [1]
            for i in combo:
                g = _mul(g, factors[i].integer_coeffs())
            if _closed_under_doubling(E, g):
                found = True
                break
        if found:
            break
    if db_degrees is not None and found != (p in set(db_degrees)):
        raise IsogenyMismatchError(
            f"computed {p}-isogeny={found} disagrees with database degrees {sorted(db_degrees)}"
        )
    return found
