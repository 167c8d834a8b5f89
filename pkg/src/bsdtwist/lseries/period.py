"""Real periods via the arithmetic-geometric mean."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..curve import CurveModel, minimal_model

AGM_MAX_ITER = 200


class PrecisionError(ArithmeticError):
    pass


def _agm(a, b):
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= abs(a) * mpmath.eps * 4:
            return (a + b) / 2
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
    raise PrecisionError("AGM did not converge")


def _real_root_data(E: CurveModel):
    """(e1, e2) with e1 the largest real root of 4x^3 + b2 x^2 + 2 b4 x + b6."""
    roots = mpmath.polyroots([4, E.b2, 2 * E.b4, E.b6], maxsteps=200, extraprec=2 * mpmath.mp.prec)
    if E.discriminant > 0:
        real = sorted((mpmath.re(r) for r in roots), reverse=True)
        return real[0], real[1], real[2]
    real = max(roots, key=lambda r: -abs(mpmath.im(r)))
    e1 = mpmath.re(real)
    e2 = next(r for r in roots if mpmath.im(r) > 0)
    return e1, e2, mpmath.conj(e2)


def least_real_period(E: CurveModel, precision_bits: int = 80) -> float:
    """The least positive real period of dx / (2y + a1 x + a3) on the given model."""
    with mpmath.workprec(precision_bits + 20):
        e1, e2, e3 = _real_root_data(E)
        if E.discriminant > 0:
            w = mpmath.pi / _agm(mpmath.sqrt(e1 - e3), mpmath.sqrt(e1 - e2))
        else:
            z = e1 - e2
            w = mpmath.pi / _agm(mpmath.re(mpmath.sqrt(z)), mpmath.sqrt(abs(z)))
        return float(w)


def real_period(E: CurveModel, precision_bits: int = 80) -> float:
    """Omega of the minimal model: the least real period times the number of real components."""
    Emin = minimal_model(E)[0]
    w = least_real_period(Emin, precision_bits)
    return 2 * w if Emin.discriminant > 0 else w


def period_by_quadrature(E: CurveModel, precision_bits: int = 80) -> float:
    """Oracle for :func:`least_real_period`: 2 * int_0^oo dt / sqrt((t^2 + e1 - e2)(t^2 + e1 - e3))."""
    with mpmath.workprec(precision_bits + 20):
        e1, e2, e3 = _real_root_data(E)

        def f(t):
            return 1 / mpmath.sqrt(mpmath.re((t * t + e1 - e2) * (t * t + e1 - e3)))

        # break the range where the integrand changes scale
        scales = {abs(e1 - e2), abs(e1 - e3), abs(mpmath.re(e1 - e2))}
        marks = sorted({mpmath.sqrt(s) * k for s in scales if s > 0 for k in (0.25, 0.5, 1, 2, 4)})
        return float(2 * mpmath.quad(f, [0, *marks, mpmath.inf], maxdegree=10))


def snap_rational(raw: float, max_den: int, rel_tol: float = 1e-8) -> Fraction:
    """Nearest rational with denominator <= max_den; PrecisionError if it is not close."""
    q = Fraction(raw).limit_denominator(max_den)
    if abs(raw - float(q)) >= rel_tol * max(1.0, abs(raw)):
        raise PrecisionError(f"{raw!r} is not within {rel_tol} of a rational with denominator <= {max_den}")
    return q
