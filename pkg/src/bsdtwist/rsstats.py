"""Normalised Sha statistics and goodness-of-fit against the standard normal."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from statistics import NormalDist
from typing import Sequence

import numpy as np

from .algebra.poly import RationalPoly, discriminant_cubic, rational_roots
from .curve import CurveModel

# Z_d uses natural logarithms throughout
LOG = math.log
MIN_ABS_D = 16
_STD = NormalDist()


class GaloisClass(str, Enum):
    S3 = "S3"
    C3 = "C3"
    C2 = "C2"
    C1 = "C1"


# c(g) = 1 + #fixed roots, listed over the group elements
_C_VALUES = {
    GaloisClass.S3: (4, 2, 2, 2, 1, 1),
    GaloisClass.C3: (4, 1, 1),
    GaloisClass.C2: (4, 2),
    GaloisClass.C1: (4,),
}


@dataclass(frozen=True)
class RSParams:
    galois_class: GaloisClass
    mu: float
    sigma2: float
    c_values: tuple[int, ...]


def galois_class(f: RationalPoly) -> GaloisClass:
    """Galois group type of a separable cubic."""
    roots = rational_roots(f)
    if len(roots) == 3:
        return GaloisClass.C1
    if len(roots) == 1:
        return GaloisClass.C2
    disc = discriminant_cubic(f.coeffs)
    num, den = disc.numerator, disc.denominator
    is_square = num > 0 and math.isqrt(num) ** 2 == num and math.isqrt(den) ** 2 == den
    return GaloisClass.C3 if is_square else GaloisClass.S3


def params_for_class(cls: GaloisClass) -> RSParams:
    cs = _C_VALUES[cls]
    n = len(cs)
    mu = -0.5 - math.fsum(LOG(c) for c in cs) / n
    sigma2 = 1 + math.fsum(LOG(c) ** 2 for c in cs) / n
    return RSParams(cls, mu, sigma2, cs)


def rs_params(E: CurveModel | RationalPoly) -> RSParams:
    f = E if isinstance(E, RationalPoly) else E.two_division_cubic()
    return params_for_class(galois_class(f))


def z_value(sha: int, d: int, params: RSParams) -> float:
    if abs(d) < MIN_ABS_D:
        raise ValueError(f"|d| = {abs(d)} < {MIN_ABS_D}: log log |d| must exceed 1")
    if sha < 1:
        raise ValueError("sha must be a positive integer")
    ll = LOG(LOG(abs(d)))
    return (LOG(sha) - 0.5 * LOG(abs(d)) - params.mu * ll) / math.sqrt(params.sigma2 * ll)


class ZFamily(str, Enum):
    GENERIC = "generic-analytic"
    BSD = "bsd-unconditional"


@dataclass(frozen=True)
class ZEntry:
    d: int
    sha: int
    z: float


@dataclass
class ZSample:
    family: ZFamily
    entries: list[ZEntry] = field(default_factory=list)
    excluded_vanishing: int = 0
    excluded_budget: int = 0
    # nonvanishing values too far below 1 to give a positive integer
    excluded_anomaly: int = 0

    @property
    def zs(self) -> np.ndarray:
        return np.array([e.z for e in self.entries], dtype=float)

    @property
    def total(self) -> int:
        return len(self.entries) + self.excluded_vanishing + self.excluded_budget + self.excluded_anomaly


@dataclass(frozen=True)
class DistanceReport:
    n: int
    ks: float
    w1: float


def normal_cdf(x: float) -> float:
    # erfc keeps full relative accuracy in the lower tail
    return 0.5 * math.erfc(-x / math.sqrt(2))


def normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def _sorted(zs: Sequence[float]) -> list[float]:
    xs = sorted(float(z) for z in zs)
    if not xs:
        raise ValueError("empty sample")
    return xs


def ks_distance(zs: Sequence[float]) -> float:
    xs = _sorted(zs)
    n = len(xs)
    return max(max(i / n - normal_cdf(x), normal_cdf(x) - (i - 1) / n) for i, x in enumerate(xs, start=1))


def _G(x: float) -> float:
    """Antiderivative of the normal CDF: x Phi(x) + phi(x)."""
    return x * normal_cdf(x) + normal_pdf(x)


def _abs_gap(a: float, b: float, c: float) -> float:
    """int_a^b |Phi(x) - c| dx for 0 < c < 1."""
    if b <= a:
        return 0.0
    cross = _STD.inv_cdf(c)

    def above(lo, hi):  # Phi >= c on [lo, hi]
        return (_G(hi) - _G(lo)) - c * (hi - lo)

    if cross <= a:
        return above(a, b)
    if cross >= b:
        return -above(a, b)
    return -above(a, cross) + above(cross, b)


def wasserstein1_vs_normal(zs: Sequence[float]) -> float:
    """int |F_n(x) - Phi(x)| dx, evaluated exactly piece by piece."""
    xs = _sorted(zs)
    n = len(xs)
    lower = _G(xs[0])
    upper = normal_pdf(xs[-1]) - xs[-1] * (1 - normal_cdf(xs[-1]))
    middle = math.fsum(_abs_gap(xs[i - 1], xs[i], i / n) for i in range(1, n))
    return lower + middle + upper


def distances(zs: Sequence[float]) -> DistanceReport:
    return DistanceReport(len(zs), ks_distance(zs), wasserstein1_vs_normal(zs))


def silverman_bandwidth(zs: Sequence[float]) -> float:
    x = np.asarray(zs, dtype=float)
    return 1.06 * float(np.std(x, ddof=1)) * len(x) ** (-0.2)


def kde(zs: Sequence[float], grid: Sequence[float], bandwidth: float | None = None) -> np.ndarray:
    """Gaussian kernel density estimate on the grid."""
    x = np.asarray(zs, dtype=float)
    if len(x) < 2:
        raise ValueError("kde needs at least two points")
    h = silverman_bandwidth(x) if bandwidth is None else float(bandwidth)
    g = np.asarray(grid, dtype=float)
    u = (g[:, None] - x[None, :]) / h
    return np.exp(-0.5 * u * u).sum(axis=1) / (len(x) * h * math.sqrt(2 * math.pi))


def kde_grid(zs: Sequence[float], points: int = 512, bandwidth: float | None = None) -> np.ndarray:
    x = np.asarray(zs, dtype=float)
    h = silverman_bandwidth(x) if bandwidth is None else bandwidth
    return np.linspace(x.min() - 3 * h, x.max() + 3 * h, points)


def histogram(zs: Sequence[float], bins: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Density-normalised histogram; Freedman-Diaconis bin width unless bins is given."""
    x = np.asarray(zs, dtype=float)
    counts, edges = np.histogram(x, bins="fd" if bins is None else bins, density=True)
    return edges, counts
