"""Normalized Frobenius data: a_p scans of elliptic curves over Q, degree-4
local factors of genus-2 curves, and power sequences over a fixed F_q."""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._exact import discriminant
from .finite_field import (
    IntPoly,
    is_unramified,
    prime_power_base,
    primes_up_to,
    smallest_nonresidue,
)

log = logging.getLogger(__name__)

_ANGLE_TOL = 1e-9


class BadReduction(ValueError):
    """The prime is 2 or divides the discriminant (or the leading coefficient)."""


class NotWeil(ValueError):
    """a_q^2 > 4q, so a_q cannot be the trace of a Weil q-number pair."""


@dataclass(frozen=True)
class EllipticCurveQ:
    """y^2 = x^3 + a x + b."""

    a: int
    b: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError(f"singular curve: a={self.a}, b={self.b}")

    @property
    def discriminant(self) -> int:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def is_good(self, p: int) -> bool:
        return p != 2 and self.discriminant % p != 0

    def __str__(self) -> str:
        return str(IntPoly((self.b, self.a, 0, 1)))


@dataclass(frozen=True)
class HyperCurveQ:
    """y^2 = f(x) with deg f in {5, 6} and f squarefree."""

    f: IntPoly

    def __post_init__(self):
        if self.f.degree not in (5, 6):
            raise ValueError("genus-2 model needs deg f in {5, 6}")
        if self.discriminant == 0:
            raise ValueError(f"{self.f} has a repeated factor (zero discriminant)")

    @property
    def discriminant(self) -> int:
        return discriminant(self.f.coefficients)

    def is_good(self, p: int) -> bool:
        return p != 2 and is_unramified(self.f, p)

    def __str__(self) -> str:
        return str(self.f)


@dataclass(frozen=True)
class TraceDatum:
    p: int
    a_p: int

    @property
    def normalized(self) -> float:
        return self.a_p / math.sqrt(self.p)

    @property
    def angle(self) -> float:
        """theta in [0, pi] with normalized = 2 cos(theta)."""
        return math.acos(max(-1.0, min(1.0, self.normalized / 2)))


@dataclass
class ECScan:
    curve: EllipticCurveQ
    bound: int
    data: list[TraceDatum]
    skipped: list[int] = field(default_factory=list)

    @property
    def primes(self) -> np.ndarray:
        return np.array([d.p for d in self.data], dtype=np.int64)

    @property
    def traces(self) -> np.ndarray:
        return np.array([d.a_p for d in self.data], dtype=np.int64)

    @property
    def normalized(self) -> np.ndarray:
        return self.traces / np.sqrt(self.primes)

    @property
    def angles(self) -> np.ndarray:
        return np.arccos(np.clip(self.normalized / 2, -1.0, 1.0))


@dataclass(frozen=True)
class LocalFactorG2:
    """L_p(T) = 1 - e1 T + e2 T^2 - p e1 T^3 + p^2 T^4 and its eigenangles."""

    p: int
    e1: int
    e2: int
    theta: tuple[float, float]

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        p = self.p
        return (1, -self.e1, self.e2, -p * self.e1, p * p)

    @property
    def a1(self) -> float:
        return self.e1 / math.sqrt(self.p)

    @property
    def a2(self) -> float:
        return self.e2 / self.p

    def roots(self) -> np.ndarray:
        """Roots of L_p(T), from the factorization into (1 - c_i sqrt(p) T + p T^2)."""
        sp = math.sqrt(self.p)
        out = []
        for t in self.theta:
            # 1 - 2cos(t) sqrt(p) T + p T^2 vanishes at T = e^{+-i t} / sqrt(p)
            out.extend([cmath.exp(1j * t) / sp, cmath.exp(-1j * t) / sp])
        return np.array(out)


@dataclass(frozen=True)
class PowerSeq:
    q: int
    a_q: int
    alpha: complex
    angles: np.ndarray
    terms: np.ndarray


def ec_trace(curve: EllipticCurveQ, p: int) -> int:
    """a_p = p + 1 - #E(F_p)."""
    if not curve.is_good(p):
        raise BadReduction(f"{curve} has bad reduction at {p}")
    return int(_kernels.ec_trace(curve.a, curve.b, p))


def ec_scan(curve: EllipticCurveQ, bound: int) -> ECScan:
    if bound < 3:
        raise ValueError("bound must be at least 3")
    primes = primes_up_to(bound)
    good = np.array([curve.is_good(int(p)) for p in primes], dtype=bool)
    skipped = [int(p) for p in primes[~good]]
    if skipped:
        log.info("skipping bad primes %s", skipped)
    ps = primes[good]
    traces = _kernels.ec_traces(curve.a, curve.b, ps)
    data = [TraceDatum(int(p), int(t)) for p, t in zip(ps, traces)]
    return ECScan(curve, bound, data, skipped)


def _infinity_points(f: IntPoly, p: int, degree: int) -> int:
    if f.degree == 5:
        return 1
    if degree == 2:
        return 2  # every element of F_p is a square in F_{p^2}
    lc = f.lc % p
    return 1 + (1 if pow(lc, (p - 1) // 2, p) == 1 else -1)


def g2_point_counts(curve: HyperCurveQ, p: int) -> tuple[int, int]:
    """(#C(F_p), #C(F_{p^2})) on the smooth model."""
    if not curve.is_good(p):
        raise BadReduction(f"{curve} has bad reduction at {p}")
    coeffs = np.array(curve.f.coefficients, dtype=np.int64)
    s1, s2 = _kernels.g2_character_sums(coeffs, p, smallest_nonresidue(p))
    n1 = p + int(s1) + _infinity_points(curve.f, p, 1)
    n2 = p * p + int(s2) + _infinity_points(curve.f, p, 2)
    return n1, n2


def eigenangles(e1: int, e2: int, p: int) -> tuple[float, float]:
    """Sorted (theta1, theta2) in [0, pi] from c^2 - (e1/sqrt p) c + (e2/p - 2) = 0, c = 2cos(theta)."""
    disc = e1 * e1 - 4 * e2 + 8 * p  # p times the discriminant in c
    if disc < 0:
        raise ArithmeticError(f"non-real eigenangles at p={p}: e1={e1}, e2={e2}")
    sp = math.sqrt(p)
    root = math.sqrt(disc)
    angles = []
    for c in ((e1 - root) / (2 * sp), (e1 + root) / (2 * sp)):
        if abs(c) > 2 + _ANGLE_TOL:
            raise ArithmeticError(f"|2cos(theta)| = {abs(c)} > 2 at p={p}")
        angles.append(math.acos(max(-1.0, min(1.0, c / 2))))
    t1, t2 = sorted(angles)
    return t1, t2


def g2_local_factor(curve: HyperCurveQ, p: int) -> LocalFactorG2:
    n1, n2 = g2_point_counts(curve, p)
    s1 = p + 1 - n1
    s2 = p * p + 1 - n2
    e1 = s1
    e2, rem = divmod(s1 * s1 - s2, 2)
    if rem:
        raise ArithmeticError(f"odd s1^2 - s2 at p={p}")
    return LocalFactorG2(p, e1, e2, eigenangles(e1, e2, p))


def g2_scan(curve: HyperCurveQ, bound: int) -> list[LocalFactorG2]:
    if bound < 3:
        raise ValueError("bound must be at least 3")
    out = []
    for p in primes_up_to(bound):
        p = int(p)
        if not curve.is_good(p):
            log.info("skipping bad prime %d", p)
            continue
        out.append(g2_local_factor(curve, p))
    return out


def is_ordinary(q: int, a_q: int) -> bool:
    p, _ = prime_power_base(q)
    return a_q % p != 0


def power_sequence(q: int, a_q: int, n_terms: int) -> PowerSeq:
    """Normalized traces a_{q^n}/q^{n/2} = 2 cos(n arg alpha), n = 1..n_terms.

    The angle n * arg(alpha) carries an absolute error of about n ulp(arg alpha).
    """
    prime_power_base(q)
    if a_q * a_q > 4 * q:
        raise NotWeil(f"a_q={a_q} exceeds 2 sqrt(q) for q={q}")
    if n_terms < 1:
        raise ValueError("need at least one term")
    alpha = complex(a_q, math.sqrt(4 * q - a_q * a_q)) / 2
    phi = math.atan2(alpha.imag, alpha.real)
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    angles = np.mod(n * phi, 2 * math.pi)
    terms = 2 * np.cos(n * phi)
    return PowerSeq(q, a_q, alpha, angles, terms)


def detect_period(terms: np.ndarray, max_period: int, tol: float = 1e-9) -> int | None:
    """Smallest period <= max_period of the sequence, or None."""
    terms = np.asarray(terms)
    for d in range(1, min(max_period, len(terms) - 1) + 1):
        if np.all(np.abs(terms[d:] - terms[:-d]) <= tol):
            return d
    return None


def hasse_bound_ok(a_p: int, p: int) -> bool:
    return a_p * a_p <= 4 * p


def weil_bounds_ok(e1: int, e2: int, p: int) -> bool:
    return e1 * e1 <= 16 * p and abs(e2) <= 6 * p


__all__ = [
    "BadReduction",
    "NotWeil",
    "EllipticCurveQ",
    "HyperCurveQ",
    "TraceDatum",
    "ECScan",
    "LocalFactorG2",
    "PowerSeq",
    "ec_trace",
    "ec_scan",
    "g2_point_counts",
    "g2_local_factor",
    "g2_scan",
    "eigenangles",
    "is_ordinary",
    "power_sequence",
    "detect_period",
]
