"""Truncated Euler products, the Dirichlet series F(s) = -sum chi(x_p) log p / p^s,
and prime-counting-normalized character sums, all over finite prime ranges.

Nothing here continues anything analytically: every quantity is a finite
sum over the primes supplied, accumulated in ascending order of p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .st_groups import IrrepSpec

DET_GUARD = 1e-12
# approach to s = 1 along s = 1 + 2^-j
S_GRID = tuple(1 + 2.0**-j for j in range(1, 9))


class DivergenceGuard(ArithmeticError):
    pass


@dataclass(frozen=True)
class EulerEval:
    s: float
    bound: int
    log_value: complex
    terms_used: int

    @property
    def value(self) -> complex:
        return complex(np.exp(self.log_value))


def _select(primes, samples, bound):
    primes = np.asarray(primes, dtype=np.int64)
    samples = np.asarray(samples, dtype=float)
    if bound is None:
        return primes, samples
    keep = primes <= bound
    return primes[keep], samples[keep]


def _power_sum_log_det(irrep: IrrepSpec, samples, t: np.ndarray) -> np.ndarray:
    """log det(1 - rho(x) t) = -sum_m chi(x^m) t^m / m, truncated once dim * t^m / m < 1e-18."""
    out = np.zeros(len(t), dtype=complex)
    tmax = float(t.max()) if len(t) else 0.0
    m = 1
    while True:
        out -= irrep.power_char(samples, m) * t**m / m
        if irrep.dim * tmax ** (m + 1) / (m + 1) < 1e-18:
            break
        m += 1
    return out


def local_log_factors(primes, samples, irrep: IrrepSpec, s: float) -> np.ndarray:
    """-log det(1 - rho(x_p) p^-s) for each prime."""
    t = np.asarray(primes, dtype=float) ** (-s)
    angles = irrep.eigenangles(samples)
    if angles is None:
        return -_power_sum_log_det(irrep, samples, t)
    factors = 1 - np.exp(1j * angles) * t[:, None]
    dets = np.prod(factors, axis=1)
    if np.any(np.abs(dets) < DET_GUARD):
        raise DivergenceGuard("local factor determinant below 1e-12")
    return -np.sum(np.log(factors), axis=1)


def partial_euler(primes, samples, irrep: IrrepSpec, s: float, bound: int | None = None) -> EulerEval:
    """log of prod_{p <= bound} det(1 - rho(x_p) p^-s)^-1, for real s > 1."""
    if not s > 1:
        raise ValueError("the Euler product is only taken for s > 1")
    ps, xs = _select(primes, samples, bound)
    logs = local_log_factors(ps, xs, irrep, s)
    total = complex(0)
    for v in logs:  # fixed ascending-p summation order
        total += v
    if not np.isfinite(total.real) or not np.isfinite(total.imag):
        raise DivergenceGuard("non-finite log of partial product")
    return EulerEval(s, int(bound if bound is not None else (ps[-1] if len(ps) else 0)), total, len(ps))


def dirichlet_F(primes, samples, irrep: IrrepSpec, s: float, bound: int | None = None) -> complex:
    """F(s) = -sum_{p <= bound} chi(x_p) log(p) / p^s."""
    if not s > 1:
        raise ValueError("F(s) is only summed for s > 1")
    ps, xs = _select(primes, samples, bound)
    if len(ps) == 0:
        return 0j
    chi = np.asarray(irrep(xs), dtype=complex)
    terms = chi * np.log(ps) / ps.astype(float) ** s
    return complex(-np.sum(terms))


def log_log_slope(xs, ys) -> float:
    """Least-squares slope of log|y| against log x."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.abs(np.asarray(ys, dtype=complex)))
    return float(np.polyfit(lx, ly, 1)[0])


def profile_checkpoints(bound: int) -> list[int]:
    """1, 2, 5 times powers of ten from 100 up to bound, plus bound."""
    out = []
    base = 100
    while base <= bound:
        for m in (1, 2, 5):
            if m * base <= bound:
                out.append(m * base)
        base *= 10
    if not out or out[-1] != bound:
        out.append(bound)
    return out


@dataclass(frozen=True)
class ChiProfile:
    points: list[tuple[int, complex]]
    slope: float | None  # heuristic trend: slope of log|profile| vs log n

    @property
    def final(self) -> complex:
        return self.points[-1][1]


def chi_sum_profile(primes, samples, irrep: IrrepSpec, at=None, bound: int | None = None) -> ChiProfile:
    """(n, S(n) log(n) / n) with S(n) = sum_{p <= n} chi(x_p), at checkpoints n."""
    ps = np.asarray(primes, dtype=np.int64)
    if len(ps) and np.any(np.diff(ps) <= 0):
        raise ValueError("samples must be ordered by prime")
    chi = np.asarray(irrep(np.asarray(samples, dtype=float)), dtype=complex) if len(ps) else np.zeros(0)
    prefix = np.cumsum(chi)
    ns = at or profile_checkpoints(bound or (int(ps[-1]) if len(ps) else 100))
    points = []
    for n in ns:
        k = int(np.searchsorted(ps, n, side="right"))
        total = prefix[k - 1] if k else 0j
        points.append((int(n), complex(total * math.log(n) / n)))
    nonzero = [(n, v) for n, v in points if abs(v) > 0]
    slope = log_log_slope(*zip(*nonzero)) if len(nonzero) >= 2 else None
    return ChiProfile(points, slope)
