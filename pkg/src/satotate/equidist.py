"""Finite-sample diagnostics comparing a sequence of conjugacy classes (or
traces) with the Haar prediction of a candidate group."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .frobenius_data import TraceDatum
from .st_groups import (
    G1_GROUPS,
    GroupSpec,
    IrrepSpec,
    a2_moment,
    get_group,
    trace_density,
    trace_moment,
)

Z_THRESHOLD = 4.0
MAX_K = 12
MIN_SAMPLES = 30
CLASSIFY_MIN_SAMPLES = 1000
CLASSIFY_KS = (2, 4, 6)

CONSISTENT = "consistent"
INCONSISTENT = "inconsistent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class MomentRow:
    k: int
    empirical: float
    theoretical: float
    z: float

    def as_dict(self):
        return {"k": self.k, "empirical": self.empirical, "theoretical": self.theoretical, "z": self.z}


@dataclass
class DiagnosticReport:
    group: str
    n: int
    moments: list[MomentRow]
    discrepancy: float | None
    verdict: str
    char_sums: dict[str, complex] = field(default_factory=dict)

    def as_dict(self):
        return {
            "group": self.group,
            "n": self.n,
            "moments": [r.as_dict() for r in self.moments],
            "discrepancy": self.discrepancy,
            "verdict": self.verdict,
            "char_sums": {k: [v.real, v.imag] for k, v in self.char_sums.items()},
        }


def checkpoints(n: int) -> list[int]:
    """10, 100, ..., and n itself."""
    out = []
    c = 10
    while c < n:
        out.append(c)
        c *= 10
    out.append(n)
    return out


def char_sum_series(samples, irrep: IrrepSpec, group: GroupSpec | None = None, at=None):
    """Prefix means (1/n) sum_{i<=n} chi(x_i) at logarithmic checkpoints."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] == 0:
        raise ValueError("need at least one sample")
    if group is not None and irrep.param_dim not in (None, group.param_dim):
        raise ValueError(f"{irrep.label} is not evaluable on {group.name} parameters")
    values = np.asarray(irrep(samples), dtype=complex)
    prefix = np.cumsum(values)
    ns = at or checkpoints(len(values))
    return [(n, complex(prefix[n - 1] / n)) for n in ns]


def _moment_rows(values: np.ndarray, theory: Sequence[float], ks: Sequence[int]) -> list[MomentRow]:
    n = len(values)
    rows = []
    for k in ks:
        powk = values**k
        emp = float(powk.mean())
        sd = float(powk.std(ddof=1)) if n > 1 else 0.0
        diff = emp - theory[k]
        if sd > 0:
            z = diff * math.sqrt(n) / sd
        else:
            z = 0.0 if abs(diff) < 1e-12 else math.copysign(math.inf, diff)
        rows.append(MomentRow(k, emp, float(theory[k]), z))
    return rows


def compare_moments(traces, group: GroupSpec, k_max: int = 6, statistic: str = "a1") -> list[MomentRow]:
    """Empirical k-th moments of the traces (k = 1..k_max) against Haar moments.

    statistic "a2" compares the normalized second coefficient of a g=2 group instead.
    """
    if not 1 <= k_max <= MAX_K:
        raise ValueError(f"k_max must lie in [1, {MAX_K}]")
    values = np.asarray(traces, dtype=float)
    if statistic == "a1":
        theory = [trace_moment(group, k).value for k in range(k_max + 1)]
    elif statistic == "a2":
        theory = [a2_moment(group, k) for k in range(k_max + 1)]
    else:
        raise ValueError(f"unknown statistic {statistic!r}")
    return _moment_rows(values, theory, range(1, k_max + 1))


def cdf_discrepancy(traces, group: GroupSpec) -> float:
    """sup_z |F_emp(z) - F(z)|, exact for right-continuous F with atoms."""
    law = trace_density(group)
    x = np.sort(np.asarray(traces, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("need at least one sample")
    uniq, first = np.unique(x, return_index=True)
    below = first / n  # F_emp(z-)
    upto = np.append(first[1:], n) / n  # F_emp(z)
    right = np.abs(upto - law.cdf(uniq))
    left = np.abs(below - law.cdf_left(uniq))
    return float(min(1.0, max(right.max(), left.max())))


def dkw_threshold(n: int, alpha: float = 1e-4) -> float:
    """Dvoretzky-Kiefer-Wolfowitz radius: P(sup > eps) <= alpha for iid samples."""
    return math.sqrt(math.log(2 / alpha) / (2 * n))


def diagnose(
    traces,
    group: GroupSpec,
    k_max: int = 6,
    z_threshold: float = Z_THRESHOLD,
    samples=None,
    irreps: Sequence[IrrepSpec] = (),
) -> DiagnosticReport:
    """Moments, CDF discrepancy and (optionally) character means, with a verdict.

    Inconsistent when any |z| exceeds z_threshold or the discrepancy exceeds
    the DKW radius at level 1e-4; inconclusive below MIN_SAMPLES.
    """
    traces = np.asarray(traces, dtype=float)
    n = len(traces)
    rows = compare_moments(traces, group, k_max)
    disc = cdf_discrepancy(traces, group) if n else None
    sums = {}
    if samples is not None:
        for r in irreps:
            sums[r.label] = char_sum_series(samples, r, group, at=[len(samples)])[-1][1]
    if n < MIN_SAMPLES:
        verdict = INCONCLUSIVE
    elif any(abs(r.z) > z_threshold for r in rows) or disc > dkw_threshold(n):
        verdict = INCONSISTENT
    else:
        verdict = CONSISTENT
    return DiagnosticReport(group.name, n, rows, disc, verdict, sums)


@dataclass(frozen=True)
class HistRow:
    bin_left: float
    bin_right: float
    count: int
    empirical_density: float
    theoretical_density: float | None


def histogram(values, bins: int, lo: float, hi: float, group: GroupSpec | None = None) -> list[HistRow]:
    """Fixed-width histogram; the theoretical column is the law's mass per bin over the width."""
    if bins < 1 or not lo < hi:
        raise ValueError("need bins >= 1 and lo < hi")
    values = np.asarray(values, dtype=float)
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    n = len(values)
    widths = np.diff(edges)
    theo = None
    if group is not None:
        cdf = trace_density(group).cdf
        theo = np.diff(np.asarray(cdf(edges), dtype=float))
        # np.histogram closes the last bin on the right; include an atom at hi there
        theo[-1] += float(cdf(hi)) - float(trace_density(group).cdf_left(hi))
        theo = theo / widths
    rows = []
    for i in range(bins):
        emp = counts[i] / (n * widths[i]) if n else 0.0
        rows.append(
            HistRow(float(edges[i]), float(edges[i + 1]), int(counts[i]), float(emp),
                    None if theo is None else float(theo[i]))
        )
    return rows


def hybrid_filter(traces: Sequence[TraceDatum], n: int, residue: int) -> list[TraceDatum]:
    """Keep data with p = residue (mod n); n = 1 keeps everything."""
    if n < 1:
        raise ValueError("modulus must be positive")
    if n == 1:
        return list(traces)
    if math.gcd(residue, n) != 1:
        raise ValueError(f"gcd({residue}, {n}) != 1")
    return [d for d in traces if d.p % n == residue % n]


def classify_g1(
    reports: Mapping[str, Sequence[MomentRow]],
    z_threshold: float = Z_THRESHOLD,
    ks: Sequence[int] = CLASSIFY_KS,
) -> str:
    """The unique weight-1 group whose moments k in ks all pass, else 'inconclusive'."""
    passing = []
    for name in G1_GROUPS:
        rows = {r.k: r for r in reports[name]}
        if all(abs(rows[k].z) <= z_threshold for k in ks):
            passing.append(name)
    return passing[0] if len(passing) == 1 else INCONCLUSIVE


def classify_traces(traces, z_threshold: float = Z_THRESHOLD) -> tuple[str, dict[str, list[MomentRow]]]:
    traces = np.asarray(traces, dtype=float)
    k_max = max(CLASSIFY_KS)
    reports = {name: compare_moments(traces, get_group(name), k_max) for name in G1_GROUPS}
    if len(traces) < CLASSIFY_MIN_SAMPLES:
        return INCONCLUSIVE, reports
    return classify_g1(reports, z_threshold), reports
