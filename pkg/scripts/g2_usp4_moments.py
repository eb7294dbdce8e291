"""Moments of a1 and a2 for a genus-2 curve y^2 = f(x) against USp(4).

    python3 scripts/g2_usp4_moments.py --coeffs 1,1,0,0,0,1 --bound 2500

Coefficients are listed from the constant term up. The genus-2 scan costs
O(p^2) per prime, so bounds beyond a few thousand take minutes.
"""

import argparse
import time
from dataclasses import dataclass

import numpy as np

from satotate.equidist import compare_moments, diagnose
from satotate.finite_field import IntPoly
from satotate.frobenius_data import HyperCurveQ, g2_scan
from satotate.st_groups import get_group


@dataclass
class Config:
    coeffs: str = "1,1,0,0,0,1"
    bound: int = 2500
    k_max: int = 6


def main(cfg: Config):
    curve = HyperCurveQ(IntPoly(tuple(int(c) for c in cfg.coeffs.split(","))))
    start = time.perf_counter()
    factors = g2_scan(curve, cfg.bound)
    print(f"y^2 = {curve}: {len(factors)} good primes up to {cfg.bound} in {time.perf_counter() - start:.1f}s")
    usp4 = get_group("USp4")
    a1 = np.array([lf.a1 for lf in factors])
    a2 = np.array([lf.a2 for lf in factors])
    rep = diagnose(a1, usp4, cfg.k_max)
    for m in rep.moments:
        print(f"a1  k={m.k}: {m.empirical:8.4f} vs {m.theoretical:8.4f}  z={m.z:+.2f}")
    for m in compare_moments(a2, usp4, 4, statistic="a2"):
        print(f"a2  k={m.k}: {m.empirical:8.4f} vs {m.theoretical:8.4f}  z={m.z:+.2f}")
    print(f"a1 discrepancy {rep.discrepancy:.4f} -> {rep.verdict}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", dest=name, type=type(default), default=default)
    main(Config(**vars(ap.parse_args())))
