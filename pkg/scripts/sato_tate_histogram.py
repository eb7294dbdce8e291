"""Text histogram of normalized a_p for an elliptic curve against a catalog trace law.

    python3 scripts/sato_tate_histogram.py --a 1 --b 1 --bound 100000 --group SU2
"""

import argparse
from dataclasses import dataclass

import numpy as np

from satotate.equidist import diagnose, histogram
from satotate.frobenius_data import EllipticCurveQ, ec_scan
from satotate.st_groups import get_group


@dataclass
class Config:
    a: int = 1
    b: int = 1
    bound: int = 10**5
    group: str = "SU2"
    bins: int = 20
    width: int = 50


def main(cfg: Config):
    scan = ec_scan(EllipticCurveQ(cfg.a, cfg.b), cfg.bound)
    g = get_group(cfg.group)
    rows = histogram(scan.normalized, cfg.bins, -2.0, 2.0, g)
    top = max(max(r.empirical_density, r.theoretical_density) for r in rows)
    print(f"y^2 = x^3 + {cfg.a}x + {cfg.b}, {len(scan.normalized)} primes up to {cfg.bound}, skipped {scan.skipped}")
    for r in rows:
        bar = "#" * int(round(cfg.width * r.empirical_density / top))
        mark = int(round(cfg.width * r.theoretical_density / top))
        line = bar.ljust(cfg.width + 1)
        line = line[:mark] + "|" + line[mark + 1:]
        print(f"[{r.bin_left:+.2f},{r.bin_right:+.2f}) {line} {r.count}")
    rep = diagnose(scan.normalized, g)
    print(f"zero fraction {np.mean(scan.normalized == 0):.4f}")
    print("moments:", ", ".join(f"k={m.k} {m.empirical:.3f}/{m.theoretical:.3f} (z={m.z:+.2f})" for m in rep.moments))
    print(f"discrepancy {rep.discrepancy:.4f} -> {rep.verdict} with {g.name}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name}", type=type(default), default=default)
    main(Config(**vars(ap.parse_args())))
