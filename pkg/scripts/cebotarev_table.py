"""Prime densities by residue class mod n and by factorization pattern of x^3 - 2."""

import argparse
from dataclasses import dataclass

from satotate.finite_field import IntPoly
from satotate.galois_cm import cyclotomic_densities, parse_expected, pattern_densities


@dataclass
class Config:
    moduli: str = "3,4,5,8,12"
    bound: int = 10**6
    pattern_bound: int = 10**5


def show(rep):
    print(f"{rep.descriptor} up to {rep.bound}: {rep.total} primes, max deviation {rep.max_deviation():.4f}")
    for label, count, emp, th in zip(rep.labels, rep.counts, rep.empirical, rep.theoretical):
        print(f"  {label:>8} {count:8d}  {emp:.4f}  (expected {th:.4f})")


def main(cfg: Config):
    for n in (int(m) for m in cfg.moduli.split(",")):
        show(cyclotomic_densities(n, cfg.bound))
    expected = parse_expected("1,1,1:1/6;1,2:1/2;3:1/3")
    show(pattern_densities(IntPoly((-2, 0, 0, 1)), cfg.pattern_bound, expected))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(Config()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", dest=name, type=type(default), default=default)
    main(Config(**vars(ap.parse_args())))
