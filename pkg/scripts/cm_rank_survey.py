"""Survey CM-type ranks over all groups of order <= 8, cross-checked against the full incidence matrix."""

import argparse
from collections import Counter
from dataclasses import dataclass

from satotate.galois_cm import cm_rank, cm_rank_oracle, enumerate_cm_types, small_groups


@dataclass
class Config:
    max_order: int = 8


def main(cfg: Config):
    total = mismatches = conjugated = 0
    for G in small_groups(cfg.max_order):
        ranks = Counter()
        for spec in enumerate_cm_types(G):
            res = cm_rank(spec)
            ranks[(spec.g, res.cm_rank)] += 1
            conjugated += res.conjugated
            mismatches += res.cm_rank != cm_rank_oracle(spec)
            total += 1
        summary = ", ".join(f"g={g} rank={r}: {n}" for (g, r), n in sorted(ranks.items()))
        print(f"{G.name:>10} (order {G.order}): {summary or 'no CM types'}")
    print(f"{total} CM types, {conjugated} evaluated through the conjugate type, {mismatches} disagreements")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", dest="max_order", type=int, default=8)
    main(Config(**vars(ap.parse_args())))
