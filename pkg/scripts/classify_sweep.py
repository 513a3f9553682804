"""Closed-form singular-set membership against the Jacobian rank over random points.

Generic points are drawn in the unit polydisk; crafted points lie outside W_K
with a W_K block of prescribed rank, so they probe both sides of S_K.

    python scripts/classify_sweep.py --n 2 3 --K 3 4 5 6 --count 300
"""

import argparse
import itertools

import numpy as np

from sympfactor.phimap import classify, crafted_wkc_point, random_point


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--K", type=int, nargs="+", default=[3, 4, 5, 6])
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>2} {'K':>2} {'points':>6} {'in_WK':>6} {'in_SK':>6} {'disagree':>8}")
    for n, K in itertools.product(args.n, args.K):
        tally = dict(points=0, wk=0, sk=0, bad=0)
        for i in range(args.count):
            p = random_point(rng, n, K) if i % 2 else crafted_wkc_point(rng, n, K, lo=-1, hi=1)
            rep = classify(p, strict=False)
            tally["points"] += 1
            tally["wk"] += rep.in_WK
            tally["sk"] += rep.in_SK
            tally["bad"] += not rep.consistent
        print(f"{n:>2} {K:>2} {tally['points']:>6} {tally['wk']:>6} {tally['sk']:>6} {tally['bad']:>8}")


if __name__ == "__main__":
    main()
