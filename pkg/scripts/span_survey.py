"""How often the builtin field collection spans ker dPhi_K at random points.

    python scripts/span_survey.py --cases 1,3 2,2 2,3 2,4 3,3 --count 50
"""

import argparse

import numpy as np

from sympfactor.phimap import random_point
from sympfactor.polyfield.span import builtin_collection, nonvanishing_ok, span_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", nargs="+", default=["1,3", "2,2", "2,3", "2,4"])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>2} {'K':>2} {'kernel':>6} {'fields':>6} {'dominated':>9} {'skipped':>7}")
    for case in args.cases:
        n, K = (int(s) for s in case.split(","))
        ok = skipped = 0
        kdim = nf = 0
        for _ in range(args.count):
            p = random_point(rng, n, K)
            if not nonvanishing_ok(n, K, p):
                skipped += 1
                continue
            rep = span_check(n, K, p, builtin_collection(n, K, p))
            kdim, nf = rep.kernel_dim, rep.n_fields
            ok += rep.dominated
        print(f"{n:>2} {K:>2} {kdim:>6} {nf:>6} {ok:>4}/{args.count - skipped:<4} {skipped:>7}")


if __name__ == "__main__":
    main()
