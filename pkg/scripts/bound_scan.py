"""Factor counts and residuals of random symplectic matrices against the bound.

    python scripts/bound_scan.py --n 1 2 3 4 --count 200 --seed 0
"""

import argparse

import numpy as np

from sympfactor.elemsym import random_word, reconstruct
from sympfactor.factorizer import factor_bound, factorize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 3, 4])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-length", type=int, default=8)
    ap.add_argument("--scale", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>2} {'bound':>5} {'max':>4} {'mean':>6} {'max residual':>12} {'bits':>10}")
    for n in args.n:
        counts, res, bits = [], [], set()
        for _ in range(args.count):
            w = random_word(rng, n, int(rng.integers(1, args.max_length + 1)), args.scale)
            r = factorize(reconstruct(w).M)
            counts.append(r.factor_count)
            res.append(r.reconstruction_residual)
            bits.add(r.precision)
        print(f"{n:>2} {factor_bound(n):>5} {max(counts):>4} {np.mean(counts):>6.2f} "
              f"{max(res):>12.2e} {','.join(str(b) for b in sorted(bits, key=str)):>10}")


if __name__ == "__main__":
    main()
