"""Tail of the image-gap law and the averaged pair value for n = 1..N.

Prints a CSV table: n, P(gap > 1), published tail estimate, n * P(gap > 1),
E[1/g^2] and its certified upper bound.
"""

import argparse
import csv
import sys

from jzlab import spread


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=40)
    args = ap.parse_args()
    w = csv.writer(sys.stdout)
    w.writerow(["n", "tail", "published_tail", "n_tail", "pair_profile", "pair_profile_bound"])
    for n in range(1, args.n_max + 1):
        tail = spread.gap_profile(n).tail()
        prof = spread.averaged_pair_value(n).rational_profile
        w.writerow([n, f"{float(tail):.6f}", f"{float(spread.published_tail_bound(n)):.6f}",
                    f"{float(n * tail):.4f}", f"{float(prof):.6f}",
                    f"{float(spread.pair_profile_upper_bound(n)):.6f}"])


if __name__ == "__main__":
    main()
