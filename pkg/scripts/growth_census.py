"""Ball sizes in the Cayley graph of the monoid and the A_n census."""

import argparse
from math import comb

from jzlab import folner


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=12)
    ap.add_argument("--census-max", type=int, default=4)
    args = ap.parse_args()
    total = 0
    for r, s in enumerate(folner.growth_spheres(args.radius, cap=max(args.radius, 12))):
        total += s
        print(f"radius {r:>2}: sphere {s:>6}  ball {total:>7}")
    for n in range(1, args.census_max + 1):
        c = folner.an_census(n)
        print(f"A_{n}: {c.count} elements (binom({3 * n},{n}) = {comb(3 * n, n)}), "
              f"distinct={c.all_distinct}, word length {c.word_length} vs published {c.published_word_length}")


if __name__ == "__main__":
    main()
