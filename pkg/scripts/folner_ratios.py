"""Right translation ratios of F_n for a fixture set, next to the closed-form bound."""

import argparse

from jzlab import folner
from jzlab.monoid import JElement, parse_normal_form, tau_power, theta

FIXTURES = {
    "th[0]": theta(0),
    "th[2]": theta(2),
    "th[0]^2": JElement.from_map({0: 2}),
    "t": tau_power(1),
    "t^-1": tau_power(-1),
    "th[0] t": parse_normal_form("th[0] t"),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(f"{'n':>2} {'f':>8} {'set ratio':>10} {'preimage':>10} {'bound':>10} {'|F_n f|/|F_n|':>14}")
    for n in range(1, args.n_max + 1):
        for name, f in FIXTURES.items():
            rep = folner.right_report(n, f, workers=args.workers)
            bound = folner.right_ratio_lower_bound(n, f)
            print(f"{n:>2} {name:>8} {float(rep.ratio):>10.4f} {float(rep.preimage_ratio):>10.4f} "
                  f"{float(bound):>10.4f} {rep.image_size / rep.family_size:>14.4f}")


if __name__ == "__main__":
    main()
