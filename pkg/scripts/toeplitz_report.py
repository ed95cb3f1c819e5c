"""Symbol extrema, scale constant and truncation spectra of the Toeplitz covariance."""

import argparse

from jzlab.toeplitz import ToeplitzCovariance, certify_norm, min_eigenvalue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=64)
    args = ap.parse_args()
    cert = certify_norm()
    print(f"opnorm     {cert.opnorm:.12f}  at theta = {cert.argmax:.9f}")
    print(f"min symbol {cert.min_symbol:.12f}  at theta = {cert.argmin:.9f}")
    print(f"C          {cert.scale:.12f}")
    print(f"error bound {cert.error:.2e}")
    cov = ToeplitzCovariance(cert.scale)
    floor = cert.scale * cert.min_symbol
    for size in (1, 2, 4, 8, 16, 32, args.max_size):
        lam = min_eigenvalue(cov.truncation(1, size))
        print(f"size {size:>3}: min eig {lam:.10f}  (C * min symbol = {floor:.10f})")


if __name__ == "__main__":
    main()
