"""Uniform f for the path P_n between its ends, against q^(n+1) (1 - q)^n."""

import argparse
from math import comb

from bunkbed import Graph, build_bunkbed
from bunkbed.percolation import f_polynomial
from bunkbed.poly import univariate_text


def expected(n: int) -> list[int]:
    out = [0] * (2 * n + 2)
    for k in range(n + 1):
        out[n + 1 + k] = (-1) ** k * comb(n, k)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=5)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        f = f_polynomial(build_bunkbed(Graph.path(n)), 0, n)
        coeffs = f.diagonal()
        status = "ok" if coeffs == expected(n) else "MISMATCH"
        print(f"P_{n}: {len(f.terms):4d} terms, uniform f = {univariate_text(coeffs)}  [{status}]")


if __name__ == "__main__":
    main()
