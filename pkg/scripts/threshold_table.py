"""Certified diagonal thresholds q* for every connected pair on small graphs."""

import argparse
from fractions import Fraction

from bunkbed import build_bunkbed
from bunkbed.epsilon import uniform_threshold
from bunkbed.graph import same_component
from bunkbed.percolation import f_diagonal
from bunkbed.sweep import label, rooted_pairs, small_graphs


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=4)
    ap.add_argument("--precision", type=Fraction, default=Fraction(1, 1024))
    args = ap.parse_args()
    rows = []
    for g in small_graphs(args.max_vertices, min_vertices=2):
        bb = build_bunkbed(g)
        for u, v in rooted_pairs(g):
            if not same_component(g, g.vertices, u, v):
                continue
            est = uniform_threshold(bb, u, v, args.precision, diagonal=f_diagonal(bb, u, v))
            rows.append((est.uniform_threshold, label(g), u, v, est.certificate["diagonal"]))
    rows.sort()
    for q_star, name, u, v, diag in rows:
        print(f"q* >= {str(q_star):>10}  {name}  u={u} v={v}  f = {diag}")


if __name__ == "__main__":
    main()
