"""Run the three cut claims and the decomposition over every small graph.

Failures are split by whether G has a component avoiding u and v; each such
failure is re-run on the component of u.
"""

import argparse
import json
import time
from collections import Counter

from bunkbed import build_bunkbed
from bunkbed.claims import decompose_f, verify_claim1, verify_claim2, verify_claim3
from bunkbed.graph import components_within, has_stray_component, induced_subgraph
from bunkbed.sweep import label, ordered_pairs, small_graphs


def check(g, u, v, r_max):
    bb = build_bunkbed(g)
    out = {
        "claim1": verify_claim1(bb, u, v, detail=False).passed,
        "claim2": verify_claim2(bb, u, v, detail=False).passed,
    }
    for r in range(2, min(r_max, 4 ** (g.vertex_count - 1)) + 1):
        out[f"claim3_r{r}"] = verify_claim3(bb, u, v, r, detail=False).passed
    out["decomposition"] = decompose_f(bb, u, v).passed
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=4)
    ap.add_argument("--r-max", type=int, default=2)
    ap.add_argument("--out", help="write failures as JSON here")
    args = ap.parse_args()

    t0 = time.perf_counter()
    tally, failures, instances = Counter(), [], 0
    for g in small_graphs(args.max_vertices):
        for u, v in ordered_pairs(g):
            instances += 1
            bad = [name for name, ok in check(g, u, v, args.r_max).items() if not ok]
            if not bad:
                continue
            stray = has_stray_component(g, u, v)
            record = {"graph": label(g), "u": u, "v": v, "failed": bad, "stray_component": stray}
            if stray:
                home = next(b for b in components_within(g, g.vertices) if u in b)
                h, relabel = induced_subgraph(g, home)
                again = check(h, relabel[u], relabel[v], args.r_max)
                record["passes_on_component"] = all(again[name] for name in bad if name in again)
            failures.append(record)
            tally.update(bad)
    print(f"{instances} instances, {len(failures)} with a failure ({time.perf_counter() - t0:.1f}s)")
    for name, count in sorted(tally.items()):
        print(f"  {name}: {count}")
    stray = [f for f in failures if f["stray_component"]]
    print(f"  with a component avoiding u, v: {len(stray)};"
          f" passing on the component of u: {sum(f.get('passes_on_component', False) for f in stray)}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(failures, fh, indent=2)


if __name__ == "__main__":
    main()
