"""Command-line entry point: ``bunkbed <command> [flags]``.

Every command prints one JSON report (``"schema": 1``) to stdout or ``--out``
and a one-line summary to stderr. The exit code is 0 iff the report's
top-level ``"pass"`` is true.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from bunkbed.bunkbed import BunkbedGraph, SymmetricAssignment, build_bunkbed, minus, plus, uniform_assignment
from bunkbed.claims import decompose_f, verify_claim1, verify_claim2, verify_claim3
from bunkbed.cuts import Side, boundary_mask, enumerate_family, is_in_T
from bunkbed.epsilon import sampled_bound, uniform_threshold
from bunkbed.graph import Graph, GraphError, has_stray_component, parse_edge_list
from bunkbed.percolation import (
    DEFAULT_LATTICE_EDGE_CAP,
    SizeGuardError,
    f_polynomial,
    inclusion_exclusion,
    monte_carlo,
    nonconnection_polynomial,
    oracle_probability,
)
from bunkbed.poly import MonomialCodec, Polynomial, univariate_text
from bunkbed.sweep import label, ordered_pairs, small_graphs

SCHEMA = 1
COMMANDS = ("bunkbed", "cuts", "poly", "verify", "epsilon", "simulate", "oracle-compare", "sweep")
DIAGONAL = "diagonal"


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    u: int | None = None
    v: int | None = None
    r_max: int | None = None
    trials: int | None = None
    seed: int = 0
    precision: Fraction = Fraction(1, 1024)
    uniform: str | None = None
    epsilon: Fraction = Fraction(1, 100)
    max_vertices: int | None = None
    threads: int = 1
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")


def _load_graph(cfg: RunConfig) -> Graph:
    if cfg.graph is None:
        raise GraphError("--graph is required")
    text = sys.stdin.read() if cfg.graph == "-" else Path(cfg.graph).read_text()
    g = parse_edge_list(text)
    cap = 6 if cfg.max_vertices is None else cfg.max_vertices
    if g.vertex_count > cap:
        raise SizeGuardError(f"graph has {g.vertex_count} vertices; --max-vertices is {cap}")
    return g


def _endpoints(cfg: RunConfig, g: Graph) -> tuple[int, int]:
    if cfg.u is None or cfg.v is None:
        raise GraphError("--u and --v are required")
    g.check_vertex(cfg.u)
    g.check_vertex(cfg.v)
    if cfg.u == cfg.v:
        raise GraphError("u and v must be distinct")
    return cfg.u, cfg.v


def _cmd_bunkbed(cfg):
    bb = build_bunkbed(_load_graph(cfg))
    report = {"bunkbed": bb.to_json()}
    if cfg.uniform not in (None, DIAGONAL):
        report["assignment"] = uniform_assignment(bb, Fraction(cfg.uniform)).to_json()
    return True, report


def _cmd_cuts(cfg):
    g = _load_graph(cfg)
    bb = build_bunkbed(g)
    u, v = _endpoints(cfg, g)
    codec = MonomialCodec(bb)
    report = {}
    for side in (Side.MINUS_TARGET, Side.PLUS_TARGET):
        fam = enumerate_family(bb, u, v, side)
        report[f"S_{side.value}"] = [
            {
                "cut": c.names(),
                "in_T": is_in_T(bb, u, v, c),
                "support": sorted(x for x in range(bb.n) if c.support_mask >> x & 1),
                "monomial": str(codec.monomial(codec.key_of_edges(boundary_mask(bb, c.mask)))),
            }
            for c in fam
        ]
    return True, report


def _evaluations(poly: Polynomial, bb: BunkbedGraph, values) -> list[dict]:
    return [{"q": str(q), "value": str(poly.evaluate(uniform_assignment(bb, q)))} for q in values]


def _cmd_poly(cfg):
    g = _load_graph(cfg)
    bb = build_bunkbed(g)
    u, v = _endpoints(cfg, g)
    truncated = False
    if cfg.r_max is not None:
        exp_plus = inclusion_exclusion(bb, u, v, Side.PLUS_TARGET, cfg.r_max)
        exp_minus = inclusion_exclusion(bb, u, v, Side.MINUS_TARGET, cfg.r_max)
        truncated = exp_plus.truncated or exp_minus.truncated
        f = exp_plus.total() - exp_minus.total()
        nonconn = {"plus": exp_plus.total(), "minus": exp_minus.total()}
    else:
        f = f_polynomial(bb, u, v)
        nonconn = {s.value: nonconnection_polynomial(bb, u, v, s) for s in Side}
    report = {
        "polynomial": f.to_text(),
        "nonconnection": {k: p.to_text() for k, p in nonconn.items()},
        "terms": len(f),
        "truncated": truncated,
        "evaluations": [],
    }
    if cfg.uniform is not None:
        report["uniform"] = univariate_text(f.diagonal())
        if cfg.uniform != DIAGONAL:
            report["evaluations"] = _evaluations(f, bb, [Fraction(cfg.uniform)])
    return True, report


def _verify_instance(bb: BunkbedGraph, u: int, v: int, r_max: int, detail: bool) -> dict:
    reports = {
        "claim1": verify_claim1(bb, u, v, detail=detail),
        "claim2": verify_claim2(bb, u, v, detail=detail),
    }
    family = 1 << (2 * bb.n - 2)
    for r in range(2, min(r_max, family) + 1):
        reports[f"claim3_r{r}"] = verify_claim3(bb, u, v, r, detail=detail)
    out = {name: rep.to_json() for name, rep in reports.items()}
    if len(bb.edges) <= DEFAULT_LATTICE_EDGE_CAP:
        dec = decompose_f(bb, u, v)
        out["decomposition"] = dec.to_json() if detail else {
            "pass": dec.passed, "leaders": len(dec.leaders), "residual": dec.residual.to_text(),
        }
    else:
        out["decomposition"] = {"pass": True, "skipped": "bunkbed graph exceeds the lattice edge cap"}
    return out


def _cmd_verify(cfg):
    g = _load_graph(cfg)
    bb = build_bunkbed(g)
    u, v = _endpoints(cfg, g)
    results = _verify_instance(bb, u, v, cfg.r_max or 2, detail=True)
    return all(r["pass"] for r in results.values()), {"graph": label(g), "u": u, "v": v, "results": results}


def _cmd_epsilon(cfg):
    g = _load_graph(cfg)
    bb = build_bunkbed(g)
    u, v = _endpoints(cfg, g)
    diag = uniform_threshold(bb, u, v, cfg.precision)
    sampled = sampled_bound(bb, u, v, cfg.epsilon, 100 if cfg.trials is None else cfg.trials, cfg.seed)
    report = {"uniform": diag.to_json(), "sampled": sampled.to_json()}
    return diag.passed and sampled.passed, report


def _cmd_simulate(cfg):
    g = _load_graph(cfg)
    bb = build_bunkbed(g)
    u, v = _endpoints(cfg, g)
    q = Fraction(1, 2) if cfg.uniform in (None, DIAGONAL) else Fraction(cfg.uniform)
    a = uniform_assignment(bb, q)
    samples = 100_000 if cfg.trials is None else cfg.trials
    report = {"q": str(q)}
    for name, t in (("u-v-", minus(v)), ("u-v+", plus(v))):
        report[name] = monte_carlo(bb, a, minus(u), t, samples, cfg.seed).to_json()
    return True, report


def _random_assignment(bb: BunkbedGraph, rng: np.random.Generator) -> SymmetricAssignment:
    return SymmetricAssignment({
        var: Fraction(int(rng.integers(0, 17)), 16) for var in bb.variables
    })


def _cmd_oracle_compare(cfg):
    g = _load_graph(cfg)
    bb = build_bunkbed(g)
    u, v = _endpoints(cfg, g)
    polys = {s: nonconnection_polynomial(bb, u, v, s) for s in Side}
    f = polys[Side.PLUS_TARGET] - polys[Side.MINUS_TARGET]
    rng = np.random.default_rng(cfg.seed)
    rows = []
    ok = True
    for _ in range(10 if cfg.trials is None else cfg.trials):
        a = _random_assignment(bb, rng)
        row = {"assignment": a.to_json()["q"]}
        oracle = {}
        for side, target in ((Side.MINUS_TARGET, minus(v)), (Side.PLUS_TARGET, plus(v))):
            exact = oracle_probability(bb, a, minus(u), target)
            oracle[side] = exact
            value = polys[side].evaluate(a)
            row[side.value] = {"polynomial": str(value), "1-oracle": str(1 - exact), "equal": value == 1 - exact}
            ok &= value == 1 - exact
        f_val = f.evaluate(a)
        f_oracle = oracle[Side.MINUS_TARGET] - oracle[Side.PLUS_TARGET]
        row["f"] = {"polynomial": str(f_val), "oracle": str(f_oracle), "equal": f_val == f_oracle}
        ok &= f_val == f_oracle
        rows.append(row)
    return ok, {"comparisons": rows}


def _cmd_sweep(cfg):
    cap = 4 if cfg.max_vertices is None else cfg.max_vertices
    r_max = cfg.r_max or 2
    failures = []
    instances = 0
    for g in small_graphs(cap):
        bb = build_bunkbed(g)
        for u, v in ordered_pairs(g):
            instances += 1
            results = _verify_instance(bb, u, v, r_max, detail=False)
            bad = [name for name, r in results.items() if not r["pass"]]
            if bad:
                failures.append({"graph": label(g), "u": u, "v": v, "failed": bad,
                                 "stray_component": has_stray_component(g, u, v),
                                 "results": {k: results[k] for k in bad}})
    return not failures, {
        "max_vertices": cap, "r_max": r_max, "instances": instances,
        "failures_with_stray_component": sum(f["stray_component"] for f in failures),
        "failures": failures,
    }


HANDLERS = {
    "bunkbed": _cmd_bunkbed,
    "cuts": _cmd_cuts,
    "poly": _cmd_poly,
    "verify": _cmd_verify,
    "epsilon": _cmd_epsilon,
    "simulate": _cmd_simulate,
    "oracle-compare": _cmd_oracle_compare,
    "sweep": _cmd_sweep,
}


def run(cfg: RunConfig) -> tuple[int, dict]:
    try:
        passed, body = HANDLERS[cfg.command](cfg)
        report = {"schema": SCHEMA, "command": cfg.command, "pass": bool(passed), **body}
    except (GraphError, SizeGuardError, ValueError, OSError) as exc:
        report = {
            "schema": SCHEMA, "command": cfg.command, "pass": False,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
    if "error" in report:
        return 2, report
    return (0 if report["pass"] else 1), report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bunkbed", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--graph", help="edge-list file ('-' for stdin)")
    p.add_argument("--u", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--r-max", type=int, help="largest collection size for claim 3 / truncated expansion")
    p.add_argument("--trials", type=int, help="random trials or Monte Carlo samples")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=Fraction, default=Fraction(1, 1024))
    p.add_argument("--uniform", nargs="?", const=DIAGONAL,
                   help="uniform closure probability q; bare flag prints the diagonal polynomial")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1, 100))
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
    p.add_argument("--out")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    code, report = run(cfg)
    text = json.dumps(report, indent=2) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if "error" in report:
        summary = f"{cfg.command}: error: {report['error']['message']}"
    else:
        summary = f"{cfg.command}: {'pass' if report['pass'] else 'FAIL'}"
        if "polynomial" in report:
            summary += f" f = {report.get('uniform', report['polynomial'])}"
    print(summary, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
