"""Command-line surface.

Subcommands: factor, invert, moments, mutate, transport, gbd, flow,
dump-network, verify.  Structured data is JSON (rationals as "num/den"
strings, floats as 17-significant-digit decimals); trajectories are CSV.
Exit codes: 0 success, 2 non-generic input, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .cluster import ClusterSeed, mutate, seed_init, transport
from .coxeter import CoxeterPair, FactorParams, pair_from_eps, validate_eps
from .errors import ArgumentError, NonGeneric, SingularMatrix
from .gbd import GBDRequest, sigma
from .linalg import RatMatrix, rat, rat_str
from .network import build_disk_network
from .toda import FlowState, hamiltonian_Fk, moment_flow, rk4_flow
from .verify import SUITES, run_suite
from .weyl import HankelCache, MomentSeq, moments_from_X, weyl_from_X
from .coxeter import build_X, params_from_X


@dataclass
class Config:
    seed: int = 0
    trials: Optional[int] = None
    dt: float = 1e-3
    tol_flow: float = 1e-6
    tol_conservation: float = 1e-8
    tol_residual: float = 1e-5

    def __post_init__(self):
        if min(self.tol_flow, self.tol_conservation, self.tol_residual) <= 0:
            raise ArgumentError("tolerances must be positive")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt_float(v: float) -> str:
    return f"{v:.17g}"


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_pair(path: str) -> CoxeterPair:
    return CoxeterPair.from_json(_load_json(path))


def _load_params(path: str) -> FactorParams:
    return FactorParams.from_json(_load_json(path))


def _load_matrix(path: str) -> RatMatrix:
    obj = _load_json(path)
    if isinstance(obj, dict):
        obj = obj.get("X", obj.get("rows"))
    return RatMatrix.from_rows([[rat(v) for v in row] for row in obj])


def _matrix_json(X: RatMatrix) -> list:
    return [[rat_str(X[i, j]) for j in range(X.cols)] for i in range(X.rows)]


def _parse_eps(text: str):
    return validate_eps(tuple(int(t) for t in text.replace(" ", "").split(",")))


def _load_moments(path: str) -> MomentSeq:
    obj = _load_json(path)
    n = int(obj["n"])
    H0 = rat(obj.get("H0", 1))
    return MomentSeq.from_values(n, [rat(v) for v in obj["h"]], H0=H0)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_factor(args) -> int:
    pair = _load_pair(args.pair)
    if args.invert:
        if not args.matrix:
            raise UsageError("--invert requires --matrix")
        X = _load_matrix(args.matrix)
        p = params_from_X(pair, X)
        _emit(p.to_json())
        return 0
    if not args.params:
        raise UsageError("factor requires --params (or --invert --matrix)")
    p = _load_params(args.params)
    X = build_X(pair, p)
    _emit({"X": _matrix_json(X), "params": p.to_json()})
    return 0


def cmd_moments(args) -> int:
    pair = _load_pair(args.pair)
    p = _load_params(args.params)
    X = build_X(pair, p)
    lo = args.lo if args.lo is not None else 0
    hi = args.hi if args.hi is not None else 2 * pair.n - 1
    ms = moments_from_X(X)
    w = weyl_from_X(X)
    _emit({
        "n": pair.n,
        "lo": lo,
        "hi": hi,
        "h": [rat_str(ms.h(j)) for j in range(lo, hi + 1)],
        "weyl": w.to_json(),
    })
    return 0


def cmd_mutate(args) -> int:
    seed = ClusterSeed.from_json(_load_json(args.seed))
    for k in (int(t) for t in args.directions.replace(" ", "").split(",") if t):
        seed = mutate(seed, k)
    _emit(seed.to_json())
    return 0


def cmd_transport(args) -> int:
    e1 = _parse_eps(args.from_eps)
    e2 = _parse_eps(args.to_eps)
    ms = _load_moments(args.moments)
    seed = transport(seed_init(e1, HankelCache(ms)), e2)
    _emit(seed.to_json())
    return 0


def cmd_gbd(args) -> int:
    e1 = _parse_eps(args.from_eps)
    e2 = _parse_eps(args.to_eps)
    p = _load_params(args.params)
    req = GBDRequest(e1, e2, p)
    if args.route != "all":
        _emit(sigma(req, args.route).to_json())
        return 0
    outs = {r: sigma(req, r) for r in ("cluster", "table", "minors")}
    ref = outs["cluster"]
    agree = all(o.d == ref.d and o.c == ref.c for o in outs.values())
    report = {"agree": agree, "routes": {r: o.to_json() for r, o in outs.items()}}
    if not agree:
        report["diff"] = {
            r: {"d": [rat_str(a - b) for a, b in zip(o.d, ref.d)],
                "c": [rat_str(a - b) for a, b in zip(o.c, ref.c)]}
            for r, o in outs.items() if r != "cluster"
        }
    _emit(report)
    return 0


def cmd_flow(args) -> int:
    pair = _load_pair(args.pair)
    p = _load_params(args.params)
    n = pair.n
    eps = pair.comb.eps
    state0 = FlowState.from_params(p, eps)
    if args.solver == "rk4":
        traj = rk4_flow(pair, state0, args.k, args.t_end, args.dt)
    else:
        steps = max(0, round(args.t_end / args.dt))
        times = [i * args.dt for i in range(steps + 1)]
        if not times or times[-1] < args.t_end:
            times.append(args.t_end)
        traj = [moment_flow(pair, p, args.k, t, eps=eps) for t in times]
    import numpy as np

    from .toda import build_X_float

    rows = []
    for st in traj:
        X = build_X_float(pair, st.c, st.d)
        fs = [hamiltonian_Fk(pair, st, j) for j in range(1, n)]
        rows.append([st.t, *st.c, *st.d, *fs, float(np.linalg.det(X))])
    header = (["t"] + [f"c{i}" for i in range(1, n)] + [f"d{i}" for i in range(1, n + 1)]
              + [f"F{i}" for i in range(1, n)] + ["detX"])
    if args.emit == "json":
        _emit({"columns": header,
               "rows": [[_fmt_float(v) for v in row] for row in rows]})
        return 0
    out = io.StringIO()
    wr = csv.writer(out)
    wr.writerow(header)
    for row in rows:
        wr.writerow([_fmt_float(v) for v in row])
    sys.stdout.write(out.getvalue())
    return 0


def cmd_dump_network(args) -> int:
    pair = _load_pair(args.pair)
    p = _load_params(args.params)
    _emit(build_disk_network(pair, p).to_json())
    return 0


def cmd_verify(args) -> int:
    # explicit --seed wins; otherwise COXTODA_SEED overrides the default
    if args.seed is not None:
        seed = args.seed
    else:
        seed = int(os.environ.get("COXTODA_SEED", "0"))
    cfg = Config(seed=seed)
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from "
                         + ", ".join(sorted(SUITES)) + ", all")
    report = run_suite(args.suite, n=args.n, trials=args.trials, seed=cfg.seed)
    _emit(report)
    return 0 if report["failures"] == 0 else 1


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    ap = _Parser(prog="coxtoda", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", help="build X from parameters, or invert")
    f.add_argument("--pair", required=True)
    f.add_argument("--params")
    f.add_argument("--matrix")
    f.add_argument("--invert", action="store_true")
    f.set_defaults(fn=cmd_factor)

    inv = sub.add_parser("invert", help="recover parameters from a matrix")
    inv.add_argument("--pair", required=True)
    inv.add_argument("--matrix", required=True)
    inv.set_defaults(fn=cmd_factor, invert=True, params=None)

    m = sub.add_parser("moments", help="moments and Weyl function of X")
    m.add_argument("--pair", required=True)
    m.add_argument("--params", required=True)
    m.add_argument("--lo", type=int)
    m.add_argument("--hi", type=int)
    m.set_defaults(fn=cmd_moments)

    mu = sub.add_parser("mutate", help="apply seed mutations")
    mu.add_argument("--seed", required=True, help="seed JSON file")
    mu.add_argument("--directions", required=True, help="comma-separated 1-based")
    mu.set_defaults(fn=cmd_mutate)

    tr = sub.add_parser("transport", help="move a seed between charts")
    tr.add_argument("--from-eps", required=True)
    tr.add_argument("--to-eps", required=True)
    tr.add_argument("--moments", required=True, help="moment JSON file")
    tr.set_defaults(fn=cmd_transport)

    g = sub.add_parser("gbd", help="chart-changing parameter transformation")
    g.add_argument("--from-eps", required=True)
    g.add_argument("--to-eps", required=True)
    g.add_argument("--params", required=True)
    g.add_argument("--route", choices=["cluster", "table", "minors", "all"],
                   default="cluster")
    g.set_defaults(fn=cmd_gbd)

    fl = sub.add_parser("flow", help="integrate the flow, emit a trajectory")
    fl.add_argument("--pair", required=True)
    fl.add_argument("--params", required=True)
    fl.add_argument("--k", type=int, default=1)
    fl.add_argument("--t-end", type=float, default=1.0, dest="t_end")
    fl.add_argument("--dt", type=float, default=1e-3)
    fl.add_argument("--solver", choices=["rk4", "moment"], default="rk4")
    fl.add_argument("--emit", choices=["csv", "json"], default="csv")
    fl.set_defaults(fn=cmd_flow)

    dn = sub.add_parser("dump-network", help="emit the planar network as JSON")
    dn.add_argument("--pair", required=True)
    dn.add_argument("--params", required=True)
    dn.set_defaults(fn=cmd_dump_network)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True)
    v.add_argument("--n", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int)
    v.set_defaults(fn=cmd_verify)

    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NonGeneric, SingularMatrix) as exc:
        print(f"non-generic input: {exc}", file=sys.stderr)
        return 2
    except (ArgumentError, ValueError, KeyError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
