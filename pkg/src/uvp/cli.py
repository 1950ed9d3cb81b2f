"""Command line front end: solve, bench, estimate-eps, gen.

Exit codes: 0 on success, 2 on validation problems (bad arguments, bad
input data), 1 on I/O failures. All output files are written with LF line
endings and repr() floats so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analysis import epsilon_pairwise, epsilon_percentiles, mean_rank
from .baselines import hyperband, random_search, successive_halving
from .core import BudgetLedger, InvalidParams, SearchOutcome, UvpError, ValueOracle
from .instances import (
    LANDSCAPE_KINDS,
    HardInstanceSpec,
    LandscapeOracle,
    TabularBenchmark,
    gen_hard,
    landscape,
    landscape_eval,
    load_tabular,
    mesh_grid,
    sample_uniform,
    save_tabular,
)
from .solvers import PREDICTORS, SolverParams, ada_cent, e_ada_cent, e_full_cent, full_cent

ALGORITHMS = (
    "full-cent",
    "e-full-cent",
    "ada-cent",
    "e-ada-cent",
    "random",
    "sha",
    "hyperband",
)

_CLUSTER_SOLVERS = {
    "full-cent": full_cent,
    "e-full-cent": e_full_cent,
    "ada-cent": ada_cent,
    "e-ada-cent": e_ada_cent,
}


@dataclass
class Knobs:
    """Per-run algorithm settings collected from the command line."""

    p: int = 25
    epsilon: float = 0.2
    delta: float = 0.1
    theta: float = 0.3
    predictor: str = "two-point"
    eta: int = 3
    iterations: int = 6
    seed: int = 0


def run_algorithm(
    name: str,
    X,
    oracle: ValueOracle,
    budget: int,
    horizon: int,
    knobs: Knobs,
) -> SearchOutcome:
    """Run one algorithm against a fresh ledger and return its outcome."""
    ledger = BudgetLedger(budget)
    if name in _CLUSTER_SOLVERS:
        params = SolverParams(
            budget=budget,
            horizon=horizon,
            p=knobs.p,
            epsilon=knobs.epsilon,
            delta=knobs.delta,
            theta=knobs.theta,
            predictor=knobs.predictor,
        )
        return _CLUSTER_SOLVERS[name](params, X, oracle, ledger)
    if name == "random":
        return random_search(budget, horizon, X, knobs.seed, oracle, ledger)
    if name == "sha":
        return successive_halving(budget, horizon, X, knobs.eta, knobs.seed, oracle, ledger)
    if name == "hyperband":
        return hyperband(
            budget, horizon, X, knobs.eta, knobs.iterations, knobs.seed, oracle, ledger
        )
    raise InvalidParams(f"unknown algorithm {name!r}")


# ---------------------------------------------------------------------------
# shared helpers


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _fmt(v: float) -> str:
    return repr(float(v))


def _knobs_from(args: argparse.Namespace) -> Knobs:
    return Knobs(
        p=args.p,
        epsilon=args.epsilon,
        delta=args.delta,
        theta=args.theta,
        predictor=args.predictor,
        eta=args.eta,
        iterations=args.iterations,
        seed=args.seed,
    )


def _materialize_landscape(
    kind: str, configs, horizon: int, landscape_seed: int
) -> TabularBenchmark:
    """Tabulate a landscape over fixed configurations (values repeat per budget)."""
    spec = landscape(kind, landscape_seed)
    col = np.asarray([landscape_eval(spec, c.coords) for c in configs])
    curves = np.repeat(col[:, None], horizon, axis=1)
    return TabularBenchmark(configs=list(configs), curves=curves)


def _add_knob_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", type=int, default=25, help="fresh centers per adaptive round")
    sub.add_argument(
        "--epsilon", type=float, default=0.2, help="smoothness level for value-aware selection"
    )
    sub.add_argument("--delta", type=float, default=0.1, help="exploration fraction of the horizon")
    sub.add_argument("--theta", type=float, default=0.3, help="tail fraction for the tail-fit forecast")
    sub.add_argument("--predictor", choices=PREDICTORS, default="tail-fit")
    sub.add_argument("--eta", type=int, default=3, help="halving factor for sha and hyperband")
    sub.add_argument("--iterations", type=int, default=6, help="bracket count for hyperband")
    sub.add_argument("--seed", type=int, default=0, help="seed for sampling and the baselines")


# ---------------------------------------------------------------------------
# solve


def _cmd_solve(args: argparse.Namespace) -> int:
    if (args.data is None) == (args.landscape is None):
        raise InvalidParams("give exactly one of --data or --landscape")
    if args.data is not None:
        bench = load_tabular(args.data)
        X, oracle, horizon = bench.configs, bench.oracle(), bench.horizon
    else:
        if args.horizon < 1:
            raise InvalidParams("horizon must be >= 1")
        spec = landscape(args.landscape, args.landscape_seed)
        X = sample_uniform(spec.domain, args.n, args.seed)
        oracle = LandscapeOracle(spec, args.horizon)
        horizon = args.horizon
    budget = args.budget if args.budget is not None else 20 * horizon
    out = run_algorithm(args.algo, X, oracle, budget, horizon, _knobs_from(args))
    spent = out.trace[-1][0] if out.trace else 0
    print(f"best_id={out.best} best_value={_fmt(out.best_value)} spent={spent}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_csv(
            os.path.join(args.out, "outcome.csv"),
            ["best_id", "best_value", "spent"],
            [[out.best, _fmt(out.best_value), spent]],
        )
        _write_csv(
            os.path.join(args.out, "trace.csv"),
            ["spent", "incumbent"],
            [[s, _fmt(v)] for s, v in out.trace],
        )
    return 0


# ---------------------------------------------------------------------------
# bench


def _bench_cell(payload):
    """Worker: run one (dataset, seed, algorithm) cell, catching per-cell errors."""
    name, bench, cap, seed, alg, knobs = payload
    cell_knobs = Knobs(**{**knobs.__dict__, "seed": seed})
    try:
        out = run_algorithm(alg, bench.configs, bench.oracle(), cap, bench.horizon, cell_knobs)
    except UvpError as exc:
        return (name, seed, alg), None, None, str(exc)
    return (name, seed, alg), out.trace, out.best_value, None


def _cmd_bench(args: argparse.Namespace) -> int:
    datasets: list[tuple[str, TabularBenchmark]] = []
    for path in args.data or []:
        name = os.path.splitext(os.path.basename(path))[0]
        datasets.append((name, load_tabular(path)))
    for kind in args.landscape or []:
        spec = landscape(kind, args.landscape_seed)
        configs = sample_uniform(spec.domain, args.n, args.seed)
        datasets.append((kind, _materialize_landscape(kind, configs, args.horizon, args.landscape_seed)))
    if not datasets:
        raise InvalidParams("bench needs at least one --data file or --landscape kind")
    names = [n for n, _ in datasets]
    if len(set(names)) != len(names):
        raise InvalidParams(f"dataset names collide: {names}")
    datasets.sort(key=lambda pair: pair[0])

    raw_algos = ",".join(ALGORITHMS) if args.algos is None else args.algos
    algorithms = sorted({a for a in raw_algos.split(",") if a})
    if not algorithms:
        raise InvalidParams("empty algorithm list")
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise InvalidParams(f"unknown algorithm {alg!r}")
    if args.seeds < 1:
        raise InvalidParams("need at least one seed")
    knobs = _knobs_from(args)
    seeds = list(range(args.seed, args.seed + args.seeds))

    caps = {}
    for name, bench in datasets:
        cap = args.budget if args.budget is not None else 20 * bench.horizon
        if cap < bench.horizon:
            raise InvalidParams(f"budget {cap} is below one full evaluation of {name}")
        caps[name] = cap

    tasks = [
        (name, bench, caps[name], seed, alg, knobs)
        for name, bench in datasets
        for seed in seeds
        for alg in algorithms
    ]
    results: dict[tuple[str, int, str], list[tuple[int, float]]] = {}
    finals: dict[tuple[str, int, str], float] = {}
    failures: list[tuple[str, int, str, str]] = []
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            cells = list(pool.map(_bench_cell, tasks))
    else:
        cells = [_bench_cell(t) for t in tasks]
    for key, trace, final, err in cells:
        if err is not None:
            failures.append((*key, err))
        else:
            results[key] = trace
            finals[key] = final

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for (name, seed, alg), trace in sorted(results.items()):
            _write_csv(
                os.path.join(args.out, f"trace_{name}_{alg}_{seed}.csv"),
                ["spent", "incumbent"],
                [[s, _fmt(v)] for s, v in trace],
            )
        summary_rows = []
        for name, _ in datasets:
            for alg in algorithms:
                vals = [finals[(name, s, alg)] for s in seeds if (name, s, alg) in finals]
                if vals:
                    summary_rows.append(
                        [name, alg, _fmt(float(np.mean(vals))), _fmt(float(np.std(vals)))]
                    )
        _write_csv(
            os.path.join(args.out, "summary.csv"),
            ["dataset", "algorithm", "mean_best", "std_best"],
            summary_rows,
        )
        if failures:
            _write_csv(
                os.path.join(args.out, "failures.csv"),
                ["dataset", "seed", "algorithm", "error"],
                sorted(failures),
            )

    # rank only algorithms that completed every (dataset, seed) cell
    complete = [
        alg
        for alg in algorithms
        if all((name, s, alg) in results for name, _ in datasets for s in seeds)
    ]
    if complete:
        ranked = {k: v for k, v in results.items() if k[2] in complete}
        table = mean_rank(ranked, caps)
        if args.out:
            _write_csv(
                os.path.join(args.out, "mean_rank.csv"),
                ["fraction", "algorithm", "mean_rank"],
                [[_fmt(f), a, _fmt(m)] for f, a, m in table.rows()],
            )
        order = np.argsort(table.means[-1], kind="stable")
        ranking = ", ".join(f"{table.algorithms[i]}={table.means[-1][i]:.2f}" for i in order)
        print(f"mean rank at full budget: {ranking}")
    if failures:
        print(f"{len(failures)} of {len(tasks)} cells failed; see failures.csv", file=sys.stderr)
        return 2
    return 0


# ---------------------------------------------------------------------------
# estimate-eps


def _cmd_estimate_eps(args: argparse.Namespace) -> int:
    bench = load_tabular(args.data)
    try:
        alphas = [float(a) for a in args.alphas.split(",") if a.strip()]
    except ValueError:
        raise InvalidParams(f"cannot parse --alphas {args.alphas!r}") from None
    if not alphas:
        raise InvalidParams("need at least one percentile")
    report = epsilon_percentiles(epsilon_pairwise(bench, strict=args.strict), args.k, alphas)
    for alpha in alphas:
        print(f"alpha={_fmt(alpha)} value={_fmt(report.percentiles[alpha])}")
    if report.skipped:
        print(f"skipped {len(report.skipped)} coincident pairs", file=sys.stderr)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_csv(
            os.path.join(args.out, "epsilon.csv"),
            ["alpha", "value"],
            [[_fmt(a), _fmt(report.percentiles[a])] for a in alphas],
        )
    return 0


# ---------------------------------------------------------------------------
# gen


def _cmd_gen(args: argparse.Namespace) -> int:
    if (args.hard is None) == (args.landscape is None):
        raise InvalidParams("give exactly one of --hard or --landscape")
    if args.hard is not None:
        spec = HardInstanceSpec(
            variant=args.hard,
            epsilon=args.epsilon,
            beta=args.beta,
            k=args.k,
            n_per_cluster=args.n,
            r=args.r,
            horizon=args.horizon,
            theta_frac=args.theta_frac,
            seed=args.seed,
        )
        configs, oracle = gen_hard(spec)
        curves = oracle.curves
    else:
        lspec = landscape(args.landscape, args.seed)
        configs = mesh_grid(lspec.domain, args.mesh)
        bench = _materialize_landscape(args.landscape, configs, 1, args.seed)
        curves = bench.curves
    save_tabular(args.out, configs, curves)
    print(f"wrote {args.out}: n={len(configs)} d={configs[0].dimension} T={curves.shape[1]}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uvp", description="budget-allocation solvers and benchmarks"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    solve = subs.add_parser("solve", help="run one algorithm on one instance")
    solve.add_argument("--algo", choices=ALGORITHMS, required=True)
    solve.add_argument("--data", help="benchmark CSV (id,x0..,b,value)")
    solve.add_argument(
        "--landscape", choices=LANDSCAPE_KINDS, help="analytic surface instead of a file"
    )
    solve.add_argument("--n", type=int, default=10000, help="candidates sampled from a landscape")
    solve.add_argument("--horizon", type=int, default=1, help="horizon for landscape sources")
    solve.add_argument("--landscape-seed", type=int, default=0, help="seed for surface parameters")
    solve.add_argument(
        "--budget", type=int, default=None, help="total unit budget (default 20 * horizon)"
    )
    _add_knob_args(solve)
    solve.add_argument("--out", help="directory for outcome.csv and trace.csv")
    solve.set_defaults(fn=_cmd_solve)

    bench = subs.add_parser("bench", help="compare algorithms over datasets and seeds")
    bench.add_argument("--data", action="append", help="benchmark CSV, repeatable")
    bench.add_argument(
        "--landscape", action="append", choices=LANDSCAPE_KINDS, help="analytic surface, repeatable"
    )
    bench.add_argument("--n", type=int, default=10000, help="candidates sampled per landscape")
    bench.add_argument("--horizon", type=int, default=1, help="horizon for landscape sources")
    bench.add_argument("--landscape-seed", type=int, default=0)
    bench.add_argument("--algos", help="comma list of algorithms (default: all)")
    bench.add_argument("--seeds", type=int, default=30, help="seeds per (dataset, algorithm)")
    bench.add_argument(
        "--budget", type=int, default=None, help="budget cap per dataset (default 20 * its horizon)"
    )
    _add_knob_args(bench)
    bench.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    bench.add_argument("--out", help="directory for traces, mean_rank.csv and summary.csv")
    bench.set_defaults(fn=_cmd_bench)

    est = subs.add_parser("estimate-eps", help="estimate the smoothness level of a benchmark")
    est.add_argument("--data", required=True)
    est.add_argument("--k", type=int, default=20, help="cover size for the radius scaling")
    est.add_argument("--alphas", default="90,95,98,99", help="comma list of percentiles")
    est.add_argument("--strict", action="store_true", help="fail on coincident embeddings")
    est.add_argument("--out", help="directory for epsilon.csv")
    est.set_defaults(fn=_cmd_estimate_eps)

    gen = subs.add_parser("gen", help="write a synthetic benchmark CSV")
    gen.add_argument("--hard", choices=("fc", "ac"), help="clustered worst-case instance variant")
    gen.add_argument(
        "--landscape", choices=LANDSCAPE_KINDS, help="tabulate an analytic surface on a mesh"
    )
    gen.add_argument("--out", required=True, help="output CSV path")
    gen.add_argument("--epsilon", type=float, default=0.2)
    gen.add_argument("--beta", type=float, default=2.0)
    gen.add_argument("--k", type=int, default=2)
    gen.add_argument("--n", type=int, default=5, help="configurations per cluster")
    gen.add_argument("--r", type=float, default=1.0, help="intra-cluster distance")
    gen.add_argument("--horizon", type=int, default=3)
    gen.add_argument("--theta-frac", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--mesh", type=int, default=3, help="mesh points per dimension for --landscape")
    gen.set_defaults(fn=_cmd_gen)
    return parser


def entry(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UvpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(entry())
