"""Property-based checks over randomized instances."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import configs_from, curve_oracle
from uvp import BudgetLedger, History
from uvp.analysis import brute_force_k_center, mean_rank
from uvp.baselines import hyperband, random_search, successive_halving
from uvp.clustering import e_k_center, enhanced_distance, k_center
from uvp.core import MonotoneOracle, enforce_monotone
from uvp.solvers import SolverParams, ada_cent, e_ada_cent, e_full_cent, full_cent, pred

COMMON = settings(deadline=None, max_examples=60)


@st.composite
def tabular_instances(draw, max_n=6, max_horizon=4):
    """A small benchmark: distinct integer-grid points plus monotone curves."""
    n = draw(st.integers(2, max_n))
    horizon = draw(st.integers(1, max_horizon))
    cells = draw(
        st.lists(
            st.tuples(st.integers(0, 9), st.integers(0, 9)),
            min_size=n, max_size=n, unique=True,
        )
    )
    raw = draw(
        st.lists(
            st.lists(st.floats(0.0, 1.0), min_size=horizon, max_size=horizon),
            min_size=n, max_size=n,
        )
    )
    curves = np.maximum.accumulate(np.asarray(raw), axis=1)
    X = configs_from([[float(a), float(b)] for a, b in cells])
    return X, curves, horizon


@st.composite
def concave_curves(draw, max_horizon=8):
    """Monotone curve with non-increasing increments, values in [0, 1]."""
    horizon = draw(st.integers(2, max_horizon))
    start = draw(st.floats(0.0, 0.3))
    incs = sorted(draw(st.lists(st.floats(0.0, 1.0), min_size=horizon - 1,
                                max_size=horizon - 1)), reverse=True)
    total = sum(incs)
    scale = (1.0 - start) / total if total > 0 else 0.0
    curve = [start]
    for inc in incs:
        curve.append(min(1.0, curve[-1] + inc * scale))
    return curve, horizon


@given(tabular_instances())
@COMMON
def test_monotone_wrap_is_running_max_and_idempotent(instance):
    X, curves, horizon = instance
    raw = curve_oracle(np.minimum(curves, 0.9), dimension=2)
    wrapped = enforce_monotone(raw)
    assert enforce_monotone(wrapped) is wrapped
    for cfg in X[:2]:
        seen = [wrapped.query(cfg, b) for b in range(1, horizon + 1)]
        assert seen == sorted(seen)
        assert seen[-1] == max(raw.query(cfg, b) for b in range(1, horizon + 1))


@given(concave_curves(), st.integers(2, 8))
@COMMON
def test_two_point_predictor_is_optimistic_on_concave_curves(curve_horizon, prefix_len):
    curve, horizon = curve_horizon
    prefix = curve[: min(prefix_len, horizon)]
    forecast = pred(prefix, horizon)
    assert forecast >= curve[-1] - 1e-12


@given(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)),
                min_size=2, max_size=8, unique=True),
       st.integers(1, 3))
@COMMON
def test_greedy_k_center_within_twice_optimal(cells, k):
    X = configs_from([[float(a), float(b)] for a, b in cells])
    if k > len(X):
        return
    report = brute_force_k_center(X, k)
    assert report.greedy_radius <= 2.0 * report.optimal_radius + 1e-12


@given(st.floats(0.0, 50.0), st.floats(1.0, 100.0), st.floats(0.01, 5.0))
@COMMON
def test_enhanced_distance_never_exceeds_plain(dist, eta, epsilon):
    adjusted = enhanced_distance(dist, eta, epsilon)
    assert adjusted <= dist + 1e-12
    assert enhanced_distance(dist, 1.0, epsilon) == pytest.approx(dist)


@given(tabular_instances(), st.integers(1, 3))
@COMMON
def test_value_aware_selection_collapses_on_equal_values(instance, k):
    X, curves, horizon = instance
    if k > len(X):
        return
    const = np.full_like(curves, 0.5)
    oracle = curve_oracle(const, dimension=2)
    picked, _ = e_k_center(
        k, [], {}, X, 1, 0.5, oracle, BudgetLedger(k), allow_partial=False
    )
    assert picked == k_center(k, [], X)


def _run_all(X, curves, horizon, budget, seed):
    outs = {}
    oracle = curve_oracle(curves, dimension=2)
    params = SolverParams(budget=budget, horizon=horizon, p=2, epsilon=0.5, delta=0.5)
    for name, fn in (("fc", full_cent), ("efc", e_full_cent), ("ac", ada_cent)):
        ledger = BudgetLedger(budget)
        outs[name] = (fn(params, X, curve_oracle(curves, dimension=2), ledger), ledger)
    if int(params.delta * horizon) >= 1:
        ledger = BudgetLedger(budget)
        outs["eac"] = (e_ada_cent(params, X, curve_oracle(curves, dimension=2), ledger), ledger)
    ledger = BudgetLedger(budget)
    outs["rs"] = (random_search(budget, horizon, X, seed, curve_oracle(curves, dimension=2), ledger), ledger)
    ledger = BudgetLedger(budget)
    outs["sha"] = (successive_halving(budget, horizon, X, 2, seed, curve_oracle(curves, dimension=2), ledger), ledger)
    ledger = BudgetLedger(budget)
    outs["hb"] = (hyperband(budget, horizon, X, 2, 2, seed, curve_oracle(curves, dimension=2), ledger), ledger)
    return outs


@given(tabular_instances(), st.integers(1, 4), st.integers(0, 10))
@settings(deadline=None, max_examples=40)
def test_every_algorithm_conserves_budget(instance, mult, seed):
    X, curves, horizon = instance
    budget = min(mult, len(X)) * horizon
    if mult % 2 and horizon >= 2:
        budget += 1  # sometimes a ragged cap
    if budget < horizon:
        return
    for name, (out, ledger) in _run_all(X, curves, horizon, budget, seed).items():
        assert ledger.spent <= budget, name
        charged = sum(len(h) for h in out.histories.values())
        assert charged == ledger.spent, name
        assert out.best in out.histories, name


@given(tabular_instances(), st.integers(1, 4), st.integers(0, 10))
@settings(deadline=None, max_examples=40)
def test_every_trace_is_anytime_monotone(instance, mult, seed):
    X, curves, horizon = instance
    budget = min(mult, len(X)) * horizon
    if budget < horizon:
        return
    for name, (out, _) in _run_all(X, curves, horizon, budget, seed).items():
        spends = [s for s, _ in out.trace]
        incs = [v for _, v in out.trace]
        assert spends == sorted(set(spends)), name
        assert incs == sorted(incs) or all(
            a <= b + 1e-15 for a, b in zip(incs, incs[1:])
        ), name
        assert out.best_value == pytest.approx(incs[-1]), name


@given(st.integers(2, 5), st.integers(1, 4), st.data())
@settings(deadline=None, max_examples=30)
def test_mean_rank_rows_sum_to_rank_total(m, n_datasets, data):
    algorithms = [f"alg{i}" for i in range(m)]
    results = {}
    caps = {}
    for d in range(n_datasets):
        name = f"ds{d}"
        caps[name] = 4
        for seed in range(2):
            for alg in algorithms:
                vals = data.draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4))
                inc = np.maximum.accumulate(vals)
                results[(name, seed, alg)] = tuple((i + 1, float(v)) for i, v in enumerate(inc))
    table = mean_rank(results, caps, fractions=(0.25, 1.0))
    total = m * (m + 1) / 2
    for row in table.means:
        assert float(np.sum(row)) == pytest.approx(total)
