"""Budget-allocation solvers built on center selection and curve extrapolation.

Four strategies share the same contract (params, candidates, oracle, ledger)
-> SearchOutcome:

* ``full_cent``:   pick floor(B/T) spread-out centers, train each to T.
* ``e_full_cent``: same, but selection uses the value-aware distance and
                   interleaves full evaluations with the picks.
* ``ada_cent``:    rounds of p fresh centers trained one unit at a time,
                   pruning every configuration whose optimistic forecast
                   falls behind the best observed value.
* ``e_ada_cent``:  ada_cent with value-aware selection and short probes of
                   floor(delta*T) units during selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import clustering
from .core import (
    BudgetLedger,
    Configuration,
    EmptyHistory,
    History,
    InsufficientCandidates,
    InvalidBudget,
    InvalidParams,
    Run,
    SearchOutcome,
    ValueOracle,
    learn,
)

PREDICTORS = ("two-point", "tail-fit")


@dataclass
class SolverParams:
    """Knobs shared by the solvers. ``budget`` is total units, ``horizon`` is T."""

    budget: int
    horizon: int
    p: int = 25
    epsilon: float = 0.2
    delta: float = 0.1
    theta: float = 0.3
    predictor: str = "two-point"

    def __post_init__(self) -> None:
        if not isinstance(self.budget, (int, np.integer)) or self.budget < 1:
            raise InvalidBudget(f"budget must be a positive integer, got {self.budget!r}")
        if not isinstance(self.horizon, (int, np.integer)) or self.horizon < 1:
            raise InvalidBudget(f"horizon must be a positive integer, got {self.horizon!r}")
        if self.p < 1:
            raise InvalidParams("p (centers per round) must be >= 1")
        if self.epsilon <= 0:
            raise InvalidParams("epsilon must be positive")
        if not 0 < self.delta < 1:
            raise InvalidParams("delta must lie in (0, 1)")
        if not 0 < self.theta <= 1:
            raise InvalidParams("theta must lie in (0, 1]")
        if self.predictor not in PREDICTORS:
            raise InvalidParams(f"predictor must be one of {PREDICTORS}")


def pred(history: History | Sequence[float], horizon: int) -> float:
    """Optimistic two-point forecast of the value at the horizon.

    A single observation predicts +inf (nothing rules anything out yet);
    otherwise the last increment is extended linearly to the horizon. For
    curves with non-increasing increments this never undershoots the truth.
    """
    values = history.values if isinstance(history, History) else list(history)
    if len(values) == 0:
        raise EmptyHistory("cannot forecast from an empty history")
    if len(values) == 1:
        return math.inf
    t = len(values)
    return values[-1] + (values[-1] - values[-2]) * (horizon - t)


def tail_fit_pred(history: History | Sequence[float], horizon: int, theta: float = 0.3) -> float:
    """Least-squares forecast from the final ``theta`` fraction of the history.

    Fits a line through the last max(2, ceil(theta*t)) observations and
    evaluates it at the horizon, clamped to at most 1.0. A negative fitted
    slope falls back to the last observed value.
    """
    if not 0 < theta <= 1:
        raise InvalidParams("theta must lie in (0, 1]")
    values = history.values if isinstance(history, History) else list(history)
    if len(values) == 0:
        raise EmptyHistory("cannot forecast from an empty history")
    if len(values) == 1:
        return math.inf
    t = len(values)
    m = max(2, math.ceil(theta * t))
    xs = np.arange(t - m + 1, t + 1, dtype=float)
    ys = np.asarray(values[-m:], dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    if slope < 0:
        return values[-1]
    return min(float(slope * horizon + intercept), 1.0)


def _forecast(history: History, params: SolverParams) -> float:
    if params.predictor == "tail-fit":
        return tail_fit_pred(history, params.horizon, params.theta)
    return pred(history, params.horizon)


def _check_pool(X: Sequence[Configuration]) -> None:
    if len(X) == 0:
        raise InsufficientCandidates("candidate set is empty")


def _num_centers(params: SolverParams) -> int:
    if params.budget < params.horizon:
        raise InvalidBudget(
            f"budget {params.budget} cannot cover one full evaluation of {params.horizon}"
        )
    return params.budget // params.horizon


def full_cent(
    params: SolverParams,
    X: Sequence[Configuration],
    oracle: ValueOracle,
    ledger: BudgetLedger,
) -> SearchOutcome:
    """Select floor(B/T) centers farthest-first, train each fully, keep the best."""
    _check_pool(X)
    k = _num_centers(params)
    run = Run(oracle, ledger)
    centers = clustering.k_center(k, [], X)
    for c in centers:
        start = ledger.spent
        h = learn(oracle, ledger, X[c], params.horizon)
        run.absorb([c], {c: h}, start)
    return run.outcome(centers)


def e_full_cent(
    params: SolverParams,
    X: Sequence[Configuration],
    oracle: ValueOracle,
    ledger: BudgetLedger,
) -> SearchOutcome:
    """Value-aware full training: selection and full evaluations interleave."""
    _check_pool(X)
    k = _num_centers(params)
    run = Run(oracle, ledger)
    start = ledger.spent
    centers, histories = clustering.e_k_center(
        k, [], {}, X, params.horizon, params.epsilon, oracle, ledger
    )
    run.absorb(centers, histories, start)
    return run.outcome(centers)


def ada_cent(
    params: SolverParams,
    X: Sequence[Configuration],
    oracle: ValueOracle,
    ledger: BudgetLedger,
) -> SearchOutcome:
    """Adaptive rounds of fresh centers with forecast-based pruning."""
    return _adaptive(params, X, oracle, ledger, enhanced=False)


def e_ada_cent(
    params: SolverParams,
    X: Sequence[Configuration],
    oracle: ValueOracle,
    ledger: BudgetLedger,
) -> SearchOutcome:
    """Adaptive rounds with value-aware selection and short exploration probes."""
    return _adaptive(params, X, oracle, ledger, enhanced=True)


def _adaptive(
    params: SolverParams,
    X: Sequence[Configuration],
    oracle: ValueOracle,
    ledger: BudgetLedger,
    *,
    enhanced: bool,
) -> SearchOutcome:
    _check_pool(X)
    horizon = params.horizon
    if enhanced:
        t_explore = int(params.delta * horizon)
        if t_explore < 1:
            raise InvalidParams(
                f"floor(delta * horizon) = {t_explore} leaves no exploration budget"
            )
        t_start = t_explore + 1
    else:
        t_explore = 0
        t_start = 1

    run = Run(oracle, ledger)
    state = clustering.CenterState()
    while ledger.remaining > 0:
        n_new = min(params.p, len(X) - len(state.centers))
        if n_new > 0 and enhanced:
            start = ledger.spent
            new, merged = clustering.e_k_center(
                n_new,
                state.centers,
                run.histories,
                X,
                t_explore,
                params.epsilon,
                oracle,
                ledger,
                allow_partial=True,
            )
            run.absorb(new, merged, start)
        elif n_new > 0:
            new = clustering.k_center(n_new, state.centers, X)
        else:
            new = []
        state.add(new)

        stopped = False
        for t in range(t_start, horizon + 1):
            for x in state.active:
                if ledger.remaining == 0:
                    stopped = True
                    break
                h = run.histories.get(x)
                if h is not None and len(h) >= t:
                    continue  # already trained this far in an earlier round
                run.step(X[x])
            if stopped or not state.active:
                break
            best_last = max(run.histories[x].last for x in state.active)
            state.active = [
                x for x in state.active if _forecast(run.histories[x], params) >= best_last
            ]
        if stopped or not new:
            break  # budget gone, or candidate pool exhausted after a last extension
    return run.outcome(state.centers)
