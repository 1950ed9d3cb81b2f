"""Greedy farthest-first center selection, plain and value-aware.

The plain selector spreads centers by Euclidean distance alone. The
value-aware variant probes each center as it is selected and then shrinks
the effective distance around weak centers, so later picks avoid regions a
low-value center already rules out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .core import (
    BudgetLedger,
    Configuration,
    EmptyCenters,
    History,
    InsufficientCandidates,
    InvalidBudget,
    InvalidParams,
    ValueOracle,
    config_matrix,
    learn,
)

# Centers whose observed value is zero rule out their whole 1/epsilon
# neighbourhood; a finite ratio cap keeps the arithmetic well defined.
DEFAULT_ETA_CAP = 1e6


def _check_selection(k: int, seeds: Sequence[int], n: int) -> None:
    if k < 0:
        raise InvalidParams(f"cannot select {k} centers")
    seen = set()
    for s in seeds:
        if not 0 <= s < n:
            raise InvalidParams(f"seed id {s} outside candidate set of size {n}")
        if s in seen:
            raise InvalidParams(f"seed id {s} listed twice")
        seen.add(s)
    if k + len(seeds) > n:
        raise InsufficientCandidates(
            f"need {k} new centers on top of {len(seeds)} seeds, only {n} candidates"
        )


def k_center(k: int, seeds: Sequence[int], X: Sequence[Configuration]) -> list[int]:
    """Select ``k`` new centers by greedy farthest-first traversal.

    Each pick maximises the minimum Euclidean distance to the centers chosen
    so far (seeds included). With no centers at all every candidate is at
    infinite distance and the tie-break picks the lowest id. Returns only the
    new center ids, in selection order.
    """
    n = len(X)
    _check_selection(k, seeds, n)
    if k == 0:
        return []
    points = config_matrix(X)
    nearest = np.full(n, np.inf)
    chosen = np.zeros(n, dtype=bool)
    for s in seeds:
        chosen[s] = True
        np.minimum(nearest, np.linalg.norm(points - points[s], axis=1), out=nearest)
    new: list[int] = []
    for _ in range(k):
        open_ids = np.flatnonzero(~chosen)
        pick = int(open_ids[np.argmax(nearest[open_ids])])  # first max = lowest id
        new.append(pick)
        chosen[pick] = True
        np.minimum(nearest, np.linalg.norm(points - points[pick], axis=1), out=nearest)
    return new


def greedy_radius(centers: Sequence[int], X: Sequence[Configuration]) -> float:
    """Covering radius of ``centers``: max over candidates of nearest-center distance."""
    if len(centers) == 0:
        raise EmptyCenters("covering radius needs at least one center")
    points = config_matrix(X)
    nearest = np.full(len(X), np.inf)
    for c in centers:
        if not 0 <= c < len(X):
            raise InvalidParams(f"center id {c} outside candidate set")
        np.minimum(nearest, np.linalg.norm(points - points[c], axis=1), out=nearest)
    return float(nearest.max())


def enhanced_distance(dist: float, eta: float, epsilon: float) -> float:
    """Value-aware distance min(dist, eta*dist - (eta - 1)/epsilon).

    ``eta`` is the ratio of the best observed center value to this center's
    value; a weak center (eta > 1) pulls nearby points toward it, possibly
    below zero, which marks them as already ruled out.
    """
    if not np.all(np.asarray(dist) >= 0):
        raise InvalidParams("distance must be non-negative")
    if not np.all(np.asarray(eta) >= 1):
        raise InvalidParams("value ratio eta must be >= 1")
    if epsilon <= 0:
        raise InvalidParams("epsilon must be positive")
    return float(min(dist, eta * dist - (eta - 1.0) / epsilon))


@dataclass
class EnhancedMetric:
    """Per-iteration view of center values used by the value-aware selector."""

    epsilon: float
    value_of: dict[int, float]
    eta_cap: float = DEFAULT_ETA_CAP

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise InvalidParams("epsilon must be positive")
        if self.eta_cap < 1:
            raise InvalidParams("eta cap must be >= 1")

    @property
    def v_max(self) -> float:
        if not self.value_of:
            raise EmptyCenters("no center values recorded")
        return max(self.value_of.values())

    def eta(self, center: int) -> float:
        """Best-to-own value ratio for ``center``, clamped to the cap."""
        v = self.value_of[center]
        v_max = self.v_max
        if v_max <= 0.0:
            return 1.0
        if v <= 0.0:
            return self.eta_cap
        return min(v_max / v, self.eta_cap)

    def distances(self, dist: np.ndarray, center: int) -> np.ndarray:
        """Vectorised enhanced distance from every point to ``center``."""
        eta = self.eta(center)
        return np.minimum(dist, eta * dist - (eta - 1.0) / self.epsilon)


def e_k_center(
    k: int,
    seeds: Sequence[int],
    histories: Mapping[int, History],
    X: Sequence[Configuration],
    t: int,
    epsilon: float,
    oracle: ValueOracle,
    ledger: BudgetLedger,
    *,
    allow_partial: bool = False,
    eta_cap: float = DEFAULT_ETA_CAP,
) -> tuple[list[int], dict[int, History]]:
    """Select ``k`` centers farthest-first under the value-aware distance.

    Every seed must come with a non-empty history. Each iteration recomputes
    the value ratios from the current center values, picks the candidate
    maximising the minimum enhanced distance, and probes it for ``t`` units
    before the next pick. Returns the new center ids in selection order and
    the merged history map (seeds plus new centers).

    With ``allow_partial`` the selection stops quietly once the ledger cap
    intervenes, so a probe may be truncated and trailing picks skipped.
    """
    n = len(X)
    _check_selection(k, seeds, n)
    if epsilon <= 0:
        raise InvalidParams("epsilon must be positive")
    if t < 1 or t > oracle.horizon:
        raise InvalidBudget(f"probe budget {t} outside 1..{oracle.horizon}")
    merged: dict[int, History] = dict(histories)
    for s in seeds:
        if s not in merged or len(merged[s]) == 0:
            raise InvalidParams(f"seed center {s} has no observations")

    points = config_matrix(X)
    centers: list[int] = list(seeds)
    chosen = np.zeros(n, dtype=bool)
    for s in seeds:
        chosen[s] = True
    new: list[int] = []
    for _ in range(k):
        if allow_partial and ledger.remaining == 0:
            break
        open_ids = np.flatnonzero(~chosen)
        if not centers:
            pick = int(open_ids[0])  # no distances defined yet: lowest id
        else:
            metric = EnhancedMetric(
                epsilon, {c: merged[c].last for c in centers}, eta_cap=eta_cap
            )
            delta = np.full(n, np.inf)
            for c in centers:
                dist = np.linalg.norm(points - points[c], axis=1)
                np.minimum(delta, metric.distances(dist, c), out=delta)
            pick = int(open_ids[np.argmax(delta[open_ids])])
        merged[pick] = learn(oracle, ledger, X[pick], t, allow_partial=allow_partial)
        centers.append(pick)
        chosen[pick] = True
        new.append(pick)
    return new, merged


@dataclass
class CenterState:
    """Centers accumulated across solver rounds plus the still-active subset."""

    centers: list[int] = field(default_factory=list)
    active: list[int] = field(default_factory=list)

    def add(self, new: Sequence[int]) -> None:
        self.centers.extend(new)
        self.active = sorted(set(self.active).union(new))
