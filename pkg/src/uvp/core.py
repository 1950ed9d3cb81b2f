"""Shared domain types: configurations, value oracles, histories, budget accounting.

Every solver in this package is built from the same primitives: an immutable
candidate ``Configuration``, a ``ValueOracle`` answering "what value does
configuration x reach after b units of training", an append-only ``History``
of observed values, and a ``BudgetLedger`` that meters every unit spent.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

# Observed values live in [0, 1]; ingestion tolerates float noise up to this
# slack and clamps, anything further out is rejected.
VALUE_TOL = 1e-12


class UvpError(Exception):
    """Base class for every error raised by this package."""


class BudgetExhausted(UvpError):
    """Requested work does not fit in the remaining budget."""


class InvalidBudget(UvpError):
    """A budget or budget index violates its contract (e.g. B < T, t < 1)."""


class InvalidParams(UvpError):
    """Solver or generator parameters outside their documented domain."""


class InsufficientCandidates(UvpError):
    """The candidate pool is too small for the requested selection."""


class EmptyCenters(UvpError):
    """An operation that needs at least one center received none."""


class EmptyHistory(UvpError):
    """An operation that needs at least one observation received none."""


class OutOfDomain(UvpError):
    """A query point lies outside the landscape's domain."""


class SizeOverflow(UvpError):
    """A requested grid would exceed the configured size cap."""


class ParseError(UvpError):
    """A benchmark file contains an unparseable or out-of-range cell."""


class SchemaError(UvpError):
    """A benchmark file is structurally inconsistent (ragged or misnumbered)."""


class TooLarge(UvpError):
    """An exact (exponential) computation was asked for too large an input."""


class MissingTrace(UvpError):
    """A rank aggregation is missing the trace for one of its cells."""


class DegenerateEmbedding(UvpError):
    """Two distinct configurations share an embedding (zero distance)."""


@dataclass(frozen=True)
class Configuration:
    """One candidate: an embedding vector plus its index in the candidate set."""

    coords: tuple[float, ...]
    id: int

    def __post_init__(self) -> None:
        if len(self.coords) < 1:
            raise InvalidParams("configuration needs at least one coordinate")
        if not all(math.isfinite(c) for c in self.coords):
            raise InvalidParams(f"configuration {self.id} has non-finite coordinates")
        if self.id < 0:
            raise InvalidParams("configuration id must be non-negative")

    @property
    def dimension(self) -> int:
        return len(self.coords)


def config_matrix(X: Sequence[Configuration]) -> np.ndarray:
    """Stack candidate embeddings into an (n, d) array; ids must equal positions."""
    for pos, cfg in enumerate(X):
        if cfg.id != pos:
            raise InvalidParams(f"configuration at position {pos} has id {cfg.id}")
    return np.asarray([c.coords for c in X], dtype=float)


class History:
    """Observed values for one configuration at budgets 1..t. Append-only."""

    __slots__ = ("owner", "values")

    def __init__(self, owner: int, values: Sequence[float] = ()) -> None:
        self.owner = owner
        self.values: list[float] = []
        for v in values:
            self.append(v)

    def append(self, value: float) -> None:
        v = float(value)
        if not math.isfinite(v) or v < -VALUE_TOL or v > 1.0 + VALUE_TOL:
            raise ValueError(f"observed value {value!r} outside [0, 1]")
        self.values.append(min(max(v, 0.0), 1.0))

    @property
    def last(self) -> float:
        if not self.values:
            raise EmptyHistory(f"configuration {self.owner} has no observations")
        return self.values[-1]

    def __len__(self) -> int:
        return len(self.values)

    def __repr__(self) -> str:
        return f"History(owner={self.owner}, values={self.values!r})"


class ValueOracle(ABC):
    """Answers value queries A(x, b) for budgets 1..horizon. Stateless reads."""

    def __init__(self, dimension: int, horizon: int) -> None:
        if dimension < 1:
            raise InvalidParams("oracle dimension must be >= 1")
        if horizon < 1:
            raise InvalidBudget("oracle horizon must be >= 1")
        self.dimension = dimension
        self.horizon = horizon

    def _check_budget(self, b: int) -> None:
        if not isinstance(b, (int, np.integer)) or b < 1 or b > self.horizon:
            raise InvalidBudget(f"budget index {b} outside 1..{self.horizon}")

    @abstractmethod
    def query(self, config: Configuration, b: int) -> float:
        """Value reached by ``config`` after ``b`` training units."""


class CallableOracle(ValueOracle):
    """Wrap an arbitrary (config, b) -> value callable."""

    def __init__(self, fn: Callable[[Configuration, int], float], dimension: int, horizon: int) -> None:
        super().__init__(dimension, horizon)
        self._fn = fn

    def query(self, config: Configuration, b: int) -> float:
        self._check_budget(b)
        return float(self._fn(config, b))


class MonotoneOracle(ValueOracle):
    """Running-max view of a raw oracle: query(x, b) = max over t <= b of raw(x, t)."""

    def __init__(self, raw: ValueOracle) -> None:
        super().__init__(raw.dimension, raw.horizon)
        self.raw = raw

    def query(self, config: Configuration, b: int) -> float:
        self._check_budget(b)
        return max(self.raw.query(config, t) for t in range(1, b + 1))


def enforce_monotone(raw: ValueOracle) -> ValueOracle:
    """Wrap ``raw`` so curves never decrease in budget. Idempotent."""
    if isinstance(raw, MonotoneOracle):
        return raw
    return MonotoneOracle(raw)


@dataclass
class BudgetLedger:
    """Meters evaluation spend against a hard cap. One unit = one budget step."""

    cap: int
    spent: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.cap, (int, np.integer)) or self.cap < 0:
            raise InvalidBudget(f"budget cap must be a non-negative integer, got {self.cap!r}")
        if self.spent < 0 or self.spent > self.cap:
            raise InvalidBudget("initial spend outside [0, cap]")

    @property
    def remaining(self) -> int:
        return self.cap - self.spent

    def charge(self, units: int = 1) -> None:
        if units < 0:
            raise InvalidBudget("cannot charge a negative number of units")
        if self.spent + units > self.cap:
            raise BudgetExhausted(f"charge of {units} exceeds remaining {self.remaining}")
        self.spent += units


def extend(
    oracle: ValueOracle,
    ledger: BudgetLedger,
    config: Configuration,
    history: History,
    t: int,
    *,
    allow_partial: bool = False,
) -> History:
    """Evaluate ``config`` at budgets len(history)+1 .. t, charging one unit each.

    With ``allow_partial`` the loop stops quietly when the ledger cap
    intervenes; otherwise feasibility is checked up front so the ledger is
    never left mid-way through a requested fill.
    """
    if t < 1 or t > oracle.horizon:
        raise InvalidBudget(f"target budget {t} outside 1..{oracle.horizon}")
    needed = t - len(history)
    if not allow_partial and needed > ledger.remaining:
        raise BudgetExhausted(f"need {needed} units, only {ledger.remaining} remain")
    for b in range(len(history) + 1, t + 1):
        if ledger.remaining == 0:
            break
        ledger.charge(1)
        history.append(oracle.query(config, b))
    return history


def learn(
    oracle: ValueOracle,
    ledger: BudgetLedger,
    config: Configuration,
    t: int,
    *,
    allow_partial: bool = False,
) -> History:
    """Evaluate ``config`` sequentially at budgets 1..t and return its history."""
    history = History(config.id)
    return extend(oracle, ledger, config, history, t, allow_partial=allow_partial)


@dataclass
class SearchOutcome:
    """Result of one solver run: the incumbent plus its anytime trace."""

    best: int
    best_value: float
    trace: list[tuple[int, float]] = field(default_factory=list)
    histories: dict[int, History] = field(default_factory=dict)


class Run:
    """Bookkeeping for one solver execution: histories, spend trace, incumbent.

    The trace records one (units spent, incumbent value) point per charged
    unit, in observation order, so it doubles as the anytime curve.
    """

    def __init__(self, oracle: ValueOracle, ledger: BudgetLedger) -> None:
        self.oracle = oracle
        self.ledger = ledger
        self.histories: dict[int, History] = {}
        self.trace: list[tuple[int, float]] = []
        self._incumbent = -math.inf

    def step(self, config: Configuration) -> None:
        """Charge one unit and evaluate ``config`` at its next budget index."""
        h = self.histories.setdefault(config.id, History(config.id))
        b = len(h) + 1
        self.ledger.charge(1)
        h.append(self.oracle.query(config, b))
        self._observe(h.last)

    def extend_to(self, config: Configuration, t: int, *, allow_partial: bool = False) -> bool:
        """Train ``config`` up to budget t; returns False on a partial fill."""
        h = self.histories.setdefault(config.id, History(config.id))
        if not allow_partial and t - len(h) > self.ledger.remaining:
            raise BudgetExhausted(f"need {t - len(h)} units, only {self.ledger.remaining} remain")
        while len(h) < t:
            if self.ledger.remaining == 0:
                return False
            self.step(config)
        return True

    def absorb(self, ids: Sequence[int], histories: Mapping[int, History], start_spent: int) -> None:
        """Fold histories produced outside this run (e.g. by learn) into the trace.

        ``ids`` must be in observation order and the entries must account for
        exactly the units charged since ``start_spent``.
        """
        s = start_spent
        for c in ids:
            h = histories[c]
            self.histories[c] = h
            for v in h.values:
                s += 1
                self._observe(v, spent=s)

    def _observe(self, value: float, spent: int | None = None) -> None:
        if value > self._incumbent:
            self._incumbent = value
        self.trace.append((self.ledger.spent if spent is None else spent, self._incumbent))

    def outcome(self, candidates: Sequence[int]) -> SearchOutcome:
        """Best evaluated candidate (ties to the lowest id) plus the trace."""
        scored = [c for c in candidates if len(self.histories.get(c, ())) > 0]
        if not scored:
            raise EmptyHistory("no candidate was ever evaluated")
        best = min(scored, key=lambda c: (-self.histories[c].last, c))
        return SearchOutcome(
            best=best,
            best_value=self.histories[best].last,
            trace=list(self.trace),
            histories=dict(self.histories),
        )
