"""Core problem model: search spaces, vector fitness, failure oracles, Pareto
dominance, and the evaluation log shared by every search algorithm.

Conventions used throughout the package:

* all fitness values are minimized,
* a test input is a plain 1-D ``numpy`` array of floats,
* a fitness vector is a plain 1-D ``numpy`` array of floats,
* an oracle flags *failure* when every one of its strict upper bounds holds.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class BudgetExhausted(Exception):
    """Signal that the evaluation budget is spent; run loops exit cleanly on it."""


@dataclass(frozen=True)
class SearchSpace:
    """Axis-aligned box of search variables, one (lo, hi) pair per dimension."""

    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) < 1:
            raise ValueError("search space needs at least one dimension")
        for i, (lo, hi) in enumerate(bounds):
            if not lo < hi:
                raise ValueError(f"bounds[{i}]: lower bound must be below upper, got ({lo}, {hi})")
        object.__setattr__(self, "bounds", bounds)

    @property
    def dims(self) -> int:
        return len(self.bounds)

    @cached_property
    def lows(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @cached_property
    def highs(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])

    @property
    def widths(self) -> np.ndarray:
        return self.highs - self.lows

    @property
    def center(self) -> np.ndarray:
        return (self.lows + self.highs) / 2.0

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.widths))

    def contains(self, x: np.ndarray) -> bool:
        """True when ``x`` has the right dimensionality and lies inside the box."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dims,):
            return False
        return bool(np.all(x >= self.lows) and np.all(x <= self.highs))

    def clip(self, x: np.ndarray) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), self.lows, self.highs)


def unit_box(dims: int) -> SearchSpace:
    """The [0, 1]^dims search space."""
    return SearchSpace(tuple((0.0, 1.0) for _ in range(dims)))


def dominates(a: Sequence[float] | np.ndarray, b: Sequence[float] | np.ndarray) -> bool:
    """Pareto dominance under minimization.

    ``a`` dominates ``b`` when it is nowhere worse and strictly better in at
    least one component.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"fitness vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


@dataclass(frozen=True)
class OracleSpec:
    """Failure predicate: a conjunction of strict upper bounds on fitness values.

    Each clause is an ``(objective_index, threshold)`` pair; a fitness vector
    reveals a failure when every clause's strict ``<`` comparison holds.
    Variant labels (Large/Medium/Small) tag the graded oracle families whose
    failure regions are nested from loosest to strictest.
    """

    clauses: tuple[tuple[int, float], ...]
    variant_label: str = "Custom"

    def __post_init__(self) -> None:
        clauses = tuple((int(i), float(t)) for i, t in self.clauses)
        if not clauses:
            raise ValueError("oracle needs at least one clause")
        for i, _ in clauses:
            if i < 0:
                raise ValueError(f"objective index must be non-negative, got {i}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def max_index(self) -> int:
        return max(i for i, _ in self.clauses)


def oracle_eval(oracle: OracleSpec, fitness: Sequence[float] | np.ndarray) -> bool:
    """True (failure) iff every oracle clause's strict inequality holds."""
    f = np.asarray(fitness, dtype=float)
    if oracle.max_index >= f.shape[0]:
        raise ValueError(
            f"oracle refers to objective {oracle.max_index} but fitness has {f.shape[0]} values"
        )
    return all(f[i] < threshold for i, threshold in oracle.clauses)


@dataclass(frozen=True)
class ProblemDefinition:
    """A testing problem: box search space, pure vector fitness, failure oracle."""

    name: str
    space: SearchSpace
    objective_count: int
    fitness_evaluator: Callable[[np.ndarray], np.ndarray]
    oracle: OracleSpec

    def __post_init__(self) -> None:
        if self.objective_count < 1:
            raise ValueError("problem needs at least one objective")
        if self.oracle.max_index >= self.objective_count:
            raise ValueError(
                f"oracle refers to objective {self.oracle.max_index} "
                f"but problem has {self.objective_count}"
            )

    def fitness(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the fitness vector, checking shape and finiteness."""
        f = np.asarray(self.fitness_evaluator(np.asarray(x, dtype=float)), dtype=float)
        if f.shape != (self.objective_count,):
            raise ValueError(
                f"{self.name}: fitness evaluator returned shape {f.shape}, "
                f"expected ({self.objective_count},)"
            )
        if not np.all(np.isfinite(f)):
            raise ValueError(f"{self.name}: fitness is not finite for input {x!r}")
        return f


@dataclass
class Evaluation:
    """One fitness evaluation: budget index, input, fitness, verdict, batch index.

    ``novelty`` is filled only by the diversified search, which logs each
    input's distance to the novelty archive at evaluation time.
    """

    index: int
    input: np.ndarray
    fitness: np.ndarray
    failed: bool
    generation: int
    novelty: float | None = None


@dataclass
class RunHistory:
    """Ordered evaluation log of one seeded run of one algorithm."""

    algorithm_name: str
    problem_name: str
    oracle_label: str
    seed: int
    evaluations: list[Evaluation] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.evaluations)

    def inputs(self) -> np.ndarray:
        return np.array([ev.input for ev in self.evaluations])

    def fitnesses(self) -> np.ndarray:
        return np.array([ev.fitness for ev in self.evaluations])

    def failing_inputs(self) -> np.ndarray:
        """Inputs of all failing evaluations, in evaluation order (may be empty)."""
        failing = [ev.input for ev in self.evaluations if ev.failed]
        if not failing:
            return np.empty((0, self.evaluations[0].input.shape[0]) if self.evaluations else (0, 0))
        return np.array(failing)


class RunLog:
    """Mutable budget counter plus the growing evaluation history of one run.

    Algorithms set ``generation`` before each batch and call :meth:`evaluate`
    once per candidate; the log enforces bounds, counts the budget, and applies
    the oracle.
    """

    def __init__(self, problem: ProblemDefinition, budget: int):
        if budget < 1:
            raise ValueError(f"budget must be at least 1, got {budget}")
        self.problem = problem
        self.budget = int(budget)
        self.generation = 0
        self.evaluations: list[Evaluation] = []

    @property
    def used(self) -> int:
        return len(self.evaluations)

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    def evaluate(self, x: np.ndarray) -> Evaluation:
        """Spend one budget unit on ``x`` and append the outcome to the history."""
        if self.remaining <= 0:
            raise BudgetExhausted(f"budget of {self.budget} evaluations is spent")
        x = np.array(x, dtype=float)
        if not self.problem.space.contains(x):
            raise ValueError(f"input {x!r} is outside the search space")
        f = self.problem.fitness(x)
        ev = Evaluation(
            index=self.used,
            input=x,
            fitness=f,
            failed=oracle_eval(self.problem.oracle, f),
            generation=self.generation,
        )
        self.evaluations.append(ev)
        return ev

    def history(self, algorithm_name: str, seed: int) -> RunHistory:
        return RunHistory(
            algorithm_name=algorithm_name,
            problem_name=self.problem.name,
            oracle_label=self.problem.oracle.variant_label,
            seed=int(seed),
            evaluations=self.evaluations,
        )
