"""Naive random testing: i.i.d. uniform inputs under the shared budget contract."""

from __future__ import annotations

from ..core import ProblemDefinition, RunHistory, RunLog
from ..samplers import make_rng


def run_random_search(
    problem: ProblemDefinition, budget: int, batch_size: int, seed: int
) -> RunHistory:
    """Uniform random search; ``batch_size`` groups evaluations into pseudo-generations.

    The generation index floor(index / batch_size) makes iteration counts
    comparable with population-based algorithms run at that population size.
    """
    if batch_size < 1:
        raise ValueError(f"batch size must be positive, got {batch_size}")
    rng = make_rng(seed)
    log = RunLog(problem, budget)
    space = problem.space
    while log.remaining > 0:
        log.generation = log.used // batch_size
        log.evaluate(rng.uniform(space.lows, space.highs))
    return log.history("rs", seed)
