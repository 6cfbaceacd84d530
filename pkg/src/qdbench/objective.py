"""Rastrigin objective, its domain, and the 2-D feature descriptor."""
from __future__ import annotations

import numpy as np

RASTRIGIN_A = 10.0
LOWER_BOUND = -5.12
UPPER_BOUND = 5.12


def domain_bounds() -> tuple[float, float]:
    """Per-component search bounds, identical for every dimension."""
    return (LOWER_BOUND, UPPER_BOUND)


def in_domain(values) -> bool:
    """True when every component of `values` lies inside the search bounds."""
    x = np.asarray(values, dtype=float)
    return bool(np.all(x >= LOWER_BOUND) and np.all(x <= UPPER_BOUND))


def _as_genome(values) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("genome must be a non-empty 1-D vector")
    if not in_domain(x):
        raise ValueError(
            f"genome component outside [{LOWER_BOUND}, {UPPER_BOUND}]: {x!r}"
        )
    return x


def evaluate_rastrigin(genome) -> float:
    """Rastrigin value of a genome, minimisation orientation.

    A*n + sum_i(x_i^2 - A*cos(2*pi*x_i)) with A = 10; non-negative on
    the domain, zero only at the origin. Components outside the domain
    are a hard error rather than being clamped.
    """
    x = _as_genome(genome)
    return float(
        RASTRIGIN_A * x.size + np.sum(x * x - RASTRIGIN_A * np.cos(2.0 * np.pi * x))
    )


def evaluate_rastrigin_batch(genomes) -> np.ndarray:
    """Vectorised Rastrigin over a (count, n) matrix of genomes."""
    x = np.asarray(genomes, dtype=float)
    if x.ndim != 2 or x.shape[1] == 0:
        raise ValueError("expected a (count, n) matrix of genomes")
    if not in_domain(x):
        raise ValueError(f"genome component outside [{LOWER_BOUND}, {UPPER_BOUND}]")
    return RASTRIGIN_A * x.shape[1] + np.sum(
        x * x - RASTRIGIN_A * np.cos(2.0 * np.pi * x), axis=1
    )


def extract_features(genome) -> tuple[float, float]:
    """Feature descriptor of a genome: its first two components."""
    x = _as_genome(genome)
    if x.size < 2:
        raise ValueError("feature descriptor needs a genome of length >= 2")
    return (float(x[0]), float(x[1]))


class RastriginObjective:
    """n-dimensional Rastrigin behind the small objective interface.

    The interface (name, dimensions, bounds, evaluate, evaluate_batch,
    features) is what the search loop consumes, so further landscape
    functions can slot in without touching it.
    """

    name = "rastrigin"

    def __init__(self, dimensions: int):
        if dimensions < 2:
            raise ValueError("dimensions must be >= 2")
        self.dimensions = int(dimensions)

    def bounds(self) -> tuple[float, float]:
        return domain_bounds()

    def evaluate(self, genome) -> float:
        x = np.asarray(genome, dtype=float)
        if x.shape != (self.dimensions,):
            raise ValueError(f"expected genome of length {self.dimensions}")
        return evaluate_rastrigin(x)

    def evaluate_batch(self, genomes) -> np.ndarray:
        x = np.asarray(genomes, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.dimensions:
            raise ValueError(f"expected a (count, {self.dimensions}) matrix")
        return evaluate_rastrigin_batch(x)

    def features(self, genome) -> tuple[float, float]:
        return extract_features(genome)
