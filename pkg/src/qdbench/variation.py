"""Genome initialisation and the two bounded mutation operators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .objective import domain_bounds, in_domain

OPERATOR_KINDS = ("polynomial-bounded", "gaussian")


@dataclass(frozen=True)
class OperatorConfig:
    """Mutation operator choice plus parameters; the inactive kind's are ignored.

    mutation_prob applies per gene. eta is the polynomial distribution
    index; sigma/mean parametrise the gaussian step.
    """

    kind: str
    mutation_prob: float = 0.5
    eta: float = 10.0
    sigma: float = 1.0
    mean: float = 0.0

    def __post_init__(self):
        if self.kind not in OPERATOR_KINDS:
            raise ValueError(
                f"unknown operator kind {self.kind!r}; expected one of {OPERATOR_KINDS}"
            )
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")


def random_genome(n: int, rng) -> np.ndarray:
    """Genome of length n drawn uniformly from the search domain."""
    if n < 2:
        raise ValueError("genome length must be >= 2")
    lo, hi = domain_bounds()
    return rng.uniform(lo, hi, size=n)


def random_genome_batch(count: int, n: int, rng) -> np.ndarray:
    """(count, n) matrix of uniform random genomes."""
    if n < 2:
        raise ValueError("genome length must be >= 2")
    lo, hi = domain_bounds()
    return rng.uniform(lo, hi, size=(count, n))


def _check_input(genome) -> np.ndarray:
    x = np.asarray(genome, dtype=float)
    if not in_domain(x):
        raise ValueError("mutation input outside the search domain")
    return x


def _polynomial(x: np.ndarray, cfg: OperatorConfig, rng) -> np.ndarray:
    lo, hi = domain_bounds()
    span = hi - lo
    mask = rng.random(x.shape) < cfg.mutation_prob
    u = rng.random(x.shape)
    power = cfg.eta + 1.0
    d_low = (x - lo) / span
    d_high = (hi - x) / span
    val_low = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d_low) ** power
    val_high = 2.0 * (1.0 - u) + (2.0 * u - 1.0) * (1.0 - d_high) ** power
    delta = np.where(u < 0.5, val_low ** (1.0 / power) - 1.0, 1.0 - val_high ** (1.0 / power))
    out = np.where(mask, x + delta * span, x)
    # in bounds by construction; clip absorbs last-ulp rounding overshoot
    return np.clip(out, lo, hi)


def _gaussian(x: np.ndarray, cfg: OperatorConfig, rng) -> np.ndarray:
    lo, hi = domain_bounds()
    mask = rng.random(x.shape) < cfg.mutation_prob
    step = rng.normal(cfg.mean, cfg.sigma, size=x.shape)
    return np.clip(np.where(mask, x + step, x), lo, hi)


def mutate_polynomial_bounded(genome, cfg: OperatorConfig, rng) -> np.ndarray:
    """Bounded polynomial mutation: each gene perturbed with cfg.mutation_prob.

    A mutated gene draws u ~ U(0,1); for u < 0.5 the step is
    (2u + (1-2u)(1-d)^(eta+1))^(1/(eta+1)) - 1 scaled by the domain span,
    with d the gene's normalised distance to the lower bound, and the
    mirrored form toward the upper bound for u >= 0.5. The result never
    leaves the domain, and genes sitting on a bound stay there.
    """
    if cfg.kind != "polynomial-bounded":
        raise ValueError(f"operator config is {cfg.kind!r}, not 'polynomial-bounded'")
    return _polynomial(_check_input(genome), cfg, rng)


def mutate_gaussian(genome, cfg: OperatorConfig, rng) -> np.ndarray:
    """Gaussian mutation: per-gene Normal(mean, sigma^2) step, clamped to bounds."""
    if cfg.kind != "gaussian":
        raise ValueError(f"operator config is {cfg.kind!r}, not 'gaussian'")
    return _gaussian(_check_input(genome), cfg, rng)


def mutate(genome, cfg: OperatorConfig, rng) -> np.ndarray:
    """Apply the operator selected by cfg.kind; the input is never modified."""
    if cfg.kind == "polynomial-bounded":
        return mutate_polynomial_bounded(genome, cfg, rng)
    return mutate_gaussian(genome, cfg, rng)


def mutate_batch(genomes: np.ndarray, cfg: OperatorConfig, rng) -> np.ndarray:
    """Vectorised mutation of a (count, n) matrix of genomes."""
    x = _check_input(genomes)
    if x.ndim != 2:
        raise ValueError("expected a (count, n) matrix of genomes")
    if cfg.kind == "polynomial-bounded":
        return _polynomial(x, cfg, rng)
    return _gaussian(x, cfg, rng)
