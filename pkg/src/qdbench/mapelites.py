"""Batched MAP-Elites loop with deterministic seeding and checkpointing."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .archive import Elite, Grid
from .objective import RastriginObjective
from .variation import OperatorConfig, mutate_batch, random_genome_batch

DEFAULT_INIT_COUNT = 4096
DEFAULT_CHECKPOINT_EVERY = 10_000


@dataclass
class RunConfig:
    """Full description of one search run.

    init_count and checkpoint_every default to min(their usual defaults,
    budget) so small smoke runs stay valid without extra knobs.
    """

    dimensions: int
    budget: int = 1_000_000
    init_count: int | None = None
    batch_size: int = 64
    operator: OperatorConfig = field(
        default_factory=lambda: OperatorConfig("polynomial-bounded")
    )
    seed: int = 0
    checkpoint_every: int | None = None
    bins_per_feature: int = 64

    def __post_init__(self):
        if self.dimensions < 2:
            raise ValueError("dimensions must be >= 2")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.init_count is None:
            self.init_count = min(DEFAULT_INIT_COUNT, self.budget)
        if not 1 <= self.init_count <= self.budget:
            raise ValueError("init_count must lie in [1, budget]")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.checkpoint_every is None:
            self.checkpoint_every = min(DEFAULT_CHECKPOINT_EVERY, self.budget)
        if not 1 <= self.checkpoint_every <= self.budget:
            raise ValueError("checkpoint_every must lie in [1, budget]")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.bins_per_feature < 1:
            raise ValueError("bins_per_feature must be >= 1")


@dataclass
class Checkpoint:
    """Archive state snapshot: per-bin fitness surface (NaN = unfilled)."""

    evaluations: int
    fitness: np.ndarray
    coverage: float


@dataclass
class RunTrace:
    checkpoints: list[Checkpoint]
    final_grid: Grid


def select_parent(grid: Grid, rng) -> Elite:
    """Uniform-random elite from the occupied bins."""
    return grid.random_elite(rng)


def run(cfg: RunConfig, objective=None, on_checkpoint=None) -> RunTrace:
    """Illuminate `objective` (default: Rastrigin at cfg.dimensions).

    Phase 1 evaluates cfg.init_count uniform random genomes; phase 2
    repeats select-mutate-evaluate-insert in batches until exactly
    cfg.budget evaluations have been spent. Batches never straddle a
    checkpoint boundary, so snapshots land on exact multiples of
    cfg.checkpoint_every plus one final snapshot at the budget.

    Selection and mutation consume dedicated random streams derived from
    cfg.seed on the coordinating thread, and insertions are applied in
    batch-slot order, so the outcome is identical no matter how the pure
    batch evaluation is parallelised. `on_checkpoint(evaluations, grid)`
    is invoked with the live grid at every snapshot.
    """
    if objective is None:
        objective = RastriginObjective(cfg.dimensions)
    init_ss, select_ss, mutate_ss = np.random.SeedSequence(cfg.seed).spawn(3)
    init_rng = np.random.default_rng(init_ss)
    select_rng = np.random.default_rng(select_ss)
    mutate_rng = np.random.default_rng(mutate_ss)

    grid = Grid(cfg.bins_per_feature)
    checkpoints: list[Checkpoint] = []
    evaluations = 0

    def record():
        checkpoints.append(Checkpoint(evaluations, grid.fitness_matrix(), grid.coverage()))
        if on_checkpoint is not None:
            on_checkpoint(evaluations, grid)

    next_checkpoint = cfg.checkpoint_every
    while evaluations < cfg.budget:
        boundary = min(next_checkpoint, cfg.budget)
        count = min(cfg.batch_size, boundary - evaluations)
        if evaluations < cfg.init_count:
            count = min(count, cfg.init_count - evaluations)
            batch = random_genome_batch(count, cfg.dimensions, init_rng)
        elif grid.fill_count == 0:
            # unreachable when init_count >= 1; keeps the loop total
            batch = random_genome_batch(count, cfg.dimensions, init_rng)
        else:
            parents = grid.random_elites(select_rng, count)
            batch = mutate_batch(np.stack([p.genome for p in parents]), cfg.operator, mutate_rng)
        fitness = objective.evaluate_batch(batch)
        for k in range(count):
            genome = batch[k].copy()
            grid.insert(
                Elite(genome, float(fitness[k]), (float(genome[0]), float(genome[1])))
            )
        evaluations += count
        if evaluations == next_checkpoint:
            record()
            next_checkpoint += cfg.checkpoint_every
    if not checkpoints or checkpoints[-1].evaluations != cfg.budget:
        record()
    return RunTrace(checkpoints, grid)
