"""Oracle reference grids and local/global reliability scoring."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .archive import Elite, Grid
from .mapelites import RunConfig, RunTrace, run
from .objective import RASTRIGIN_A, domain_bounds


@dataclass
class ReferenceGrid:
    """Oracle grid with the cached statistics the scoring rules need."""

    grid: Grid
    m_max: float
    n_filled: int
    provenance: str  # "analytic" | "from-run" | "loaded"


@dataclass
class ReliabilityReport:
    """Per-bin local reliabilities plus their average over the reference support."""

    local: np.ndarray
    global_reliability: float


def marginal_bin_minima(
    bins_per_feature: int, samples_per_bin: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-bin minima and argmins of the 1-D marginal x^2 + A - A*cos(2*pi*x).

    Each bin is sampled at samples_per_bin equidistant points starting at
    its left edge and excluding the right edge, except the last bin which
    spans up to and including the upper bound.
    """
    if bins_per_feature < 1:
        raise ValueError("bins_per_feature must be >= 1")
    if samples_per_bin < 2:
        raise ValueError("samples_per_bin must be >= 2")
    lo, hi = domain_bounds()
    width = (hi - lo) / bins_per_feature
    minima = np.empty(bins_per_feature)
    argmins = np.empty(bins_per_feature)
    for i in range(bins_per_feature):
        left = lo + i * width
        if i == bins_per_feature - 1:
            xs = np.linspace(left, hi, samples_per_bin)
        else:
            xs = left + np.arange(samples_per_bin) * (width / samples_per_bin)
        values = xs * xs + RASTRIGIN_A - RASTRIGIN_A * np.cos(2.0 * np.pi * xs)
        k = int(np.argmin(values))
        minima[i] = values[k]
        argmins[i] = xs[k]
    return minima, argmins


def build_reference_analytic(
    bins_per_feature: int = 64, samples_per_bin: int = 10_000
) -> ReferenceGrid:
    """Oracle grid from the separable structure of the landscape.

    The 2-D bin optimum decomposes into independent per-axis problems, so
    each oracle cell (i, j) gets fitness m1(i) + m1(j) from the marginal
    bin minima, with the corresponding 2-D argmin point as its genome.
    """
    minima, argmins = marginal_bin_minima(bins_per_feature, samples_per_bin)
    grid = Grid(bins_per_feature)
    for i in range(bins_per_feature):
        for j in range(bins_per_feature):
            genome = np.array([argmins[i], argmins[j]])
            grid.insert(
                Elite(genome, float(minima[i] + minima[j]), (genome[0], genome[1]))
            )
    return ReferenceGrid(grid, grid.max_quality(), grid.fill_count, "analytic")


def build_reference_from_run(cfg: RunConfig) -> ReferenceGrid:
    """Oracle grid produced by an actual 2-D illumination run."""
    if cfg.dimensions != 2:
        raise ValueError("a run-based reference must illuminate 2 dimensions")
    trace = run(cfg)
    if trace.final_grid.fill_count == 0:
        raise ValueError("degenerate reference: the run left the grid empty")
    return reference_from_grid(trace.final_grid, "from-run")


def reference_from_grid(grid: Grid, provenance: str = "loaded") -> ReferenceGrid:
    """Wrap an existing grid (e.g. loaded from a dump) as a reference."""
    if grid.fill_count == 0:
        raise ValueError("degenerate reference: grid is empty")
    return ReferenceGrid(grid, grid.max_quality(), grid.fill_count, provenance)


def _score(m_max: float, ref_value: float, cand_value: float) -> float:
    denom = m_max - ref_value
    if denom <= 0.0:
        # worst oracle bin: the ratio is undefined, match-or-beat counts as 1
        return 1.0 if cand_value <= ref_value else 0.0
    return max((m_max - cand_value) / denom, 0.0)


def local_reliability(ref: ReferenceGrid, grid: Grid, x: int, y: int) -> float:
    """How close the candidate bin (x, y) is to the oracle value, 0 if either is unfilled.

    Not clamped above 1: a candidate may legitimately beat a run-based
    oracle bin.
    """
    ref_elite = ref.grid.elite_at(x, y)
    cand_elite = grid.elite_at(x, y)
    if ref_elite is None or cand_elite is None:
        return 0.0
    return _score(ref.m_max, ref_elite.fitness, cand_elite.fitness)


def _local_matrix(
    ref_fitness: np.ndarray, m_max: float, cand_fitness: np.ndarray
) -> np.ndarray:
    if ref_fitness.shape != cand_fitness.shape:
        raise ValueError(
            f"grid shapes differ: {ref_fitness.shape} vs {cand_fitness.shape}"
        )
    out = np.zeros(ref_fitness.shape)
    both = ~np.isnan(ref_fitness) & ~np.isnan(cand_fitness)
    denom = m_max - ref_fitness
    normal = both & (denom > 0.0)
    out[normal] = np.maximum((m_max - cand_fitness[normal]) / denom[normal], 0.0)
    degenerate = both & ~(denom > 0.0)
    out[degenerate] = (cand_fitness[degenerate] <= ref_fitness[degenerate]).astype(float)
    return out


def local_reliability_matrix(ref: ReferenceGrid, cand_fitness: np.ndarray) -> np.ndarray:
    """Local reliabilities for a whole fitness surface (NaN = unfilled bin)."""
    return _local_matrix(ref.grid.fitness_matrix(), ref.m_max, cand_fitness)


def global_reliability(ref: ReferenceGrid, grid: Grid) -> ReliabilityReport:
    """Score every bin and average over the reference's filled-bin count.

    Candidate bins outside the reference support contribute 0 and do not
    enlarge the denominator.
    """
    local = local_reliability_matrix(ref, grid.fitness_matrix())
    return ReliabilityReport(local, float(local.sum()) / ref.n_filled)


def reliability_series(ref: ReferenceGrid, trace: RunTrace) -> list[tuple[int, float]]:
    """Global reliability at every checkpoint of a run trace, in order."""
    if not trace.checkpoints:
        raise ValueError("trace has no checkpoints")
    ref_fitness = ref.grid.fitness_matrix()
    return [
        (
            cp.evaluations,
            float(_local_matrix(ref_fitness, ref.m_max, cp.fitness).sum()) / ref.n_filled,
        )
        for cp in trace.checkpoints
    ]
