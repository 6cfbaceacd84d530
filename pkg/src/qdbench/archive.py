"""Feature-space grid archive: one elite per bin, replaced only on improvement."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .objective import domain_bounds


@dataclass
class Elite:
    """A stored solution with its cached fitness and feature descriptor."""

    genome: np.ndarray
    fitness: float
    features: tuple[float, float]


class InsertOutcome(Enum):
    FILLED = "filled-empty-bin"
    REPLACED = "replaced-worse"
    REJECTED = "rejected"


class Grid:
    """Square grid over the 2-D feature space, minimisation order.

    Bin intervals are half-open [edge, edge + width), except the last bin
    on each axis which closes at the upper bound, so every in-domain
    feature value maps to exactly one bin.
    """

    def __init__(
        self,
        bins_per_feature: int = 64,
        feature_bounds: tuple[float, float] | None = None,
    ):
        if bins_per_feature < 1:
            raise ValueError("bins_per_feature must be >= 1")
        lo, hi = feature_bounds if feature_bounds is not None else domain_bounds()
        if not hi > lo:
            raise ValueError("feature bounds must satisfy lower < upper")
        self.bins_per_feature = int(bins_per_feature)
        self.feature_bounds = (float(lo), float(hi))
        self.bin_width = (hi - lo) / self.bins_per_feature
        self._cells: dict[tuple[int, int], Elite] = {}
        self._occupied: list[tuple[int, int]] = []

    @property
    def fill_count(self) -> int:
        return len(self._cells)

    def _axis_index(self, value: float) -> int:
        lo, hi = self.feature_bounds
        if not lo <= value <= hi:
            raise ValueError(f"feature {value!r} outside [{lo}, {hi}]")
        i = min(
            math.floor((value - lo) / self.bin_width), self.bins_per_feature - 1
        )
        # snap to the authoritative edges lo + k*width: the division above can
        # land one bin off when value sits exactly on a rounded edge
        if i + 1 < self.bins_per_feature and value >= lo + (i + 1) * self.bin_width:
            i += 1
        elif i > 0 and value < lo + i * self.bin_width:
            i -= 1
        return i

    def bin_index(self, features) -> tuple[int, int]:
        """Map a feature pair to its (bin_x, bin_y) cell."""
        f0, f1 = features
        return (self._axis_index(float(f0)), self._axis_index(float(f1)))

    def insert(self, elite: Elite) -> InsertOutcome:
        """Store `elite` if its bin is empty or strictly improved; ties keep the incumbent."""
        key = self.bin_index(elite.features)
        incumbent = self._cells.get(key)
        if incumbent is None:
            self._cells[key] = elite
            self._occupied.append(key)
            return InsertOutcome.FILLED
        if elite.fitness < incumbent.fitness:
            self._cells[key] = elite
            return InsertOutcome.REPLACED
        return InsertOutcome.REJECTED

    def elite_at(self, i: int, j: int) -> Elite | None:
        b = self.bins_per_feature
        if not (0 <= i < b and 0 <= j < b):
            raise IndexError(f"bin ({i}, {j}) outside {b}x{b} grid")
        return self._cells.get((i, j))

    def occupied_items(self):
        """Iterate ((bin_x, bin_y), elite) pairs in insertion order."""
        return self._cells.items()

    def coverage(self) -> float:
        return self.fill_count / self.bins_per_feature**2

    def max_quality(self) -> float:
        """Largest (worst, under minimisation) fitness among occupied bins."""
        if not self._cells:
            raise ValueError("max_quality of an empty grid")
        return max(e.fitness for e in self._cells.values())

    def random_elite(self, rng) -> Elite:
        """One elite chosen uniformly among occupied bins."""
        if not self._occupied:
            raise ValueError("cannot select from an empty grid")
        return self._cells[self._occupied[int(rng.integers(0, len(self._occupied)))]]

    def random_elites(self, rng, count: int) -> list[Elite]:
        """`count` elites drawn uniformly (with replacement) among occupied bins."""
        if not self._occupied:
            raise ValueError("cannot select from an empty grid")
        picks = rng.integers(0, len(self._occupied), size=count)
        return [self._cells[self._occupied[int(k)]] for k in picks]

    def fitness_matrix(self) -> np.ndarray:
        """(bins, bins) array of per-bin fitness, NaN where unfilled."""
        m = np.full((self.bins_per_feature, self.bins_per_feature), np.nan)
        for (i, j), elite in self._cells.items():
            m[i, j] = elite.fitness
        return m

    def to_csv_text(self) -> str:
        """Grid dump: rows sorted by bin, floats at 17 significant digits."""
        keys = sorted(self._cells)
        if keys:
            n = len(self._cells[keys[0]].genome)
            header = "bin_x,bin_y,fitness," + ",".join(f"g{k}" for k in range(n))
        else:
            header = "bin_x,bin_y,fitness"
        lines = [header]
        for i, j in keys:
            elite = self._cells[(i, j)]
            values = [f"{elite.fitness:.17g}"] + [f"{g:.17g}" for g in elite.genome]
            lines.append(f"{i},{j}," + ",".join(values))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text())

    @classmethod
    def from_csv(
        cls,
        path,
        bins_per_feature: int = 64,
        feature_bounds: tuple[float, float] | None = None,
    ) -> "Grid":
        """Rebuild a grid from a dump, verifying each row's bin assignment."""
        grid = cls(bins_per_feature, feature_bounds)
        lines = Path(path).read_text().splitlines()
        if not lines or not lines[0].startswith("bin_x,bin_y,fitness"):
            raise ValueError(f"{path}: not a grid dump")
        for lineno, line in enumerate(lines[1:], start=2):
            parts = line.split(",")
            if len(parts) < 5:
                raise ValueError(f"{path}:{lineno}: expected bin_x,bin_y,fitness,g0,g1,...")
            i, j = int(parts[0]), int(parts[1])
            fitness = float(parts[2])
            genome = np.array([float(v) for v in parts[3:]])
            elite = Elite(genome, fitness, (float(genome[0]), float(genome[1])))
            if grid.bin_index(elite.features) != (i, j):
                raise ValueError(
                    f"{path}:{lineno}: features do not map to bin ({i}, {j}); "
                    "wrong bins_per_feature?"
                )
            grid.insert(elite)
        return grid
