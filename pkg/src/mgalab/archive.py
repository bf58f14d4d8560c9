"""Solution records and the deduplicating archive."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEDUP_TOL = 1e-6


@dataclass
class SolutionRecord:
    values: np.ndarray  # full decision vector
    point: np.ndarray  # projection onto the MGA variables
    cost: float  # budget-row value
    objective: "object | None" = None  # ObjectiveVector that produced it
    iteration: int = 0
    formulate_ns: int = 0
    solve_ns: int = 0
    wall_ns: int = 0
    unique: bool = False
    tag: str = ""


@dataclass
class SolutionArchive:
    """Ordered solutions with L-inf uniqueness on the MGA projection.

    ``base`` is the least-cost solution; it takes part in hull and count
    computations but uniqueness is judged among ``records`` only, so the
    first alternative is always new.
    """

    dedup_tol: float = DEDUP_TOL
    base: SolutionRecord | None = None
    records: list[SolutionRecord] = field(default_factory=list)
    _unique: list[np.ndarray] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self.dedup_tol > 0:
            raise ValueError("dedup_tol must be > 0")

    def set_base(self, record: SolutionRecord) -> None:
        self.base = record

    def is_new(self, point: np.ndarray) -> bool:
        if not self._unique:
            return True
        u = np.asarray(self._unique)
        return bool(np.all(np.max(np.abs(u - point), axis=1) > self.dedup_tol))

    def add(self, record: SolutionRecord) -> bool:
        record.unique = self.is_new(record.point)
        if record.unique:
            self._unique.append(np.asarray(record.point, dtype=float))
        self.records.append(record)
        return record.unique

    def __len__(self) -> int:
        return len(self.records)

    @property
    def unique_count(self) -> int:
        return len(self._unique)

    def unique_points(self) -> np.ndarray:
        return np.array(self._unique)

    def all_points(self) -> np.ndarray:
        """Base point followed by every record's projection (duplicates kept)."""
        pts = ([self.base.point] if self.base is not None else []) + [r.point for r in self.records]
        return np.array(pts, dtype=float)

    def distinct_points(self) -> np.ndarray:
        """Base plus unique points, deduplicated."""
        pts = self.all_points()
        if len(pts) == 0:
            return pts
        keep: list[np.ndarray] = []
        for p in pts:
            if not keep or np.all(np.max(np.abs(np.asarray(keep) - p), axis=1) > self.dedup_tol):
                keep.append(p)
        return np.array(keep)
