"""Time grids and sampled paths, plus their ``t,value`` CSV form."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import DomainError

GRID_RTOL = 1e-12


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[0, horizon]`` with ``steps`` intervals."""

    horizon: float
    steps: int

    def __post_init__(self):
        if not (np.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise DomainError(f"steps must be a positive integer, got {self.steps}")

    @property
    def dt(self) -> float:
        return self.horizon / self.steps

    def times(self) -> np.ndarray:
        return np.arange(self.steps + 1) * self.dt

    @classmethod
    def from_step(cls, horizon: float, dt: float) -> "GridSpec":
        """Grid with step ``dt``; ``horizon / dt`` must be an integer up to 1e-9."""
        if dt <= 0:
            raise DomainError(f"step must be positive, got {dt}")
        ratio = horizon / dt
        steps = int(round(ratio))
        if steps < 1 or abs(ratio - steps) > 1e-9 * max(1.0, ratio):
            raise DomainError(f"horizon {horizon} is not a multiple of step {dt}")
        return cls(horizon, steps)


@dataclass
class PathSample:
    """Values of a process on a grid, with the seed that produced it.

    ``params`` holds the model parameters (an ``ou_sim.ModelParams``) for
    OU and xi paths and is ``None`` for plain fBm paths.
    """

    times: np.ndarray
    values: np.ndarray
    params: Optional[Any] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise DomainError("times and values must be 1-D arrays of equal length")
        if len(self.times) == 0:
            raise DomainError("empty path")
        if self.times[0] != 0.0:
            raise DomainError(f"paths start at t=0, got t0={self.times[0]}")
        if np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def uniform_step(self) -> float:
        """Common step of the grid; raises ``DomainError`` if the grid is not uniform."""
        if len(self.times) < 2:
            raise DomainError("need at least two points for a grid step")
        steps = np.diff(self.times)
        dt = self.horizon / (len(self.times) - 1)
        # Rows written with repr() round-trip exactly; allow for accumulated k*dt rounding.
        if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, 1.0):
            raise DomainError("grid is not uniform")
        return dt

    def to_csv(self, dest=None) -> Optional[str]:
        """Write ``t,value`` rows. With ``dest=None`` the CSV text is returned."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "value"])
        for t, v in zip(self.times.tolist(), self.values.tolist()):
            writer.writerow([repr(t), repr(v)])
        text = buf.getvalue()
        if dest is None:
            return text
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        return None

    @classmethod
    def from_csv(cls, source) -> "PathSample":
        """Read a ``t,value`` CSV from a path, file object or text."""
        if hasattr(source, "read"):
            text = source.read()
        elif isinstance(source, (str, os.PathLike)) and os.path.exists(source):
            with open(source, newline="") as fh:
                text = fh.read()
        else:
            raise DomainError(f"cannot read path CSV from {source!r}")
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["t", "value"]:
            raise DomainError("path CSV must start with the header 't,value'")
        times, values = [], []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DomainError(f"line {lineno}: expected 2 columns, got {len(row)}")
            try:
                times.append(float(row[0]))
                values.append(float(row[1]))
            except ValueError as exc:
                raise DomainError(f"line {lineno}: {exc}") from None
        if not times:
            raise DomainError("path CSV has no data rows")
        arr = np.asarray(values)
        if not np.all(np.isfinite(arr)):
            raise DomainError("path CSV contains non-finite values")
        return cls(np.asarray(times), arr)
