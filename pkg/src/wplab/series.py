"""Uniformly sampled scalar time series."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    """A real scalar sequence sampled every ``dt`` time units.

    ``values`` is stored as a read-only float64 array; ``meta`` carries
    the model parameters the series was generated with (free-form).
    """

    dt: float
    values: np.ndarray
    observable: str = ""
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(v)):
            raise ValueError("series values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.shape[0]

    def with_values(self, values: np.ndarray) -> "TimeSeries":
        """Same sampling and metadata, different payload."""
        return TimeSeries(self.dt, values, self.observable, dict(self.meta))
