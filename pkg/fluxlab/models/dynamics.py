"""
Wave states and density time series.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from ..schemas.lattice import FluxRatio, LatticeSpec


@dataclass(frozen=True, eq=False)
class WaveState:
    """Single-particle amplitudes on the lattice at a time in units of 1/J."""

    spec: LatticeSpec
    amplitudes: np.ndarray
    time: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def density(self) -> np.ndarray:
        """|psi|^2 as an (n_y, n_x) array indexed [m, n]."""
        return (np.abs(self.amplitudes) ** 2).reshape(self.spec.n_y, self.spec.n_x)


@dataclass(frozen=True)
class PeriodDetection:
    """Outcome of period detection; ``period`` is None for an aperiodic profile."""

    period: Optional[int]
    correlations: np.ndarray = field(repr=False, compare=False)

    @property
    def aperiodic(self) -> bool:
        return self.period is None


@dataclass(frozen=True, eq=False)
class DensityProfile:
    """x-averaged density n(y, t) sampled at ``times``.

    ``density[t, m]`` sums |psi|^2 over n, so each row sums to one.
    ``x_residual[t]`` is the largest spread of the density along x within
    a row, which vanishes for an x-translation invariant state.
    """

    spec: LatticeSpec
    flux: FluxRatio
    times: np.ndarray
    density: np.ndarray
    x_residual: np.ndarray
    norms: np.ndarray
    energies: np.ndarray
    method: str = "spectral"

    def at(self, t: float) -> np.ndarray:
        """Profile at the sample closest to ``t``."""
        return self.density[int(np.argmin(np.abs(self.times - t)))]

    def to_frame(self) -> pd.DataFrame:
        n_t, n_m = self.density.shape
        return pd.DataFrame(
            {
                "t": np.repeat(self.times, n_m),
                "m": np.tile(np.arange(n_m, dtype=np.int64), n_t),
                "density": self.density.ravel(),
            }
        )
