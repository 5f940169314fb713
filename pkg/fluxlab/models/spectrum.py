"""
Result containers for Harper slices and the butterfly dataset.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..schemas.lattice import FluxRatio


@dataclass(frozen=True, eq=False)
class SpectrumSlice:
    """Energies of one rational flux over the magnetic Brillouin zone.

    ``energies`` holds all ``r * k_samples**2`` eigenvalues sorted ascending.
    ``index_bands`` gives the (lo, hi) range of each of the r Harper
    eigenvalue indices; ``band_edges`` is the merged band union. When two
    bands meet within ``gap_tol`` they stay separate and ``touching`` is set.
    """

    flux: FluxRatio
    energies: np.ndarray
    band_edges: list[tuple[float, float]]
    band_count: int
    index_bands: np.ndarray
    touching: bool = False
    refined: bool = False
    k_samples: int = 64
    gap_tol: float = 1e-3
    J: float = 1.0

    def contains(self, energy: float, tol: float = 1e-8) -> bool:
        """Whether an energy lies inside the band union."""
        return any(lo - tol <= energy <= hi + tol for lo, hi in self.band_edges)

    def bands_frame(self) -> pd.DataFrame:
        rows = [
            {
                "alpha_p": self.flux.p,
                "alpha_r": self.flux.r,
                "alpha": self.flux.value,
                "band": i,
                "lo": lo,
                "hi": hi,
                "touching": int(self.touching),
            }
            for i, (lo, hi) in enumerate(self.band_edges)
        ]
        return pd.DataFrame(rows, columns=["alpha_p", "alpha_r", "alpha", "band", "lo", "hi", "touching"])

    def to_frame(self) -> pd.DataFrame:
        n = self.energies.size
        return pd.DataFrame(
            {
                "alpha_p": np.full(n, self.flux.p, dtype=np.int64),
                "alpha_r": np.full(n, self.flux.r, dtype=np.int64),
                "alpha": np.full(n, self.flux.value),
                "energy_over_J": self.energies / self.J,
            }
        )


@dataclass(frozen=True, eq=False)
class ButterflyDataset:
    """Points (alpha, energy) of every slice, sorted by (alpha, energy)."""

    slices: list[SpectrumSlice]
    r_max: int
    k_samples: int
    alpha_p: np.ndarray = field(repr=False)
    alpha_r: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    energy: np.ndarray = field(repr=False)

    @classmethod
    def from_slices(cls, slices: list[SpectrumSlice], r_max: int, k_samples: int) -> "ButterflyDataset":
        frames = [s.to_frame() for s in slices]
        if frames:
            frame = pd.concat(frames, ignore_index=True)
        else:
            frame = pd.DataFrame(columns=["alpha_p", "alpha_r", "alpha", "energy_over_J"])
        order = np.lexsort((frame["energy_over_J"].to_numpy(), frame["alpha"].to_numpy()))
        frame = frame.iloc[order]
        return cls(
            slices=list(slices),
            r_max=r_max,
            k_samples=k_samples,
            alpha_p=frame["alpha_p"].to_numpy(dtype=np.int64),
            alpha_r=frame["alpha_r"].to_numpy(dtype=np.int64),
            alpha=frame["alpha"].to_numpy(dtype=float),
            energy=frame["energy_over_J"].to_numpy(dtype=float),
        )

    @property
    def points(self) -> np.ndarray:
        """(N, 2) array of (alpha, energy/J)."""
        return np.column_stack([self.alpha, self.energy])

    def __len__(self) -> int:
        return int(self.energy.size)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "alpha_p": self.alpha_p,
                "alpha_r": self.alpha_r,
                "alpha": self.alpha,
                "energy_over_J": self.energy,
            }
        )

    def bands_frame(self) -> pd.DataFrame:
        return pd.concat([s.bands_frame() for s in self.slices], ignore_index=True)
