"""
Gutzwiller mean-field state.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from ..schemas.lattice import LatticeSpec

# sigma2 is defined as 0 on empty sites
EMPTY_SITE = 1e-12


def local_moments(coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-site <a>, <n> and <n^2> from Fock amplitudes of shape (sites, n_max + 1)."""
    coeffs = np.atleast_2d(coeffs)
    n = np.arange(coeffs.shape[1], dtype=float)
    weights = np.abs(coeffs) ** 2
    mean_n = weights @ n
    mean_n2 = weights @ (n**2)
    phi = np.sum(np.sqrt(n[1:]) * np.conj(coeffs[:, :-1]) * coeffs[:, 1:], axis=1)
    return phi, mean_n, mean_n2


def number_fluctuations(mean_n: np.ndarray, mean_n2: np.ndarray) -> np.ndarray:
    """Normalised fluctuations (<n^2> - <n>^2) / <n>, zero on empty sites."""
    sigma2 = np.zeros_like(mean_n)
    occupied = mean_n >= EMPTY_SITE
    sigma2[occupied] = (mean_n2[occupied] - mean_n[occupied] ** 2) / mean_n[occupied]
    return sigma2


@dataclass(frozen=True, eq=False)
class GutzwillerState:
    """Product state of per-site Fock superpositions.

    ``coeffs[i, n]`` is the amplitude of n bosons on site i (row-major site
    index). ``phi``, ``mean_n`` and ``sigma2`` are derived from ``coeffs``.
    """

    spec: LatticeSpec
    n_max: int
    coeffs: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    mean_n: np.ndarray = field(repr=False)
    sigma2: np.ndarray = field(repr=False)
    energy: float = float("nan")
    energy_history: list[float] = field(default_factory=list, repr=False)
    converged: bool = False
    residual: float = float("inf")
    sweeps: int = 0
    cutoff_warning: bool = False
    alpha: Optional[float] = None

    @classmethod
    def from_coeffs(cls, spec: LatticeSpec, coeffs: np.ndarray, **kwargs) -> "GutzwillerState":
        coeffs = np.asarray(coeffs, dtype=np.complex128).reshape(spec.dim, -1)
        phi, mean_n, mean_n2 = local_moments(coeffs)
        return cls(
            spec=spec,
            n_max=coeffs.shape[1] - 1,
            coeffs=coeffs,
            phi=phi,
            mean_n=mean_n,
            sigma2=number_fluctuations(mean_n, mean_n2),
            **kwargs,
        )

    def as_map(self, values: np.ndarray) -> np.ndarray:
        """Reshape a per-site vector to an (n_y, n_x) map indexed [m, n]."""
        return np.asarray(values).reshape(self.spec.n_y, self.spec.n_x)

    @property
    def total_n(self) -> float:
        return float(self.mean_n.sum())

    def to_frame(self) -> pd.DataFrame:
        index = np.arange(self.spec.dim)
        return pd.DataFrame(
            {
                "n": index % self.spec.n_x,
                "m": index // self.spec.n_x,
                "abs_phi": np.abs(self.phi),
                "sigma2": self.sigma2,
                "mean_n": self.mean_n,
            }
        )


@dataclass(frozen=True)
class GutzwillerObservables:
    """Maps indexed [m, n] plus lattice totals."""

    phi: np.ndarray = field(repr=False)
    sigma2: np.ndarray = field(repr=False)
    mean_n: np.ndarray = field(repr=False)
    total_n: float = 0.0
    energy: float = float("nan")
