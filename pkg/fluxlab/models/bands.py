"""
Lowest-band solutions of the 1D sinusoidal lattice and their Wannier functions.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class BandSolution:
    """Lowest band of ``V(x) = depth * sin^2(k x)`` in recoil units.

    Quasimomenta are in units of k and lie in [-1, 1). ``coefficients[i, j]``
    is the amplitude of the plane wave ``exp(i (q_i + 2 j) k x)`` with
    ``j = -N..N``, phased so that every Bloch function is real positive at
    x = 0.
    """

    depth: float
    n_planewaves: int
    quasimomenta: np.ndarray
    band0_energies: np.ndarray
    coefficients: np.ndarray = field(repr=False)
    converged: bool = True
    phase_convention: str = "psi_q(0) real positive"

    @property
    def bandwidth(self) -> float:
        return float(self.band0_energies.max() - self.band0_energies.min())

    @property
    def harmonics(self) -> np.ndarray:
        half = self.n_planewaves // 2
        return np.arange(-half, half + 1)


@dataclass(frozen=True, eq=False)
class WannierFunction:
    """Real lowest-band Wannier function centred at x = 0, lengths in units of lambda."""

    depth: float
    grid: np.ndarray
    values: np.ndarray
    quasimomenta: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    harmonics: np.ndarray = field(repr=False)
    scale: float = 1.0
    lattice_period: float = 0.5

    @property
    def spacing(self) -> float:
        return float(self.grid[1] - self.grid[0])

    def evaluate(self, x) -> np.ndarray:
        """Evaluate w at arbitrary positions with the normalisation of ``values``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        two_pi_x = 2.0 * np.pi * x
        # sum_j c_{q,j} exp(i 2 j k x), then the exp(i q k x) envelope per q
        harmonic_phase = np.exp(1j * np.outer(two_pi_x, 2.0 * self.harmonics))
        periodic = harmonic_phase @ self.coefficients.T
        envelope = np.exp(1j * np.outer(two_pi_x, self.quasimomenta))
        raw = (periodic * envelope).sum(axis=1) / self.quasimomenta.size
        return raw.real * self.scale

    def norm(self) -> float:
        return float(np.sum(self.values**2) * self.spacing)


@dataclass(frozen=True)
class EffectiveHopping:
    """Laser-assisted hopping J_x with the validity flags of the scheme.

    Flags are None when the detuning was not supplied.
    """

    jx: float
    gamma_x: float
    gamma_y: float
    omega_below_delta: Optional[bool] = None
    delta_below_nu: Optional[bool] = None

    @property
    def valid(self) -> bool:
        return all(flag is None or bool(flag) for flag in (self.omega_below_delta, self.delta_below_nu))
