"""
Lowest band of the 1D sinusoidal lattice, its Wannier function and the
overlap integrals that calibrate laser-assisted hopping.

Energies are in units of the recoil energy E_R, lengths in units of the
lattice wavelength lambda (k = 2 pi / lambda), quasimomenta in units of k.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import curve_fit

from ..config import settings
from ..exceptions import DomainError
from ..models.bands import BandSolution, EffectiveHopping, WannierFunction

logger = logging.getLogger(__name__)

DEFAULT_PLANEWAVES = 41
DEFAULT_QUASIMOMENTA = 64
GRID_POINTS = 1024
GRID_PERIODS = 8
LATTICE_PERIOD = 0.5
SUBLATTICE_SHIFT = 0.25
SHALLOW_DEPTH = 5.0
ACCURACY_TOL = 1e-8
# validity of the laser-assisted scheme: Omega << Delta << nu_x by a factor 10
SCALE_SEPARATION = 10.0


def _lowest_state(q: float, depth: float, harmonics: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the central equation at quasimomentum q."""
    diagonal = (q + 2.0 * harmonics) ** 2
    off_diagonal = np.full(harmonics.size - 1, -depth / 4.0)
    energy, vector = eigh_tridiagonal(diagonal, off_diagonal, select="i", select_range=(0, 0))
    vector = vector[:, 0]
    if vector.sum() < 0:
        vector = -vector
    return float(energy[0]) + depth / 2.0, vector


def _harmonics(n_planewaves: int) -> np.ndarray:
    half = n_planewaves // 2
    return np.arange(-half, half + 1)


def solve_bands_1d(
    depth: float,
    n_planewaves: int = DEFAULT_PLANEWAVES,
    n_quasimomenta: int = DEFAULT_QUASIMOMENTA,
) -> BandSolution:
    """Lowest Bloch band of ``V(x) = depth * sin^2(k x)`` by plane-wave diagonalisation.

    Quasimomenta form a uniform grid on [-1, 1). Each Bloch function is
    phased real positive at x = 0. The band is re-solved at the zone centre
    and edge with ten more plane waves; a shift above 1e-8 E_R marks the
    solution as not converged and logs a warning.

    Args:
        depth: Lattice depth V0 in units of E_R.
        n_planewaves: Odd plane-wave cutoff, at least 11.
        n_quasimomenta: Number of quasimomenta.

    Returns:
        The lowest band with its plane-wave coefficients.

    Raises:
        DomainError: On a negative depth or an invalid basis size.
    """
    if depth < 0:
        raise DomainError(f"lattice depth must be non-negative, got {depth}")
    if n_planewaves < 11 or n_planewaves % 2 == 0:
        raise DomainError(f"n_planewaves must be odd and at least 11, got {n_planewaves}")
    if n_quasimomenta < 2:
        raise DomainError(f"n_quasimomenta must be at least 2, got {n_quasimomenta}")

    harmonics = _harmonics(n_planewaves)
    quasimomenta = -1.0 + 2.0 * np.arange(n_quasimomenta) / n_quasimomenta
    energies = np.empty(n_quasimomenta)
    coefficients = np.empty((n_quasimomenta, n_planewaves))
    for i, q in enumerate(quasimomenta):
        energies[i], coefficients[i] = _lowest_state(q, depth, harmonics)

    wider = _harmonics(n_planewaves + 10)
    shift = max(
        abs(_lowest_state(q, depth, wider)[0] - _lowest_state(q, depth, harmonics)[0]) for q in (0.0, -1.0)
    )
    converged = shift <= ACCURACY_TOL
    if not converged:
        logger.warning(
            f"Plane-wave basis of {n_planewaves} shifts band edges by {shift:.3g} E_R at depth {depth}"
        )
    return BandSolution(
        depth=depth,
        n_planewaves=n_planewaves,
        quasimomenta=quasimomenta,
        band0_energies=energies,
        coefficients=coefficients,
        converged=converged,
    )


def wannier(
    solution: BandSolution, grid_points: int = GRID_POINTS, n_periods: int = GRID_PERIODS
) -> WannierFunction:
    """Lowest-band Wannier function centred at x = 0.

    ``w(x) = N^-1 sum_q psi_q(x)`` sampled on ``grid_points`` points over
    ``n_periods`` lattice periods and normalised on that grid.
    """
    extent = n_periods * LATTICE_PERIOD
    spacing = extent / grid_points
    grid = (np.arange(grid_points) - grid_points // 2) * spacing
    raw = WannierFunction(
        depth=solution.depth,
        grid=grid,
        values=np.zeros(grid_points),
        quasimomenta=solution.quasimomenta,
        coefficients=solution.coefficients,
        harmonics=solution.harmonics,
    )
    unscaled = raw.evaluate(grid)
    scale = 1.0 / np.sqrt(np.sum(unscaled**2) * spacing)
    return WannierFunction(
        depth=solution.depth,
        grid=grid,
        values=unscaled * scale,
        quasimomenta=solution.quasimomenta,
        coefficients=solution.coefficients,
        harmonics=solution.harmonics,
        scale=scale,
    )


@lru_cache(maxsize=128)
def wannier_for_depth(
    depth: float,
    n_planewaves: int = DEFAULT_PLANEWAVES,
    n_quasimomenta: int = DEFAULT_QUASIMOMENTA,
) -> WannierFunction:
    """Cached Wannier function of a lattice depth."""
    return wannier(solve_bands_1d(depth, n_planewaves, n_quasimomenta))


def wannier_overlap(w: WannierFunction, shift: float) -> float:
    """Overlap of w with its copy displaced by ``shift`` (units of lambda)."""
    return float(np.sum(w.values * w.evaluate(w.grid - shift)) * w.spacing)


def wannier_width(w: WannierFunction) -> float:
    """Width sigma of a Gaussian ``A exp(-x^2 / (2 sigma^2))`` fitted to the central well."""
    mask = np.abs(w.grid) <= SUBLATTICE_SHIFT

    def gaussian(x, amplitude, sigma):
        return amplitude * np.exp(-(x**2) / (2.0 * sigma**2))

    (_, sigma), _ = curve_fit(gaussian, w.grid[mask], w.values[mask], p0=(float(w.values.max()), 0.1))
    return abs(float(sigma))


def _cosine_moment(w: WannierFunction, alpha: float) -> float:
    return float(np.sum(w.values**2 * np.cos(4.0 * np.pi * alpha * w.grid)) * w.spacing)


def gamma_x(depth: float, n_planewaves: int = DEFAULT_PLANEWAVES) -> float:
    """Overlap of neighbouring |e> and |g> wells, a quarter wavelength apart.

    Raises:
        DomainError: If depth is not positive.
    """
    if depth <= 0:
        raise DomainError(f"gamma_x needs a positive depth, got {depth}")
    return wannier_overlap(wannier_for_depth(float(depth), n_planewaves), SUBLATTICE_SHIFT)


def gamma_y(depth: float, alpha: float, n_planewaves: int = DEFAULT_PLANEWAVES) -> float:
    """Cosine-weighted density ``int |w(y)|^2 cos(4 pi alpha y / lambda) dy``.

    Raises:
        DomainError: If depth is not positive.
    """
    if depth <= 0:
        raise DomainError(f"gamma_y needs a positive depth, got {depth}")
    return _cosine_moment(wannier_for_depth(float(depth), n_planewaves), alpha)


def hopping_J(solution: BandSolution, method: str = "bandwidth") -> float:
    """Nearest-neighbour hopping of the lowest band in units of E_R.

    ``"bandwidth"`` returns a quarter of the band width; ``"fourier"`` returns
    the magnitude of the first Fourier coefficient of the band. Depths below
    5 E_R are outside the tight-binding regime and log a warning.
    """
    if solution.depth < SHALLOW_DEPTH:
        logger.warning(f"Depth {solution.depth} E_R is shallow; tight-binding J is ill-defined")
    if method == "bandwidth":
        return solution.bandwidth / 4.0
    if method == "fourier":
        # eps(q) = E0 - 2 J cos(pi q) - ...
        first = 2.0 * np.mean(solution.band0_energies * np.cos(np.pi * solution.quasimomenta))
        return abs(float(first)) / 2.0
    raise DomainError(f"unknown hopping extraction method {method!r}")


def effective_jx(
    Omega: float,
    depth_x: float,
    depth_y: float,
    alpha: float,
    Delta: Optional[float] = None,
) -> EffectiveHopping:
    """Laser-assisted hopping ``J_x = Omega * gamma_x * gamma_y / 2``.

    With ``Delta`` given, the hierarchy Omega << Delta << nu_x is checked as
    ``Omega < Delta / 10`` and ``Delta < nu_x / 10`` with
    ``nu_x = 2 sqrt(depth_x) E_R``. Omega, Delta and the result share the
    energy unit E_R.

    Raises:
        DomainError: If Omega is negative.
    """
    if Omega < 0:
        raise DomainError(f"Rabi frequency must be non-negative, got {Omega}")
    gx = gamma_x(depth_x)
    gy = gamma_y(depth_y, alpha)
    omega_ok = delta_ok = None
    if Delta is not None:
        nu_x = 2.0 * math.sqrt(depth_x)
        omega_ok = bool(Omega < Delta / SCALE_SEPARATION)
        delta_ok = bool(Delta < nu_x / SCALE_SEPARATION)
        if not (omega_ok and delta_ok):
            logger.warning(
                f"Laser-assisted hopping outside Omega << Delta << nu_x: "
                f"Omega={Omega}, Delta={Delta}, nu_x={nu_x:.4g}"
            )
    return EffectiveHopping(
        jx=Omega * gx * gy / 2.0,
        gamma_x=gx,
        gamma_y=gy,
        omega_below_delta=omega_ok,
        delta_below_nu=delta_ok,
    )


def omega_for_target_jx(target_jx: float, depth_x: float, depth_y: float, alpha: float) -> float:
    """Rabi frequency giving ``J_x = target_jx``.

    Raises:
        DomainError: If gamma_x * gamma_y is not positive.
    """
    product = gamma_x(depth_x) * gamma_y(depth_y, alpha)
    if product <= 0:
        raise DomainError(f"gamma_x * gamma_y = {product:.4g} leaves no positive Rabi frequency")
    return 2.0 * target_jx / product


def calibration_table(
    depths: Sequence[float],
    alphas: Sequence[float],
    n_planewaves: int = DEFAULT_PLANEWAVES,
    n_quasimomenta: int = DEFAULT_QUASIMOMENTA,
    parallelism: Optional[int] = None,
) -> pd.DataFrame:
    """gamma_x, gamma_y and J over a grid of depths and fluxes.

    Returns:
        Frame with columns ``depth, alpha, gamma_x, gamma_y, J_over_ER``, one
        row per (depth, alpha) in input order.
    """
    parallelism = settings.parallelism if parallelism is None else parallelism
    depths = [float(d) for d in depths]
    alphas = [float(a) for a in alphas]

    def rows_for(depth: float) -> list[dict]:
        solution = solve_bands_1d(depth, n_planewaves, n_quasimomenta)
        w = wannier_for_depth(depth, n_planewaves, n_quasimomenta)
        gx = wannier_overlap(w, SUBLATTICE_SHIFT)
        J = hopping_J(solution)
        return [
            {
                "depth": depth,
                "alpha": alpha,
                "gamma_x": gx,
                "gamma_y": _cosine_moment(w, alpha),
                "J_over_ER": J,
            }
            for alpha in alphas
        ]

    logger.info(f"Calibrating {len(depths)} depth(s) x {len(alphas)} flux value(s)")
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as executor:
        blocks = list(executor.map(rows_for, depths))
    return pd.DataFrame(
        [row for block in blocks for row in block],
        columns=["depth", "alpha", "gamma_x", "gamma_y", "J_over_ER"],
    )
