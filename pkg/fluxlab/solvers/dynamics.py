"""
Single-particle propagation and density-profile analysis.

States evolve under ``exp(-i H t)`` with H in units of J and t in units of
1/J. Small operators use their cached eigensystem; large ones use a
Chebyshev expansion of the propagator.
"""

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.special import jv

from ..config import settings
from ..exceptions import ContractError
from ..models.dynamics import DensityProfile, PeriodDetection, WaveState
from ..models.operator import HermitianOperatorRep
from ..schemas.lattice import FluxRatio, LatticeSpec
from .lattice_core import build_hamiltonian

logger = logging.getLogger(__name__)

PERIOD_THRESHOLD = 0.95


def uniform_initial_state(spec: LatticeSpec) -> WaveState:
    """Equal amplitude ``1/sqrt(n_x n_y)`` on every site at t = 0."""
    amplitudes = np.full(spec.dim, 1.0 / np.sqrt(spec.dim), dtype=np.complex128)
    return WaveState(spec=spec, amplitudes=amplitudes, time=0.0)


def spectral_propagate(op: HermitianOperatorRep, psi: np.ndarray, dt: float) -> np.ndarray:
    energies, vectors = op.eigensystem
    return vectors @ (np.exp(-1j * energies * dt) * (vectors.conj().T @ psi))


def chebyshev_propagate(
    op: HermitianOperatorRep, psi: np.ndarray, dt: float, tol: Optional[float] = None
) -> np.ndarray:
    """Apply ``exp(-i H dt)`` by a Chebyshev expansion.

    H is mapped onto [-1, 1] with its Gershgorin interval. The expansion is
    truncated once the Bessel coefficients fall below ``tol``.
    """
    tol = settings.chebyshev_tol if tol is None else tol
    lo, hi = op.spectral_interval()
    center = 0.5 * (hi + lo)
    half_width = 0.5 * (hi - lo)
    if half_width == 0.0 or dt == 0.0:
        return np.exp(-1j * center * dt) * psi

    full = op.matrix
    z = half_width * dt

    def scaled(v: np.ndarray) -> np.ndarray:
        return (full @ v - center * v) / half_width

    order = int(z) + 20
    while abs(jv(order, z)) > tol * 1e-3 or abs(jv(order + 1, z)) > tol * 1e-3:
        order += 10
    coefficients = jv(np.arange(order + 1), z) * (-1j) ** np.arange(order + 1)
    coefficients[1:] *= 2.0

    previous = psi
    current = scaled(psi)
    result = coefficients[0] * previous + coefficients[1] * current
    for k in range(2, order + 1):
        previous, current = current, 2.0 * scaled(current) - previous
        result = result + coefficients[k] * current
    logger.debug(f"Chebyshev propagation dt={dt} used {order} terms")
    return np.exp(-1j * center * dt) * result


def _resolve_method(op: HermitianOperatorRep, method: str) -> str:
    if method == "auto":
        return "spectral" if op.dim <= settings.spectral_dim_limit else "chebyshev"
    if method not in ("spectral", "chebyshev"):
        raise ContractError(f"unknown propagation method {method!r}")
    return method


def evolve(state: WaveState, op: HermitianOperatorRep, dt: float, method: str = "auto") -> WaveState:
    """Propagate a state by ``dt`` under ``op``.

    Args:
        state: State to propagate.
        op: Hamiltonian on the same lattice.
        dt: Non-negative time step in units of 1/J.
        method: ``"spectral"``, ``"chebyshev"`` or ``"auto"`` (spectral up to
            ``settings.spectral_dim_limit`` sites).

    Returns:
        New state at ``state.time + dt``.

    Raises:
        ContractError: On a dimension mismatch or a negative time step.
    """
    if op.dim != state.amplitudes.size:
        raise ContractError(f"operator dimension {op.dim} != state dimension {state.amplitudes.size}")
    if dt < 0:
        raise ContractError(f"time step must be non-negative, got {dt}")
    if dt == 0:
        return dataclasses.replace(state, amplitudes=state.amplitudes.copy())
    if _resolve_method(op, method) == "spectral":
        amplitudes = spectral_propagate(op, state.amplitudes, dt)
    else:
        amplitudes = chebyshev_propagate(op, state.amplitudes, dt)
    return WaveState(spec=state.spec, amplitudes=amplitudes, time=state.time + dt)


def density_profile(state: WaveState) -> np.ndarray:
    """Occupation of every row m summed over n."""
    return state.density.sum(axis=1)


def x_uniformity_residual(state: WaveState) -> float:
    """Largest spread of |psi|^2 along x within any row."""
    rho = state.density
    return float(np.max(rho.max(axis=1) - rho.min(axis=1)))


def bulk_trim(flux: FluxRatio, max_period: int = 12) -> int:
    """Sites trimmed from each edge before period detection: r, or a rational estimate of it."""
    if flux.is_rational:
        return flux.r
    return Fraction(flux.value).limit_denominator(max_period).denominator


def detect_period(
    profile: Sequence[float],
    max_period: int = 12,
    trim: int = 0,
    threshold: float = PERIOD_THRESHOLD,
) -> PeriodDetection:
    """Smallest lag whose circular autocorrelation exceeds ``threshold``.

    The profile is trimmed by ``trim`` sites per edge and its mean removed.
    A flat profile has period 1.

    Args:
        profile: Per-row occupation.
        max_period: Largest lag tested.
        trim: Boundary sites dropped from each edge.
        threshold: Fraction of the zero-lag autocorrelation a lag must exceed.

    Returns:
        Detection result; ``period`` is None when no lag qualifies.

    Raises:
        ContractError: If the profile is shorter than ``2 * max_period`` or
            trimming leaves no more than ``max_period`` sites.
    """
    values = np.asarray(profile, dtype=float)
    if values.size < 2 * max_period:
        raise ContractError(f"profile of length {values.size} is shorter than 2*max_period={2 * max_period}")
    bulk = values[trim : values.size - trim] if trim > 0 else values
    if bulk.size <= max_period:
        raise ContractError(f"trim={trim} leaves {bulk.size} sites for max_period={max_period}")

    deviation = bulk - bulk.mean()
    zero_lag = float(deviation @ deviation)
    scale = max(abs(float(bulk.mean())), np.finfo(float).tiny)
    if np.sqrt(zero_lag / bulk.size) <= 1e-12 * scale:
        return PeriodDetection(period=1, correlations=np.ones(max_period))

    correlations = np.array(
        [float(deviation @ np.roll(deviation, -lag)) / zero_lag for lag in range(1, max_period + 1)]
    )
    above = np.nonzero(correlations > threshold)[0]
    period = int(above[0]) + 1 if above.size else None
    return PeriodDetection(period=period, correlations=correlations)


def density_time_series(
    spec: LatticeSpec,
    flux: FluxRatio,
    J: float = 1.0,
    times: Optional[Sequence[float]] = None,
    method: str = "auto",
    parallelism: Optional[int] = None,
    op: Optional[HermitianOperatorRep] = None,
) -> DensityProfile:
    """Evolve the uniform state and record the x-averaged density at every time.

    Spectral samples are computed independently from t = 0 and may run in
    parallel; Chebyshev samples step sequentially between sample times.

    Args:
        spec: Lattice.
        flux: Flux per plaquette.
        J: Hopping energy.
        times: Ascending sample times, default 60 samples over [0, 6].
        method: Propagation method passed to :func:`evolve`.
        parallelism: Worker threads for spectral sampling.
        op: Prebuilt operator, built from ``spec`` and ``flux`` when omitted.

    Returns:
        The density time series with norms, energies and x residuals.
    """
    times = np.linspace(0.0, 6.0, 60) if times is None else np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0) or (times.size and times[0] < 0):
        raise ContractError("sample times must be non-negative and ascending")
    parallelism = settings.parallelism if parallelism is None else parallelism
    op = build_hamiltonian(spec, flux, J) if op is None else op
    initial = uniform_initial_state(spec)
    resolved = _resolve_method(op, method)
    logger.info(f"Evolving {spec.n_x}x{spec.n_y} lattice at alpha={flux.label} ({resolved}, {times.size} samples)")

    if resolved == "spectral":
        op.eigensystem  # diagonalise once before the worker threads share it
        with ThreadPoolExecutor(max_workers=max(1, parallelism)) as executor:
            states = list(executor.map(lambda t: evolve(initial, op, float(t), "spectral"), times))
    else:
        states = []
        state = initial
        for t in times:
            state = evolve(state, op, max(0.0, float(t) - state.time), "chebyshev")
            states.append(state)

    return DensityProfile(
        spec=spec,
        flux=flux,
        times=times,
        density=np.array([density_profile(s) for s in states]),
        x_residual=np.array([x_uniformity_residual(s) for s in states]),
        norms=np.array([s.norm for s in states]),
        energies=np.array([op.expectation(s.amplitudes) for s in states]),
        method=resolved,
    )
