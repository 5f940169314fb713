"""
Harper (magnetic-Bloch) band structure and the Hofstadter butterfly.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from ..config import settings
from ..exceptions import DomainError
from ..models.operator import HermitianOperatorRep
from ..models.spectrum import ButterflyDataset, SpectrumSlice
from ..schemas.lattice import FluxRatio
from ..schemas.spectra import HarperProblem

logger = logging.getLogger(__name__)

# junction gaps within this multiple of gap_tol trigger one grid doubling
REFINE_FACTOR = 10.0


def harper_blocks(flux: FluxRatio, k_x, k_y, J: float = 1.0) -> np.ndarray:
    """Stack of r x r Harper matrices, one per (k_x, k_y) pair.

    Args:
        flux: Rational flux p/r.
        k_x: Quasimomenta along x, any shape.
        k_y: Quasimomenta along y, broadcastable against ``k_x``.
        J: Hopping energy.

    Returns:
        Complex array of shape ``(K, r, r)`` with ``K`` the broadcast size.

    Raises:
        DomainError: If the flux is not rational.
    """
    if not flux.is_rational:
        raise DomainError(f"Harper reduction needs a rational flux, got {flux.label}")
    r = flux.r
    k_x, k_y = np.broadcast_arrays(np.asarray(k_x, dtype=float), np.asarray(k_y, dtype=float))
    k_x, k_y = k_x.ravel(), k_y.ravel()

    m = np.arange(r)
    blocks = np.zeros((k_x.size, r, r), dtype=np.complex128)
    blocks[:, m, m] = 2.0 * J * np.cos(2.0 * np.pi * flux.value * m[None, :] + k_x[:, None])
    if r > 1:
        blocks[:, m[:-1], m[1:]] += J
        blocks[:, m[1:], m[:-1]] += J
    # magnetic-Bloch closure g_{m+r} = exp(i k_y r) g_m
    closure = J * np.exp(1j * k_y * r)
    blocks[:, r - 1, 0] += closure
    blocks[:, 0, r - 1] += np.conj(closure)
    return blocks


def harper_matrix(problem: HarperProblem) -> HermitianOperatorRep:
    """Harper matrix of one quasimomentum point as an r-dimensional operator.

    Raises:
        DomainError: If the flux is not rational.
    """
    block = harper_blocks(problem.flux, problem.k_x, problem.k_y, problem.J)[0]
    return HermitianOperatorRep.from_dense(block, flux=problem.flux, J=problem.J)


def _k_grid(r: int, k_samples: int) -> tuple[np.ndarray, np.ndarray]:
    k_x = 2.0 * np.pi * np.arange(k_samples) / k_samples
    k_y = (2.0 * np.pi / r) * np.arange(k_samples) / k_samples
    kx_grid, ky_grid = np.meshgrid(k_x, k_y, indexing="ij")
    return kx_grid.ravel(), ky_grid.ravel()


def _grid_eigenvalues(flux: FluxRatio, k_samples: int, J: float) -> np.ndarray:
    """Eigenvalues on the k grid, shape (k_samples**2, r), ascending per point."""
    k_x, k_y = _k_grid(flux.r, k_samples)
    return np.linalg.eigvalsh(harper_blocks(flux, k_x, k_y, J))


def _merge_bands(index_bands: np.ndarray, gap_tol: float) -> tuple[list[tuple[float, float]], bool]:
    """Merge overlapping index bands; bands closer than gap_tol touch but stay separate."""
    edges: list[tuple[float, float]] = []
    touching = False
    lo, hi = index_bands[0]
    for next_lo, next_hi in index_bands[1:]:
        gap = next_lo - hi
        if gap < -gap_tol:
            hi = max(hi, next_hi)
            continue
        if gap <= gap_tol:
            touching = True
        edges.append((float(lo), float(hi)))
        lo, hi = next_lo, next_hi
    edges.append((float(lo), float(hi)))
    return edges, touching


def _index_bands(flux: FluxRatio, eigenvalues: np.ndarray, J: float) -> np.ndarray:
    """(lo, hi) of each Harper eigenvalue index.

    The k dependence enters only through cos(r k_x) + cos(r k_y), so every
    band edge sits at (0, 0) or (pi/r, pi/r). Both points are added to the
    sampled grid so the edges are exact for any grid size.
    """
    r = flux.r
    extremes = np.linalg.eigvalsh(harper_blocks(flux, [0.0, np.pi / r], [0.0, np.pi / r], J))
    samples = np.vstack([eigenvalues, extremes])
    return np.column_stack([samples.min(axis=0), samples.max(axis=0)])


def spectrum_slice(
    flux: FluxRatio,
    k_samples: Optional[int] = None,
    J: float = 1.0,
    gap_tol: Optional[float] = None,
    refine: bool = True,
) -> SpectrumSlice:
    """Diagonalise the Harper matrix over the magnetic Brillouin zone.

    The grid covers ``[0, 2 pi) x [0, 2 pi / r)`` with ``k_samples`` points
    per axis. When a junction gap between neighbouring bands falls in
    ``(gap_tol, 10 * gap_tol]`` the band intervals are recomputed once on a
    doubled grid; stored energies always come from the base grid.

    Args:
        flux: Rational flux p/r.
        k_samples: Grid points per axis, at least 2.
        J: Hopping energy.
        gap_tol: Gaps at or below this value count as touching.
        refine: Allow the one-off grid doubling.

    Returns:
        The slice with sorted energies and band intervals.

    Raises:
        DomainError: If the flux is not rational or ``k_samples < 2``.
    """
    k_samples = settings.k_samples if k_samples is None else k_samples
    gap_tol = settings.gap_tol if gap_tol is None else gap_tol
    if k_samples < 2:
        raise DomainError(f"k_samples must be at least 2, got {k_samples}")

    eigenvalues = _grid_eigenvalues(flux, k_samples, J)
    index_bands = _index_bands(flux, eigenvalues, J)
    refined = False
    if refine and flux.r > 1:
        gaps = index_bands[1:, 0] - index_bands[:-1, 1]
        if np.any((gaps > gap_tol) & (gaps <= REFINE_FACTOR * gap_tol)):
            logger.debug(f"Refining k grid for alpha={flux.label}: near-touching bands")
            index_bands = _index_bands(flux, _grid_eigenvalues(flux, 2 * k_samples, J), J)
            refined = True

    band_edges, touching = _merge_bands(index_bands, gap_tol)
    return SpectrumSlice(
        flux=flux,
        energies=np.sort(eigenvalues.ravel()),
        band_edges=band_edges,
        band_count=len(band_edges),
        index_bands=index_bands,
        touching=touching,
        refined=refined,
        k_samples=k_samples,
        gap_tol=gap_tol,
        J=J,
    )


def band_count(slice_: SpectrumSlice, gap_tol: Optional[float] = None) -> int:
    """Number of bands of a slice for a given gap tolerance.

    Overlapping Harper bands merge; bands separated by a gap at or below
    ``gap_tol`` count separately and set the slice's touching flag.
    """
    gap_tol = slice_.gap_tol if gap_tol is None else gap_tol
    edges, _ = _merge_bands(slice_.index_bands, gap_tol)
    return len(edges)


def reduced_fractions(r_max: int) -> list[FluxRatio]:
    """Every reduced p/r with 1 <= r <= r_max and 0 <= p <= r, ascending in value."""
    fractions = [
        FluxRatio.rational(p, r)
        for r in range(1, r_max + 1)
        for p in range(r + 1)
        if math.gcd(p, r) == 1
    ]
    return sorted(fractions, key=lambda f: (f.value, f.r))


def butterfly(
    r_max: int,
    k_samples: Optional[int] = None,
    J: float = 1.0,
    gap_tol: Optional[float] = None,
    parallelism: Optional[int] = None,
) -> ButterflyDataset:
    """Spectrum slices for every reduced fraction up to ``r_max``.

    Slices are computed on a thread pool and merged in a fixed order, so the
    dataset does not depend on ``parallelism``.

    Raises:
        DomainError: If ``r_max < 1``.
    """
    if r_max < 1:
        raise DomainError(f"r_max must be at least 1, got {r_max}")
    k_samples = settings.k_samples if k_samples is None else k_samples
    parallelism = settings.parallelism if parallelism is None else parallelism
    fractions = reduced_fractions(r_max)
    logger.info(f"Computing {len(fractions)} butterfly slices up to r={r_max} on {parallelism} worker(s)")

    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as executor:
        slices = list(
            executor.map(lambda f: spectrum_slice(f, k_samples=k_samples, J=J, gap_tol=gap_tol), fractions)
        )
    return ButterflyDataset.from_slices(slices, r_max=r_max, k_samples=k_samples)
