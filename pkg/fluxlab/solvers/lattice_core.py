"""
Lattice geometry, the flux parameter and the Peierls-phase hopping operator.

The operator is built in the Landau gauge with phase ``exp(2 pi i alpha m)``
on every x-link (n, m) -> (n + 1, m) and plain amplitude J on y-links.
"""

import dataclasses
import logging
import math
import re
from typing import Optional

import numpy as np

from ..config import settings
from ..exceptions import ConfigurationError, ContractError, DomainError
from ..models.operator import HermitianOperatorRep
from ..schemas.lattice import BoundaryCondition, FluxRatio, LatticeSpec

logger = logging.getLogger(__name__)

_RATIO = re.compile(r"^\s*(\d+)\s*/\s*(\d+)\s*$")
_INTEGER = re.compile(r"^\s*(\d+)\s*$")
_OVER_PI = re.compile(
    r"^\s*([0-9]*\.?[0-9]+)\s*/\s*\(?\s*([0-9]*\.?[0-9]+)?\s*\*?\s*pi\s*\)?\s*$",
    re.IGNORECASE,
)


def flux_from_wavenumber(q: float, lam: float) -> FluxRatio:
    """Flux parameter ``alpha = q * lambda / (4 pi)`` realised by a Raman momentum q.

    Args:
        q: Momentum transfer of the Raman pair (inverse length).
        lam: Lattice laser wavelength.

    Returns:
        Real-kind flux; pass it through :func:`snap_to_rational` for p/r.

    Raises:
        DomainError: If q is negative or lam is not positive.
    """
    if q < 0:
        raise DomainError(f"wavenumber q must be non-negative, got {q}")
    if lam <= 0:
        raise DomainError(f"wavelength must be positive, got {lam}")
    return FluxRatio.real(q * lam / (4.0 * math.pi))


def snap_to_rational(
    flux: FluxRatio, r_max: Optional[int] = None, tol: Optional[float] = None
) -> FluxRatio:
    """Replace a real flux by p/r when it lies within ``tol`` of one with r <= r_max."""
    if flux.is_rational:
        return flux
    r_max = settings.snap_r_max if r_max is None else r_max
    tol = settings.snap_tol if tol is None else tol
    for r in range(1, r_max + 1):
        p = round(flux.value * r)
        if p >= 0 and abs(flux.value - p / r) < tol:
            return FluxRatio.rational(p, r)
    return flux


def parse_flux(text: str) -> FluxRatio:
    """Parse ``"p/r"``, an integer, a decimal or a ``"1/2pi"`` style flux.

    Integer ratios come back rational. Decimals are snapped to a nearby
    rational when one exists; everything else stays real.

    Raises:
        DomainError: If the text is not a recognised flux.
    """
    text = str(text).strip()
    match = _RATIO.match(text)
    if match:
        p, r = int(match.group(1)), int(match.group(2))
        if r == 0:
            raise DomainError(f"flux denominator must be positive: {text!r}")
        return FluxRatio.rational(p, r)
    match = _INTEGER.match(text)
    if match:
        return FluxRatio.rational(int(match.group(1)), 1)
    match = _OVER_PI.match(text)
    if match:
        numerator = float(match.group(1))
        factor = float(match.group(2)) if match.group(2) else 1.0
        if factor == 0.0:
            raise DomainError(f"flux denominator must be positive: {text!r}")
        return FluxRatio.real(numerator / (factor * math.pi))
    try:
        value = float(text)
    except ValueError as e:
        raise DomainError(f"cannot parse flux {text!r}") from e
    if not math.isfinite(value):
        raise DomainError(f"flux must be finite, got {text!r}")
    return snap_to_rational(FluxRatio.real(value))


def _links(spec: LatticeSpec, flux: FluxRatio, J: float):
    """Directed links (source, target, amplitude) with H[source, target] = amplitude."""
    n_x, n_y = spec.n_x, spec.n_y
    n_idx, m_idx = np.meshgrid(np.arange(n_x), np.arange(n_y))
    site = n_idx + n_x * m_idx

    x_mask = n_idx < (n_x if spec.bc_x == BoundaryCondition.PERIODIC else n_x - 1)
    x_target = (n_idx + 1) % n_x + n_x * m_idx
    x_amp = J * np.exp(2j * np.pi * flux.value * m_idx)

    y_mask = m_idx < (n_y if spec.bc_y == BoundaryCondition.PERIODIC else n_y - 1)
    y_target = n_idx + n_x * ((m_idx + 1) % n_y)
    y_amp = np.full(site.shape, J, dtype=np.complex128)

    source = np.concatenate([site[x_mask], site[y_mask]])
    target = np.concatenate([x_target[x_mask], y_target[y_mask]])
    amplitude = np.concatenate([x_amp[x_mask], y_amp[y_mask]])
    return source, target, amplitude


def build_hamiltonian(
    spec: LatticeSpec,
    flux: FluxRatio,
    J: float = 1.0,
    onsite: Optional[np.ndarray] = None,
    field: float = 0.0,
) -> HermitianOperatorRep:
    """Build the hopping operator of the flux lattice.

    Args:
        spec: Lattice geometry and boundary conditions.
        flux: Flux per plaquette.
        J: Hopping energy; all energies are in units of J.
        onsite: Optional real site potential of length ``spec.dim``.
        field: Residual tilt adding ``field * n`` on column n.

    Returns:
        Hermitian operator with nearest-neighbour entries and the onsite terms.

    Raises:
        ConfigurationError: If y is periodic and r does not divide n_y.
        ContractError: If ``onsite`` has the wrong length.
    """
    if not spec.is_commensurate(flux):
        raise ConfigurationError(
            f"flux {flux.label} is incommensurate with periodic n_y={spec.n_y}: "
            f"r={flux.r} must divide n_y"
        )
    if spec.bc_y == BoundaryCondition.PERIODIC and not flux.is_rational:
        if not float(flux.value * spec.n_y).is_integer():
            logger.warning(
                f"Real flux {flux.label} with periodic y: the wrap plaquettes carry a different phase"
            )

    source, target, amplitude = _links(spec, flux, J)

    # store every link in the upper triangle; a self-link (size-1 periodic axis) adds 2 Re t
    lower = source > target
    rows = np.where(lower, target, source)
    cols = np.where(lower, source, target)
    values = np.where(lower, np.conj(amplitude), amplitude)
    loop = source == target
    values[loop] = 2.0 * amplitude[loop].real

    diagonal = np.zeros(spec.dim)
    if onsite is not None:
        onsite = np.asarray(onsite, dtype=float).ravel()
        if onsite.size != spec.dim:
            raise ContractError(f"onsite potential has {onsite.size} entries, lattice has {spec.dim}")
        diagonal += onsite
    if field:
        diagonal += field * (np.arange(spec.dim) % spec.n_x)

    sites = np.arange(spec.dim)
    op = HermitianOperatorRep.from_upper(
        spec.dim,
        np.concatenate([rows, sites]),
        np.concatenate([cols, sites]),
        np.concatenate([values, diagonal.astype(np.complex128)]),
        n_x=spec.n_x,
        n_y=spec.n_y,
        flux=flux,
        J=J,
    )
    logger.debug(f"Built {spec.n_x}x{spec.n_y} operator at alpha={flux.label} with {op.nnz} entries")
    return op


def apply_gauge_transform(op: HermitianOperatorRep, theta) -> HermitianOperatorRep:
    """Rephase every entry ``t_ij -> t_ij * exp(i (theta_i - theta_j))``.

    Raises:
        ContractError: If theta does not have one phase per site.
    """
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != op.dim:
        raise ContractError(f"gauge needs {op.dim} phases, got {theta.size}")
    values = op.values * np.exp(1j * (theta[op.rows] - theta[op.cols]))
    return dataclasses.replace(op, values=values)


def plaquette_phase(op: HermitianOperatorRep, n: int, m: int) -> complex:
    """Unit-modulus product of amplitudes around the plaquette with lower-left corner (n, m).

    The loop runs counter-clockwise (n, m) -> (n+1, m) -> (n+1, m+1) -> (n, m+1);
    the amplitude for a hop from a to b is ``H[b, a]``.

    Raises:
        ContractError: If the operator carries no lattice shape or a link is missing.
    """
    if op.n_x < 1 or op.n_y < 1:
        raise ContractError("plaquette_phase needs a lattice operator")

    def site(a: int, b: int) -> int:
        return (a % op.n_x) + op.n_x * (b % op.n_y)

    corners = [site(n, m), site(n + 1, m), site(n + 1, m + 1), site(n, m + 1)]
    full = op.matrix
    product = complex(1.0)
    for a, b in zip(corners, corners[1:] + corners[:1]):
        product *= complex(full[b, a])
    if product == 0:
        raise ContractError(f"plaquette at ({n}, {m}) has a missing link")
    return product / abs(product)
