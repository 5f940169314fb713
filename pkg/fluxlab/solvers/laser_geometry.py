"""
Raman coupling strength and the in-plane beam geometry that realises a
momentum transfer q.

Wave numbers q, Delta_prime and k_g share one inverse-length unit.
"""

import logging
import math

from ..exceptions import DomainError, OutOfRangeError
from ..schemas.laser import BeamAngles, RamanConfig

logger = logging.getLogger(__name__)

GUARD_BAND = 1e-9


def raman_rabi_magnitude(config: RamanConfig) -> float:
    """Two-photon Rabi frequency ``Omega_e * Omega_g / (2 delta_r)`` after eliminating |r>.

    Raises:
        DomainError: If ``delta_r`` is not positive.
    """
    if config.delta_r <= 0:
        raise DomainError(f"detuning delta_r must be positive, got {config.delta_r}")
    if not config.adiabatic_ok:
        logger.warning(
            f"delta_r={config.delta_r} is not much larger than the Rabi frequencies "
            f"({config.Omega_e}, {config.Omega_g}); adiabatic elimination is questionable"
        )
    return config.Omega_e * config.Omega_g / (2.0 * config.delta_r)


def _check_wavenumbers(delta_prime: float, k_g: float) -> None:
    if k_g <= 0:
        raise DomainError(f"k_g must be positive, got {k_g}")
    if not 0 <= delta_prime < k_g:
        raise DomainError(f"Delta_prime must lie in [0, k_g), got {delta_prime} with k_g={k_g}")


def q_window(delta_prime: float, k_g: float) -> tuple[float, float]:
    """Open interval of momentum transfers reachable with in-plane beams."""
    _check_wavenumbers(delta_prime, k_g)
    return delta_prime, math.sqrt(4.0 * k_g * (k_g - delta_prime) + delta_prime**2)


def gamma_squared(q: float, delta_prime: float, k_g: float) -> float:
    """``(q^2 - D^2) (4 k_g^2 - q^2 - 4 k_g D + D^2)`` with D = Delta_prime, evaluated as written."""
    return (q**2 - delta_prime**2) * (4.0 * k_g**2 - q**2 - 4.0 * k_g * delta_prime + delta_prime**2)


def solve_angles(q: float, delta_prime: float, k_g: float) -> BeamAngles:
    """Beam angles satisfying ``k_e cos(phi_e) = k_g cos(phi_g)`` and
    ``k_e sin(phi_e) + k_g sin(phi_g) = q`` with ``k_e = k_g - delta_prime``.

    Cosines come from Gamma, sines from closed forms of the same system,
    and each angle is ``atan2(sin, cos)``; this keeps both residuals at
    rounding level across the window.

    Args:
        q: Requested momentum transfer.
        delta_prime: ``(Delta + omega_eg) / c``.
        k_g: Wave number of the g-beam.

    Returns:
        The angles in radians.

    Raises:
        OutOfRangeError: If q is not inside the window shrunk by 1e-9 k_g at
            each end; ``bound`` names the violated side.
        DomainError: If ``k_g`` or ``delta_prime`` are invalid.
    """
    lower, upper = q_window(delta_prime, k_g)
    guard = GUARD_BAND * k_g
    if q <= lower + guard:
        raise OutOfRangeError(f"q={q} must exceed the lower bound Delta_prime={lower}", bound="lower")
    if q >= upper - guard:
        raise OutOfRangeError(f"q={q} must stay below the upper bound {upper}", bound="upper")

    k_e = k_g - delta_prime
    gamma = math.sqrt(gamma_squared(q, delta_prime, k_g))
    shift = (2.0 * k_g - delta_prime) * delta_prime
    phi_g = math.atan2((q**2 + shift) / (2.0 * q * k_g), gamma / (2.0 * q * k_g))
    phi_e = math.atan2((q**2 - shift) / (2.0 * q * k_e), gamma / (2.0 * q * k_e))
    return BeamAngles(phi_e=phi_e, phi_g=phi_g)


def constraint_residuals(angles: BeamAngles, q: float, delta_prime: float, k_g: float) -> tuple[float, float]:
    """Residuals of the x and y momentum balance for given angles."""
    k_e = k_g - delta_prime
    along_x = k_e * math.cos(angles.phi_e) - k_g * math.cos(angles.phi_g)
    along_y = k_e * math.sin(angles.phi_e) + k_g * math.sin(angles.phi_g) - q
    return along_x, along_y


def wavenumber_from_angles(angles: BeamAngles, delta_prime: float, k_g: float) -> float:
    """Momentum transfer along y produced by beams at the given angles."""
    return (k_g - delta_prime) * math.sin(angles.phi_e) + k_g * math.sin(angles.phi_g)


def attainable_alpha_window(delta_prime: float, k_g: float, lam: float) -> tuple[float, float]:
    """Flux range ``alpha = q * lambda / (4 pi)`` reachable over the q window.

    Raises:
        DomainError: Unless ``k_g > delta_prime >= 0`` and ``lam > 0``.
    """
    if lam <= 0:
        raise DomainError(f"wavelength must be positive, got {lam}")
    lower, upper = q_window(delta_prime, k_g)
    return lower * lam / (4.0 * math.pi), upper * lam / (4.0 * math.pi)
