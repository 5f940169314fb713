"""
Pydantic schemas for the Raman laser configuration.
"""

import math

from pydantic import BaseModel, ConfigDict, Field

# Adiabatic elimination wants delta_r much larger than both Rabi frequencies.
ADIABATIC_RATIO = 10.0


class RamanConfig(BaseModel):
    """Two running waves driving |e> <-> |r> <-> |g> with a far detuned |r>.

    Wave numbers share one inverse-length unit. ``Delta_prime`` is
    ``(Delta + omega_eg) / c`` and fixes ``k_e = k_g - Delta_prime``.
    """

    Omega_e: float = Field(ge=0.0)
    Omega_g: float = Field(ge=0.0)
    delta_r: float
    k_g: float = Field(gt=0.0)
    Delta_prime: float = Field(default=0.0, ge=0.0)
    q: float = Field(default=0.0, ge=0.0)

    model_config = ConfigDict(frozen=True)

    @property
    def k_e(self) -> float:
        return self.k_g - self.Delta_prime

    @property
    def adiabatic_ok(self) -> bool:
        """False when delta_r is less than ten times the larger Rabi frequency."""
        largest = max(self.Omega_e, self.Omega_g)
        if largest == 0.0:
            return True
        return self.delta_r / largest >= ADIABATIC_RATIO


class BeamAngles(BaseModel):
    """In-plane beam angles in radians.

    ``phi_g`` is always in [0, pi/2]. ``phi_e`` turns negative when
    ``q**2 < (2*k_g - Delta_prime) * Delta_prime``: the e-beam then leans to
    the other side of the x axis while ``cos(phi_e)`` stays in [0, 1].
    """

    phi_e: float = Field(ge=-math.pi / 2, le=math.pi / 2)
    phi_g: float = Field(ge=0.0, le=math.pi / 2)

    model_config = ConfigDict(frozen=True)

    @property
    def degrees(self) -> tuple[float, float]:
        return math.degrees(self.phi_e), math.degrees(self.phi_g)
