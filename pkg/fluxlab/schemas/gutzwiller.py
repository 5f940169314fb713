"""
Pydantic schema for the harmonic trap superimposed on the lattice.
"""

from pydantic import BaseModel, ConfigDict, Field

from .lattice import LatticeSpec


class TrapParams(BaseModel):
    """Discretised harmonic trap, energy in units of J.

    The site energy is ``omega_T / 2 * (w_x * (n - c_x)**2 + w_y * (m - c_y)**2)``
    with offsets counted in sites. ``weights`` lets callers weight the axes by
    their physical spacing; the default is isotropic in site index.
    """

    omega_T: float = Field(default=0.0, ge=0.0)
    center: tuple[float, float] = (0.0, 0.0)
    weights: tuple[float, float] = (1.0, 1.0)

    model_config = ConfigDict(frozen=True)

    @classmethod
    def centered(cls, spec: LatticeSpec, omega_T: float, **kwargs) -> "TrapParams":
        """Trap centred on the middle of the lattice."""
        center = ((spec.n_x - 1) / 2.0, (spec.n_y - 1) / 2.0)
        return cls(omega_T=omega_T, center=center, **kwargs)
