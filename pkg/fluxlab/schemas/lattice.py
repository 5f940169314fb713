"""
Pydantic schemas for the flux parameter, lattice geometry and Hubbard parameters.
"""

import enum
import math
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FluxKind(str, enum.Enum):
    """How the flux parameter alpha is represented."""

    RATIONAL = "rational"
    REAL = "real"


class BoundaryCondition(str, enum.Enum):
    """Boundary condition along one lattice axis."""

    OPEN = "open"
    PERIODIC = "periodic"


class FluxRatio(BaseModel):
    """Flux parameter alpha, the phase 2*pi*alpha picked up around one plaquette.

    Rational values are stored reduced as ``p/r``; ``value`` then equals ``p/r``
    exactly. Real values carry ``p = 0`` and ``r = 1`` as placeholders.

    Example:
        >>> FluxRatio.rational(2, 12)
        FluxRatio(kind=<FluxKind.RATIONAL: 'rational'>, p=1, r=6, value=0.16666666666666666)
    """

    kind: FluxKind
    p: int = 0
    r: int = 1
    value: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_reduced(self) -> "FluxRatio":
        """Rational fluxes must be reduced with p >= 0 and r >= 1."""
        if self.kind == FluxKind.RATIONAL:
            if self.r < 1 or self.p < 0:
                raise ValueError(f"rational flux needs p >= 0 and r >= 1, got {self.p}/{self.r}")
            if math.gcd(self.p, self.r) != 1:
                raise ValueError(f"rational flux {self.p}/{self.r} is not reduced")
            if self.value != self.p / self.r:
                raise ValueError(f"value {self.value} does not equal {self.p}/{self.r}")
        return self

    @classmethod
    def rational(cls, p: int, r: int) -> "FluxRatio":
        """Build a reduced rational flux p/r."""
        if r < 1 or p < 0:
            raise ValueError(f"rational flux needs p >= 0 and r >= 1, got {p}/{r}")
        g = math.gcd(p, r)
        p, r = p // g, r // g
        return cls(kind=FluxKind.RATIONAL, p=p, r=r, value=p / r)

    @classmethod
    def real(cls, value: float) -> "FluxRatio":
        """Build a real-valued flux."""
        return cls(kind=FluxKind.REAL, value=float(value))

    @property
    def is_rational(self) -> bool:
        return self.kind == FluxKind.RATIONAL

    @property
    def phase_per_plaquette(self) -> float:
        """Phase 2*pi*alpha in radians."""
        return 2.0 * math.pi * self.value

    @property
    def label(self) -> str:
        if self.is_rational:
            return f"{self.p}/{self.r}"
        return f"{self.value:.12g}"


class LatticeSpec(BaseModel):
    """Rectangular 2D lattice with sites (n, m), n along x and m along y.

    Sites are linearised as ``index = n + n_x * m``. Lengths are in units of
    the lattice laser wavelength lambda.
    """

    n_x: int = Field(ge=1)
    n_y: int = Field(ge=1)
    bc_x: BoundaryCondition = BoundaryCondition.OPEN
    bc_y: BoundaryCondition = BoundaryCondition.OPEN

    model_config = ConfigDict(frozen=True)

    @property
    def dim(self) -> int:
        return self.n_x * self.n_y

    @property
    def a_x(self) -> float:
        """Spacing along x, lambda/4."""
        return 0.25

    @property
    def a_y(self) -> float:
        """Spacing along y, lambda/2."""
        return 2.0 * self.a_x

    def site_index(self, n: int, m: int) -> int:
        return n + self.n_x * m

    def site_coords(self, index: int) -> tuple[int, int]:
        return index % self.n_x, index // self.n_x

    def is_commensurate(self, flux: FluxRatio) -> bool:
        """Whether the magnetic unit cell fits the periodic y extent."""
        if self.bc_y != BoundaryCondition.PERIODIC or not flux.is_rational:
            return True
        return self.n_y % flux.r == 0


class HubbardParams(BaseModel):
    """Bose-Hubbard parameters in units of the hopping energy J.

    ``U_n`` is the onsite interaction of even columns; ``U_n_odd`` overrides it
    on odd columns, where the other internal state lives. ``U_x`` is carried
    for completeness and is not used by any solver.
    """

    J: float = Field(default=1.0, ge=0.0)
    U_n: float = Field(default=0.0, ge=0.0)
    U_n_odd: Optional[float] = Field(default=None, ge=0.0)
    U_x: float = 0.0
    Delta: float = 0.0
    omega_eg: float = 0.0

    model_config = ConfigDict(frozen=True)

    def onsite_interaction(self, n: int) -> float:
        """Onsite interaction on column n."""
        if n % 2 == 1 and self.U_n_odd is not None:
            return self.U_n_odd
        return self.U_n
