"""
Pydantic schemas for resolved run configurations, one parameter model per command.
"""

import enum
import math
from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import settings
from .lattice import BoundaryCondition, LatticeSpec


class Command(str, enum.Enum):
    """Commands understood by the CLI."""

    BUTTERFLY = "butterfly"
    SPECTRUM = "spectrum"
    EVOLVE = "evolve"
    WANNIER = "wannier"
    LASER_ANGLES = "laser-angles"
    GUTZWILLER = "gutzwiller"


def _validate_flux_text(value: str) -> str:
    from ..solvers.lattice_core import parse_flux

    parse_flux(value)
    return value


def _split_list(value):
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class _CommandParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ButterflyParams(_CommandParams):
    """Hofstadter butterfly over every reduced p/r with r <= rmax."""

    rmax: int = Field(default=8, ge=1)
    ksamples: int = Field(default_factory=lambda: settings.k_samples, ge=2)
    gap_tol: float = Field(default_factory=lambda: settings.gap_tol, gt=0.0)
    J: float = Field(default=1.0, gt=0.0)
    svg: bool = True


class SpectrumParams(_CommandParams):
    """Single Harper slice at a rational flux."""

    alpha: str = "1/3"
    ksamples: int = Field(default_factory=lambda: settings.k_samples, ge=2)
    gap_tol: float = Field(default_factory=lambda: settings.gap_tol, gt=0.0)
    J: float = Field(default=1.0, gt=0.0)

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: str) -> str:
        from ..solvers.lattice_core import parse_flux

        if not parse_flux(v).is_rational:
            raise ValueError(f"alpha must be rational for a spectrum slice, got {v!r}")
        return v


class EvolveParams(_CommandParams):
    """Single-particle density dynamics from the uniform state."""

    alpha: str = "1/6"
    nx: int = Field(default=36, ge=1)
    ny: int = Field(default=36, ge=1)
    bc_x: BoundaryCondition = BoundaryCondition.PERIODIC
    bc_y: BoundaryCondition = BoundaryCondition.PERIODIC
    tmax: float = Field(default=6.0, ge=0.0)
    samples: int = Field(default=60, ge=1)
    J: float = Field(default=1.0, ge=0.0)
    method: Literal["auto", "spectral", "chebyshev"] = "auto"
    max_period: int = Field(default=12, ge=1)
    svg: bool = True
    dump_operator: bool = False

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: str) -> str:
        return _validate_flux_text(v)

    @model_validator(mode="after")
    def check_commensurate(self) -> "EvolveParams":
        """With periodic y the magnetic cell must divide ny."""
        from ..solvers.lattice_core import parse_flux

        flux = parse_flux(self.alpha)
        if not self.lattice.is_commensurate(flux):
            raise ValueError(
                f"commensurability violated: alpha={flux.label} needs r={flux.r} "
                f"to divide ny={self.ny} with bc_y=periodic"
            )
        return self

    @property
    def lattice(self) -> LatticeSpec:
        return LatticeSpec(n_x=self.nx, n_y=self.ny, bc_x=self.bc_x, bc_y=self.bc_y)


class WannierParams(_CommandParams):
    """Calibration table of gamma_x, gamma_y and J over depths and fluxes."""

    depth: list[float] = Field(default_factory=lambda: [2.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0, 30.0])
    alpha: list[str] = Field(default_factory=lambda: ["0", "1/8", "1/4", "3/8", "1/2"])
    n_planewaves: int = Field(default=41, ge=11)
    n_quasimomenta: int = Field(default=64, ge=2)

    @field_validator("depth", "alpha", mode="before")
    @classmethod
    def split_lists(cls, v):
        return _split_list(v)

    @field_validator("depth")
    @classmethod
    def validate_depth(cls, v: list[float]) -> list[float]:
        if not v or any(d <= 0.0 for d in v):
            raise ValueError("depth values must be positive")
        return v

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: list[str]) -> list[str]:
        for item in v:
            _validate_flux_text(item)
        return v

    @field_validator("n_planewaves")
    @classmethod
    def validate_odd(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError("n_planewaves must be odd")
        return v


class LaserParams(_CommandParams):
    """Raman beam angles realising a momentum transfer q."""

    q: float = Field(default=math.sqrt(2.0) * 2.0 * math.pi, gt=0.0)
    delta_prime: float = Field(default=0.0, ge=0.0)
    kg: float = Field(default=2.0 * math.pi, gt=0.0)
    wavelength: float = Field(default=1.0, gt=0.0)
    format: Literal["text", "kv"] = "text"


class GutzwillerParams(_CommandParams):
    """Trapped Gutzwiller mean-field ground state."""

    alpha: str = "0"
    u: float = Field(default=16.0, ge=0.0)
    u_odd: Union[float, None] = Field(default=None, ge=0.0)
    mu: float = 6.0
    omega_t: float = Field(default=0.06, ge=0.0)
    nmax: int = Field(default=8, ge=1)
    size: int = Field(default=32, ge=1)
    J: float = Field(default=1.0, ge=0.0)
    tol: float = Field(default=1e-8, gt=0.0)
    max_sweeps: int = Field(default=1000, ge=1)
    svg: bool = True

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, v: str) -> str:
        return _validate_flux_text(v)

    @property
    def lattice(self) -> LatticeSpec:
        return LatticeSpec(n_x=self.size, n_y=self.size)


COMMAND_PARAMS: dict[Command, type[_CommandParams]] = {
    Command.BUTTERFLY: ButterflyParams,
    Command.SPECTRUM: SpectrumParams,
    Command.EVOLVE: EvolveParams,
    Command.WANNIER: WannierParams,
    Command.LASER_ANGLES: LaserParams,
    Command.GUTZWILLER: GutzwillerParams,
}


class RunConfig(BaseModel):
    """Fully resolved configuration of one CLI run."""

    command: Command
    parameters: Union[
        ButterflyParams,
        SpectrumParams,
        EvolveParams,
        WannierParams,
        LaserParams,
        GutzwillerParams,
    ]
    output_dir: str = Field(default_factory=lambda: settings.output_dir)
    parallelism: int = Field(default_factory=lambda: settings.parallelism, ge=1)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_parameters_match(self) -> "RunConfig":
        expected = COMMAND_PARAMS[self.command]
        if not isinstance(self.parameters, expected):
            raise ValueError(
                f"parameters for {self.command.value} must be {expected.__name__}, "
                f"got {type(self.parameters).__name__}"
            )
        return self
