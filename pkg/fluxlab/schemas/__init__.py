"""
Pydantic schemas for validated inputs.
"""

from .lattice import BoundaryCondition, FluxKind, FluxRatio, HubbardParams, LatticeSpec
from .spectra import HarperProblem
from .laser import BeamAngles, RamanConfig
from .gutzwiller import TrapParams
from .run import (
    COMMAND_PARAMS,
    ButterflyParams,
    Command,
    EvolveParams,
    GutzwillerParams,
    LaserParams,
    RunConfig,
    SpectrumParams,
    WannierParams,
)

__all__ = [
    "BoundaryCondition",
    "FluxKind",
    "FluxRatio",
    "HubbardParams",
    "LatticeSpec",
    "HarperProblem",
    "BeamAngles",
    "RamanConfig",
    "TrapParams",
    "COMMAND_PARAMS",
    "ButterflyParams",
    "Command",
    "EvolveParams",
    "GutzwillerParams",
    "LaserParams",
    "RunConfig",
    "SpectrumParams",
    "WannierParams",
]
