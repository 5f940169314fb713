"""
Result containers produced by the solvers and the orchestrator.
"""

from .operator import HermitianOperatorRep
from .spectrum import ButterflyDataset, SpectrumSlice
from .dynamics import DensityProfile, PeriodDetection, WaveState
from .bands import BandSolution, EffectiveHopping, WannierFunction
from .gutzwiller import GutzwillerObservables, GutzwillerState
from .run import Artifact, ArtifactType, RunRecord, RunStatus

__all__ = [
    "HermitianOperatorRep",
    "ButterflyDataset",
    "SpectrumSlice",
    "DensityProfile",
    "PeriodDetection",
    "WaveState",
    "BandSolution",
    "EffectiveHopping",
    "WannierFunction",
    "GutzwillerObservables",
    "GutzwillerState",
    "Artifact",
    "ArtifactType",
    "RunRecord",
    "RunStatus",
]
