"""
Pydantic schema for the magnetic-Bloch (Harper) problem.
"""

from pydantic import BaseModel, ConfigDict

from .lattice import FluxRatio


class HarperProblem(BaseModel):
    """One quasimomentum point of the r-site magnetic unit cell.

    ``k_x`` lies in [0, 2*pi) and ``k_y`` in [0, 2*pi/r). The flux must be
    rational; ``harper_matrix`` rejects real-valued fluxes.
    """

    flux: FluxRatio
    k_x: float = 0.0
    k_y: float = 0.0
    J: float = 1.0

    model_config = ConfigDict(frozen=True)
