"""
Configuration settings for the flux lattice laboratory.
"""

from pydantic import ConfigDict
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables."""

    # Application
    app_name: str = "fluxlab"
    log_level: str = "INFO"

    # Output
    output_dir: str = "./fluxlab_output"
    float_digits: int = 12  # significant digits in every data file

    # Execution
    parallelism: int = 1  # worker threads for independent sweep points

    # Spectra
    k_samples: int = 64
    gap_tol: float = 1e-3

    # Flux snapping
    snap_r_max: int = 64
    snap_tol: float = 1e-12

    # Propagation
    spectral_dim_limit: int = 4096
    chebyshev_tol: float = 1e-10

    model_config = ConfigDict(env_prefix="FLUXLAB_", env_file=".env", env_file_encoding="utf-8")


# Global settings instance
settings = Settings()
