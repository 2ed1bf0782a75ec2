"""Runtime settings loaded from environment variables."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit configuration settings."""

    # Logging
    log_dir: str = "log"
    log_level: str = "WARNING"

    # Execution
    threads: int = 1
    output_dir: str = "runs"

    # Numerical guards
    gap_tolerance: float = 1e-8  # Minimum single-particle gap at the filling
    eigenvalue_tolerance: float = 1e-8  # Allowed excursion of block eigenvalues outside [0, 1]

    # Fock-space oracle
    oracle_max_sites: int = 12
    oracle_dense_dim: int = 256  # Largest Fock dimension evolved with a dense expm

    # Wave solver
    wave_safety: float = 0.5
    diagonal_band: int = 3  # Cells masked around x=y in field comparisons

    model_config = SettingsConfigDict(
        env_prefix="ENTLINKS_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()
