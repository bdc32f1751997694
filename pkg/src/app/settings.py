from pathlib import Path
from functools import lru_cache
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field

ENV_FILE = Path(__file__).parents[2] / ".env"
BUNDLED_DATA_DIR = Path(__file__).parents[1] / "modules" / "V1" / "datastore" / "data"


class CommonSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_FILE,
        env_file_encoding="utf-8",
        extra="ignore",
    )


# --------------------------------------------------------------- APP ---------------------------------------------------------------
class AppSettings(CommonSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_FILE,
        env_file_encoding="utf-8",
        extra="ignore",
        env_prefix="",
    )

    version: str = "1.0.0"
    project_name: str = Field(default="CSL Background Budget", alias="PROJECT_NAME")
    debug: bool = Field(default=False, alias="DEBUG")
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")


# --------------------------------------------------------------- DATA --------------------------------------------------------------
class DataSettings(CommonSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_FILE,
        env_file_encoding="utf-8",
        extra="ignore",
        env_prefix="",
    )

    data_dir: Path = Field(default=BUNDLED_DATA_DIR, alias="CSLBG_DATA_DIR")
    manifest_name: str = Field(default="manifest.yaml", alias="CSLBG_MANIFEST")
    verify_checksums: bool = Field(default=True, alias="CSLBG_VERIFY_CHECKSUMS")

    @property
    def manifest_path(self) -> Path:
        return self.data_dir / self.manifest_name


# ------------------------------------------------------------- ANALYSIS ------------------------------------------------------------
class AnalysisSettings(CommonSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_FILE,
        env_file_encoding="utf-8",
        extra="ignore",
        env_prefix="CSLBG_",
    )

    margin_factor: float = Field(default=100.0, gt=0)
    faces: Literal["top+sides", "all", "top"] = "top+sides"
    constants: Literal["paper", "codata"] = "paper"
    seed: int = Field(default=42, ge=0)
    path_model: Literal["side", "monte_carlo"] = "side"
    mc_samples: int = Field(default=200_000, gt=0)
    mc_workers: int = Field(default=4, ge=1)
    param_error: float = Field(default=0.04, ge=0)
    bisection_tol_kmwe: float = Field(default=1e-3, gt=0)


# -------------------------------------------------------------- OUTPUT -------------------------------------------------------------
class OutputSettings(CommonSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_FILE,
        env_file_encoding="utf-8",
        extra="ignore",
        env_prefix="",
    )

    out_dir: Path = Field(default=Path("out"), alias="CSLBG_OUT_DIR")
    float_format: str = Field(default="%.6e")


# --------------------------------------------------------------- MASTER SETTINGS ---------------------------------------------------
class Settings(CommonSettings):
    app: AppSettings = Field(default_factory=AppSettings)
    data: DataSettings = Field(default_factory=DataSettings)
    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)


@lru_cache()
def get_settings() -> Settings:
    return Settings()
