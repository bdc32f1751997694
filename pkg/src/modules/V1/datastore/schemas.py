from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

DataKind = Literal["attenuation", "gamma_spectrum", "depth_intensity", "overlay_bound"]

ATTENUATION_HEADER = ("energy_MeV", "mu_total_cm2_g", "mu_en_cm2_g")
SPECTRUM_HEADER = ("e_low_MeV", "e_high_MeV", "flux_cm2_s", "flux_err_cm2_s")
DEPTH_HEADER = ("depth_kmwe", "intensity_cm2_s_sr", "intensity_err")
OVERLAY_HEADER = ("r_c_m", "lambda_per_s")
FIT_HEADER = ("x", "y", "y_err")


class ManifestEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: DataKind
    path: str = Field(..., min_length=1, description="Relative to the data directory")
    material_or_site: str
    checksum: Optional[str] = Field(None, pattern=r"^[0-9a-f]{64}$", description="sha256 hex")


class DataManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: tuple[ManifestEntry, ...] = ()

    @model_validator(mode="after")
    def check_unique_paths(self) -> "DataManifest":
        seen: set[str] = set()
        for entry in self.entries:
            if entry.path in seen:
                raise ValueError(f"duplicate manifest path '{entry.path}'")
            seen.add(entry.path)
        return self

    def find(self, kind: DataKind, name: str) -> Optional[ManifestEntry]:
        for entry in self.entries:
            if entry.kind == kind and entry.material_or_site == name:
                return entry
        return None

    def names(self, kind: DataKind) -> list[str]:
        return [e.material_or_site for e in self.entries if e.kind == kind]


class ParsedCsv(BaseModel):
    """Data rows with their 1-based file line numbers and `# key=value` metadata."""

    model_config = ConfigDict(frozen=True)

    path: str
    metadata: dict[str, str]
    lines: tuple[int, ...]
    rows: tuple[tuple[float, ...], ...]

    def line_of(self, row: int) -> Optional[int]:
        """File line of a 1-based data row."""
        if 1 <= row <= len(self.lines):
            return self.lines[row - 1]
        return None
