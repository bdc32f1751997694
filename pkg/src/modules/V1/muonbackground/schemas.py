import math
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.project_schemas import FacesConvention, PathModel  # noqa: F401
from modules.V1.corephysics.schemas import Constants
from modules.V1.gammashielding.schemas import TableRuleError


class MuonState(BaseModel):
    """Muon of kinetic energy T (MeV) with rest energy m c^2 (MeV)."""

    model_config = ConfigDict(frozen=True)

    kinetic_energy: float = Field(..., gt=0, allow_inf_nan=False, description="MeV")
    rest_energy: float = Field(106.0, gt=0, description="MeV")

    @classmethod
    def of(cls, kinetic_energy: float, constants: Constants) -> "MuonState":
        return cls(kinetic_energy=kinetic_energy, rest_energy=constants.m_mu_c2)

    @property
    def total_energy(self) -> float:
        return self.kinetic_energy + self.rest_energy

    @property
    def gamma(self) -> float:
        return self.total_energy / self.rest_energy

    @property
    def p_mu_c(self) -> float:
        """sqrt((T + m c^2)^2 - (m c^2)^2), MeV"""
        return math.sqrt(self.kinetic_energy * (self.kinetic_energy + 2.0 * self.rest_energy))

    @property
    def beta_gamma_sq(self) -> float:
        return (self.p_mu_c / self.rest_energy) ** 2

    @property
    def beta_sq(self) -> float:
        return (self.p_mu_c / self.total_energy) ** 2

    @property
    def beta(self) -> float:
        return self.p_mu_c / self.total_energy


class DepthIntensityRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    depth: float = Field(..., allow_inf_nan=False, description="km.w.e")
    intensity: float = Field(..., allow_inf_nan=False, description="1/(cm^2 s sr)")
    intensity_err: float = Field(..., allow_inf_nan=False, description="1/(cm^2 s sr)")


def check_depth_rows(rows: Sequence[DepthIntensityRow]) -> None:
    if len(rows) < 2:
        raise TableRuleError(len(rows), "min_rows", "a depth-intensity table needs at least 2 rows")
    previous: Optional[DepthIntensityRow] = None
    for i, row in enumerate(rows, start=1):
        if row.depth < 0:
            raise TableRuleError(i, "non_negative_depth", f"depth {row.depth} must be >= 0")
        if row.intensity <= 0:
            raise TableRuleError(i, "positive_intensity", f"intensity {row.intensity} must be > 0")
        if row.intensity_err < 0:
            raise TableRuleError(i, "non_negative_error", "intensity_err must be >= 0")
        if previous is not None:
            if row.depth <= previous.depth:
                raise TableRuleError(
                    i, "increasing_depth", f"rows {i - 1}-{i}: depth does not increase"
                )
            if row.intensity >= previous.intensity:
                raise TableRuleError(
                    i,
                    "decreasing_intensity",
                    f"rows {i - 1}-{i}: intensity {row.intensity} does not decrease "
                    f"from {previous.intensity}",
                )
        previous = row


class DepthIntensityTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    site: str
    rows: tuple[DepthIntensityRow, ...]

    @model_validator(mode="after")
    def check_rows(self) -> "DepthIntensityTable":
        check_depth_rows(self.rows)
        return self

    @property
    def depth_range(self) -> tuple[float, float]:
        return self.rows[0].depth, self.rows[-1].depth


class MeanEnergyParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    b: float = Field(..., gt=0, description="1/km.w.e")
    gamma_mu: float = Field(..., gt=2, description="Spectral index")
    epsilon_mu: float = Field(..., gt=0, description="GeV")
    source_label: str = ""


# ------------------------------------------ Results ------------------------------------------


class EventRate(BaseModel):
    model_config = ConfigDict(frozen=True)

    rate: float = Field(..., description="1/s")
    rate_err: float = Field(..., description="1/s")


class MuonPowerResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    depth: Optional[float] = None
    intensity: float
    mean_energy: float = Field(..., description="GeV")
    stopping_power: float = Field(..., description="MeV cm^2/g")
    path_length: float = Field(..., description="cm")
    event_rate: float
    event_rate_err: float
    power: float = Field(..., description="W")
    power_err: float = Field(..., description="W")


class MeanChordResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    samples: int
    hits: int
    mean_chord: float = Field(..., description="cm")
    mean_chord_err: float
    rate_per_intensity: float = Field(..., description="events/s per unit I_v (cm^2 sr)")
    rate_per_intensity_err: float
    top_rate_per_intensity: float
    lateral_rate_per_intensity: float
    seed: int
