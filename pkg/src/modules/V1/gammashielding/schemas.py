from typing import Literal, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from modules.V1.corephysics.models import LEAD
from modules.V1.corephysics.schemas import Material

CoefficientKind = Literal["total", "energy_absorption"]
AreaConvention = Literal["all", "top+sides", "top"]
DetectorPath = Literal["side", "mean_chord"]


class TableRuleError(ValueError):
    """A table invariant broken at a given 1-based data row."""

    def __init__(self, row: int, rule: str, message: str):
        super().__init__(f"row {row}: {message} [{rule}]")
        self.row = row
        self.rule = rule
        self.message = message


# ------------------------------------------ Attenuation ------------------------------------------


class AttenuationRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    energy: float = Field(..., allow_inf_nan=False, description="MeV")
    mu_over_rho_total: float = Field(..., allow_inf_nan=False, description="cm^2/g")
    mu_en_over_rho: float = Field(..., allow_inf_nan=False, description="cm^2/g")


def check_attenuation_rows(rows: Sequence[AttenuationRow]) -> None:
    if len(rows) < 2:
        raise TableRuleError(len(rows), "min_rows", "an attenuation table needs at least 2 rows")
    previous = None
    for i, row in enumerate(rows, start=1):
        if row.energy <= 0:
            raise TableRuleError(i, "positive_energy", f"energy {row.energy} must be > 0")
        if row.mu_over_rho_total <= 0 or row.mu_en_over_rho <= 0:
            raise TableRuleError(i, "positive_coefficients", "coefficients must be > 0")
        if row.mu_en_over_rho > row.mu_over_rho_total:
            raise TableRuleError(
                i,
                "mu_en_le_mu_total",
                f"mu_en/rho {row.mu_en_over_rho} exceeds mu/rho {row.mu_over_rho_total}",
            )
        if previous is not None and row.energy <= previous:
            raise TableRuleError(
                i, "increasing_energy", f"energy {row.energy} does not increase after {previous}"
            )
        previous = row.energy


class AttenuationTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    material: Material
    rows: tuple[AttenuationRow, ...]

    @model_validator(mode="after")
    def check_rows(self) -> "AttenuationTable":
        check_attenuation_rows(self.rows)
        return self

    @property
    def energy_range(self) -> tuple[float, float]:
        return self.rows[0].energy, self.rows[-1].energy


# ------------------------------------------ Spectrum ------------------------------------------


class GammaBin(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_low: float = Field(..., allow_inf_nan=False, description="MeV")
    e_high: float = Field(..., allow_inf_nan=False, description="MeV")
    flux: float = Field(..., allow_inf_nan=False, description="1/(cm^2 s), integrated over bin")
    flux_err: float = Field(..., allow_inf_nan=False, description="1/(cm^2 s)")

    @property
    def e_mid(self) -> float:
        return 0.5 * (self.e_low + self.e_high)

    @property
    def width(self) -> float:
        return self.e_high - self.e_low


def check_spectrum_rows(rows: Sequence[GammaBin]) -> None:
    previous_high = None
    for i, row in enumerate(rows, start=1):
        if row.e_low < 0:
            raise TableRuleError(i, "non_negative_energy", f"e_low {row.e_low} must be >= 0")
        if row.e_low >= row.e_high:
            raise TableRuleError(
                i, "bin_order", f"e_low {row.e_low} must be < e_high {row.e_high}"
            )
        if row.flux < 0 or row.flux_err < 0:
            raise TableRuleError(i, "non_negative_flux", "flux and flux_err must be >= 0")
        if previous_high is not None and row.e_low < previous_high:
            raise TableRuleError(
                i, "no_overlap", f"bin starting at {row.e_low} overlaps previous bin ending at {previous_high}"
            )
        previous_high = row.e_high


class GammaSpectrum(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[GammaBin, ...] = ()
    label: str = ""

    @model_validator(mode="after")
    def check_rows(self) -> "GammaSpectrum":
        check_spectrum_rows(self.rows)
        return self

    def scaled(self, factor: float) -> "GammaSpectrum":
        return GammaSpectrum(
            rows=tuple(
                GammaBin(
                    e_low=b.e_low,
                    e_high=b.e_high,
                    flux=b.flux * factor,
                    flux_err=b.flux_err * factor,
                )
                for b in self.rows
            ),
            label=self.label,
        )


class ShieldSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    material: Material = LEAD
    thickness: float = Field(0.0, ge=0, allow_inf_nan=False, description="cm")


# ------------------------------------------ Results ------------------------------------------


class GammaBinPower(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_mid: float
    flux: float
    transmission: float
    absorption: float
    energy_absorbed: float
    power: float = Field(..., description="W")
    power_err: float = Field(..., description="W")


class GammaPowerResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    power: float = Field(..., description="W")
    power_err: float = Field(..., description="W")
    bins: tuple[GammaBinPower, ...]
    # paper_fit replaces power only; bins stay the per-bin breakdown
    mode: Literal["bins", "paper_fit"] = "bins"


class ShieldScanRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    thickness: float
    power: float
    power_err: float
