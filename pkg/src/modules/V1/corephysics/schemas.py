import math
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from app.errors import DomainError

# 10 eV expressed in MeV
EXCITATION_PER_Z_MEV = 10e-6


class Constants(BaseModel):
    """Physical constants in the units each formula consumes."""

    model_config = ConfigDict(frozen=True)

    profile: str = Field(..., description="Constant profile name")
    hbar: float = Field(..., gt=0, description="Reduced Planck constant [J s]")
    m_N: float = Field(..., gt=0, description="Nucleon mass [kg]")
    m_e_c2: float = Field(..., gt=0, description="Electron rest energy [MeV]")
    m_mu_c2: float = Field(..., gt=0, description="Muon rest energy [MeV]")
    r_0: float = Field(..., gt=0, description="Classical electron radius [cm]")
    N_A: float = Field(..., gt=0, description="Avogadro number [1/mol]")
    k_B: float = Field(..., gt=0, description="Boltzmann constant [J/K]")
    MeV_to_J: float = Field(..., gt=0, description="Joules per MeV")


class CslParams(BaseModel):
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    collapse_rate: float = Field(
        ..., ge=0, allow_inf_nan=False, alias="lambda", description="Collapse rate [1/s]"
    )
    r_c: float = Field(
        1e-7, gt=0, allow_inf_nan=False, description="Correlation length [m]"
    )

    @classmethod
    def of(cls, collapse_rate: float, r_c: float = 1e-7) -> "CslParams":
        try:
            return cls(collapse_rate=collapse_rate, r_c=r_c)
        except ValidationError as exc:
            raise DomainError(
                f"invalid CSL parameters (lambda={collapse_rate!r}, r_c={r_c!r}): "
                "lambda must be finite and >= 0, r_c finite and > 0"
            ) from exc


class Material(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    Z: float = Field(..., ge=1, description="Atomic number (per formula unit)")
    A: float = Field(..., gt=0, description="Atomic mass [g/mol]")
    rho: float = Field(..., gt=0, description="Density [g/cm^3]")
    mean_excitation_I: Optional[float] = Field(
        None, gt=0, description="Mean excitation potential [MeV]"
    )

    @model_validator(mode="before")
    @classmethod
    def default_excitation(cls, data: Any) -> Any:
        if isinstance(data, dict) and data.get("mean_excitation_I") is None:
            try:
                data = {**data, "mean_excitation_I": EXCITATION_PER_Z_MEV * float(data["Z"])}
            except (KeyError, TypeError, ValueError):
                pass
        return data

    @model_validator(mode="after")
    def check_composition(self) -> "Material":
        if self.A < self.Z:
            raise ValueError(f"A ({self.A}) must be >= Z ({self.Z})")
        return self


class DetectorSpec(BaseModel):
    """Cubic absorber of edge `side`."""

    model_config = ConfigDict(frozen=True)

    material: Material
    side: float = Field(..., gt=0, allow_inf_nan=False, description="Cube edge [cm]")
    specific_heat: Optional[float] = Field(
        None, ge=0, description="Specific heat [J/(kg K)]"
    )

    @property
    def volume(self) -> float:
        """cm^3"""
        return self.side**3

    @property
    def mass_g(self) -> float:
        return self.material.rho * self.volume

    @property
    def mass_kg(self) -> float:
        return self.mass_g / 1000.0

    @property
    def face_area(self) -> float:
        """cm^2"""
        return self.side**2

    @property
    def mean_chord(self) -> float:
        """4V/S for an isotropic field through a cube (2l/3), in cm."""
        return 4.0 * self.volume / (6.0 * self.face_area)

    @property
    def heat_capacity(self) -> Optional[float]:
        if self.specific_heat is None:
            return None
        return self.specific_heat * self.mass_kg


def require_finite(name: str, value: float, minimum: Optional[float] = None) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    if minimum is not None and value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value!r}")
    return value
