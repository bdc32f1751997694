from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ThermalSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    heat_capacity: float = Field(..., gt=0, allow_inf_nan=False, description="C [J/K]")
    thermal_resistance: float = Field(
        ..., gt=0, allow_inf_nan=False, description="R [K/W]"
    )
    bath_temperature: float = Field(..., gt=0, allow_inf_nan=False, description="T0 [K]")

    @property
    def time_constant(self) -> float:
        """tau = C R, seconds."""
        return self.heat_capacity * self.thermal_resistance


class EnergyDistribution(BaseModel):
    """Discrete tabulated event-energy distribution (MeV)."""

    model_config = ConfigDict(frozen=True)

    values: tuple[float, ...] = Field(..., min_length=1)
    probabilities: tuple[float, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_distribution(self) -> "EnergyDistribution":
        if len(self.values) != len(self.probabilities):
            raise ValueError("values and probabilities must have equal length")
        if any(v < 0 for v in self.values):
            raise ValueError("event energies must be >= 0")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be >= 0")
        if abs(sum(self.probabilities) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")
        return self


class TraceConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    duration: float = Field(..., gt=0, allow_inf_nan=False, description="s")
    sample_interval: float = Field(..., gt=0, allow_inf_nan=False, description="s")
    event_rate: float = Field(0.0, ge=0, allow_inf_nan=False, description="1/s")
    event_energy: float = Field(
        1.0, ge=0, description="Fixed event energy [MeV], used when no distribution"
    )
    energy_distribution: Optional[EnergyDistribution] = None
    csl_power: float = Field(0.0, ge=0, allow_inf_nan=False, description="W")
    rng_seed: int = Field(0, ge=0)
    include_fluctuation_noise: bool = False
    injected_events: tuple[tuple[float, float], ...] = Field(
        default=(), description="Extra (time [s], energy [MeV]) events"
    )

    @model_validator(mode="after")
    def check_sampling(self) -> "TraceConfig":
        if self.sample_interval > self.duration:
            raise ValueError("sample_interval must be <= duration")
        for time, energy in self.injected_events:
            if time < 0 or energy < 0:
                raise ValueError("injected events need time >= 0 and energy >= 0")
        return self


class TraceEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    time: float
    energy: float = Field(..., description="MeV")


class TraceResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray
    temperatures: np.ndarray
    events: tuple[TraceEvent, ...]
    metadata: dict[str, Any]

    @field_validator("times", "temperatures")
    @classmethod
    def one_dimensional(cls, v: np.ndarray) -> np.ndarray:
        if v.ndim != 1:
            raise ValueError("trace arrays must be one-dimensional")
        return v


class SubtractionResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    cleaned: np.ndarray
    recovered_gradient: float = Field(..., description="K")
    detected: tuple[TraceEvent, ...]


class ThermalPreset(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    spec: ThermalSpec
    absorber_mass: float = Field(..., gt=0, description="kg")
    relative_accuracy: float = Field(..., gt=0, lt=1)
    detector: str = Field(..., description="Detector preset of the same absorber")
    description: str = ""
