from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class FitPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., allow_inf_nan=False)
    y: float = Field(..., allow_inf_nan=False)
    y_err: float = Field(0.0, allow_inf_nan=False)


class FitResult(BaseModel):
    """Straight line log10(y) = slope * x + intercept."""

    model_config = ConfigDict(frozen=True)

    slope: float
    intercept: float
    slope_err: float = Field(..., ge=0)
    intercept_err: float = Field(..., ge=0)
    covariance: float = 0.0
    chi2: float = Field(..., ge=0)
    n_points: int = Field(..., ge=2)
    weighted: bool = True

    def predict(self, x: float) -> float:
        return self.slope * x + self.intercept

    def caption(self, x_name: str = "x") -> str:
        sign = "-" if self.intercept < 0 else "+"
        return f"y = {self.slope:.2f}{x_name} {sign} {abs(self.intercept):.2f}"


class LambdaScanRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    depth: float = Field(..., description="km.w.e")
    lambda_det: float = Field(..., description="1/s")
    lambda_err: float = Field(..., description="1/s")


class ContourPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    r_c: float = Field(..., gt=0, description="m")
    lambda_det: float = Field(..., ge=0, description="1/s")


class ExclusionContour(BaseModel):
    model_config = ConfigDict(frozen=True)

    depth: float
    margin_factor: float = Field(100.0, gt=0)
    site: str = ""
    points: tuple[ContourPoint, ...]

    @model_validator(mode="after")
    def check_order(self) -> "ExclusionContour":
        for a, b in zip(self.points, self.points[1:]):
            if b.r_c <= a.r_c:
                raise ValueError("contour points must be strictly increasing in r_c")
        return self


class OverlaySeries(BaseModel):
    """Published bound read from a user file, drawn but never computed."""

    model_config = ConfigDict(frozen=True)

    label: str
    points: tuple[ContourPoint, ...]


class SurfaceEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambda_det: float
    lambda_err: float = 0.0
    source: str
    power: Optional[float] = None
