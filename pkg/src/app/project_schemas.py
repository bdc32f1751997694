from enum import IntEnum
from pathlib import Path
from typing import Generic, Literal, Optional, TypeVar

from pydantic import BaseModel, ConfigDict, Field

T = TypeVar("T")


class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1
    USAGE = 2
    DATA_FORMAT = 3
    DOMAIN = 4


class CommandResult(BaseModel, Generic[T]):
    code: int
    message: str
    status: str
    data: Optional[T] = None

    @classmethod
    def success(
        cls, message: str = "Success", data: Optional[T] = None, code: int = ExitCode.OK
    ):
        return cls(code=int(code), message=message, status="success", data=data)

    @classmethod
    def error(cls, message: str = "Something went wrong", code: int = ExitCode.DOMAIN):
        return cls(code=int(code), message=message, status="error", data=None)


FacesConvention = Literal["top+sides", "all", "top"]
ConstantProfile = Literal["paper", "codata"]
PathModel = Literal["side", "monte_carlo"]


class RunConfig(BaseModel):
    """Per-invocation options merged from settings and command-line flags."""

    model_config = ConfigDict(frozen=True)

    subcommand: Literal[
        "csl-heating", "gamma-scan", "muon-scan", "sensitivity", "exclusion", "bolometer", "fit"
    ]
    data_dir: Path
    out_dir: Path
    margin_factor: float = Field(100.0, gt=0, le=1e6)
    faces: FacesConvention = "top+sides"
    constants: ConstantProfile = "paper"
    seed: int = Field(42, ge=0)
    verbosity: int = Field(0, ge=-1, le=2)
    as_json: bool = False
