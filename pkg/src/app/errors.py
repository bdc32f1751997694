from typing import Any, Optional

from app.project_schemas import ExitCode


class CslbgError(Exception):
    """Base class for every error the library raises on purpose."""

    exit_code: ExitCode = ExitCode.DOMAIN

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ValidationFailure(CslbgError):
    exit_code = ExitCode.USAGE


class DataFormatError(CslbgError):
    """Malformed or inconsistent data file. `line` is 1-based when known."""

    exit_code = ExitCode.DATA_FORMAT

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        rule: Optional[str] = None,
    ):
        location = ""
        if path:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(
            f"{location}{message}", details={"path": path, "line": line, "rule": rule}
        )
        self.path = path
        self.line = line
        self.rule = rule


class DomainError(CslbgError):
    exit_code = ExitCode.DOMAIN


class OutOfRangeError(DomainError):
    pass
