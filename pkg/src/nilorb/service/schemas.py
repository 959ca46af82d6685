"""Pydantic envelopes shared by the HTTP service and its clients."""

from typing import Any, Dict

from pydantic import BaseModel


class Envelope(BaseModel):
    """Uniform response document for every experiment endpoint."""

    schema_version: int
    command: str
    config: Dict[str, Any]
    result: Dict[str, Any]


class ErrorRecord(BaseModel):
    """Machine-readable failure report mirroring the exit-code contract."""

    schema_version: int
    error: str
    message: str
    exit_code: int


class Health(BaseModel):
    status: str
    schema_version: int
