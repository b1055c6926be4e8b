"""Request and response bodies of the HTTP service.

Every response carries the rendered two-section report and the exit code
the thin CLI client should use; structured fields duplicate the machine
section for programmatic callers.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ClassifyRequest(BaseModel):
    descriptor: str


class ClassifyResponse(BaseModel):
    descriptor: str
    group: str
    torsion: str
    quotient: str
    uniform: str
    bound: int | None
    reason: str | None = None
    rules: list[str]
    report: str
    exit_code: int


class ChainRequest(BaseModel):
    descriptor: str
    matrix: list[list[int]]


class ChainResponse(BaseModel):
    group: str
    chain: list[int]
    stab_index: int
    report: str
    exit_code: int


class SpStabRequest(BaseModel):
    descriptor: str
    alpha: str


class ComponentStep(BaseModel):
    index: int
    valuation: str  # integer, or "inf" for a zero component
    step: int


class SpStabResponse(BaseModel):
    alpha: str
    case: str
    index: int
    per_prime: list[ComponentStep]
    report: str
    exit_code: int


class OracleRequest(BaseModel):
    max_card: int = Field(ge=1)
    primes: list[int]
    cap: int | None = None
    workers: int = Field(default=1, ge=1)


class OracleRow(BaseModel):
    group: str
    count: int
    max_stab: int
    bound: int
    witness: str
    ok: bool


class OracleResponse(BaseModel):
    rows: list[OracleRow]
    failures: list[str]
    violations: int
    max_ratio: str
    report: str
    exit_code: int


class ExampleRequest(BaseModel):
    id: str


class ExampleRow(BaseModel):
    key: str
    expected: str
    computed: str
    match: bool


class ExampleResponse(BaseModel):
    id: str
    descriptor: str
    rows: list[ExampleRow]
    all_match: bool
    report: str
    exit_code: int
