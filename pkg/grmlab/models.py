from enum import Enum
from typing import Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from . import channel as ch
from .exceptions import ConfigError, InvalidChannel
from .gf import field_of_size
from .grm import LinearCode, grm_make, linear_code
from .numeric import Number, parse_entry
from .scan import ScanMode

Entry = Union[str, int, float]


def parse_t(value: Entry) -> Number:
    t = parse_entry(value)
    if not 0 <= t <= 1:
        raise ValueError(f"t = {value} is outside [0, 1]")
    return t


# --- Codes and channels ---


class CodePayload(BaseModel):
    """Either RM_q(r, m) or an explicit generator over F_q."""

    q: int
    r: Optional[int] = None
    m: Optional[int] = None
    generator: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def one_description(self) -> "CodePayload":
        if self.generator is None and (self.r is None or self.m is None):
            raise ValueError("give r and m, or a generator")
        return self

    def to_code(self) -> LinearCode:
        spec = field_of_size(self.q)
        if self.generator is not None:
            return linear_code(spec, np.array(self.generator, dtype=np.int64))
        return grm_make(spec, self.r, self.m)


class ChannelName(str, Enum):
    BSC = "bsc"
    BEC = "bec"
    Z = "z"
    QSC = "qsc"
    QEC = "qec"
    IDENTITY = "identity"
    UNINFORMATIVE = "uninformative"
    ADDITIVE = "additive"


class ChannelPayload(BaseModel):
    """A matrix (entries as "num/den" strings or floats), a builtin, or a file."""

    q: Optional[int] = None
    outputs: Optional[List[str]] = None
    matrix: Optional[List[List[Entry]]] = None
    builtin: Optional[ChannelName] = None
    param: Optional[Entry] = None
    noise: Optional[List[Entry]] = None
    file: Optional[str] = None

    def to_channel(self, q: Optional[int] = None) -> ch.DiscreteChannel:
        if self.file is not None:
            return ch.load_channel(self.file)
        if self.matrix is not None:
            data: Dict[str, Any] = {"matrix": self.matrix, "outputs": self.outputs}
            if self.q is not None:
                data["q"] = self.q
            return ch.channel_from_dict(data)
        if self.builtin is None:
            raise InvalidChannel("channel needs a matrix, a builtin name or a file")
        size = self.q or q
        param = parse_entry(self.param) if self.param is not None else None
        name = self.builtin
        if name is ChannelName.IDENTITY:
            return ch.identity_channel(_need(size))
        if name is ChannelName.UNINFORMATIVE:
            return ch.uninformative(_need(size))
        if name is ChannelName.ADDITIVE:
            if self.noise is None:
                raise InvalidChannel("additive channel needs a noise pmf")
            return ch.additive_noise(len(self.noise), [parse_entry(v) for v in self.noise])
        if param is None:
            raise InvalidChannel(f"{name.value} needs a parameter")
        if name is ChannelName.BSC:
            return ch.bsc(param)
        if name is ChannelName.BEC:
            return ch.bec(param)
        if name is ChannelName.Z:
            return ch.z_channel(param)
        if name is ChannelName.QSC:
            return ch.qsc(_need(size), param)
        return ch.qec(_need(size), param)


def _need(q: Optional[int]) -> int:
    if q is None:
        raise InvalidChannel("channel size q is required")
    return q


# --- Suite ---


class SuiteConfig(BaseModel):
    q_list: List[int] = Field(default_factory=lambda: [2, 3, 4, 5])
    instances: int = Field(200, ge=0)
    # Coset-level checks run exact pattern expansions; they get their own count
    code_instances: int = Field(4, ge=0)
    seed: int = 0
    checks: Optional[List[str]] = None


class FailureRecord(BaseModel):
    instance: Dict[str, Any]
    margin: Union[str, float]
    seed: int


class CheckReport(BaseModel):
    check: str
    anchor: str
    instances: int
    not_applicable: int = 0
    worst_margin: Optional[Union[str, float]] = None
    failures: List[FailureRecord] = Field(default_factory=list)
    fixtures: List[Dict[str, Any]] = Field(default_factory=list)
    seed: int
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_record(self) -> Dict[str, Any]:
        """Serialized form without wall-clock data."""
        return self.model_dump(mode="json", exclude={"runtime"})


class SuiteResult(BaseModel):
    reports: List[CheckReport]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


# --- Experiments ---


class ExperimentConfig(BaseModel):
    code: CodePayload
    channel: ChannelPayload
    t_grid: Union[List[Entry], str] = Field(
        default_factory=lambda: [f"{i}/10" for i in range(11)]
    )
    mode: ScanMode = ScanMode.EXACT
    samples: int = Field(100_000, ge=1)
    seed: int = 0
    workers: int = Field(1, ge=1)
    out: Optional[str] = None

    @field_validator("t_grid")
    @classmethod
    def check_grid(cls, value: Union[List[Entry], str]) -> Union[List[Entry], str]:
        if isinstance(value, str):
            if value != "exact-polynomial":
                raise ValueError('t_grid must be a list or "exact-polynomial"')
            return value
        for t in value:
            parse_t(t)
        return value

    def grid(self) -> List[Number]:
        if isinstance(self.t_grid, str):
            return []
        return [parse_t(t) for t in self.t_grid]


def load_experiment(data: Dict[str, Any]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValueError as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc


# --- HTTP payloads ---


class RateResponse(BaseModel):
    q: int
    r: int
    m: int
    exact: str
    gaussian: float
    be_bound: float
    error: float


class PunctureRequest(BaseModel):
    q: int
    r: int
    m: int
    k: int


class PunctureResponse(BaseModel):
    q: int
    r: int
    m: int
    k: int
    row_space_equal: bool
    expected_multiplicity: int
    multiplicities: Dict[str, int]
    passed: bool


class ChannelRequest(BaseModel):
    channel: ChannelPayload


class SymmetryResponse(BaseModel):
    order: int
    elements: List[List[int]]
    transitivity: str
    trace: Union[str, float]
    delta: Union[str, float]
    trace_case: str
    distance: Union[str, float]
    bound: Union[str, float]
    inequality_holds: bool


class CosetScanRequest(BaseModel):
    code: CodePayload
    channel: ChannelPayload
    t_grid: List[Entry] = Field(default_factory=lambda: ["0", "1/2", "1"])

    @field_validator("t_grid")
    @classmethod
    def check_grid(cls, value: List[Entry]) -> List[Entry]:
        for t in value:
            parse_t(t)
        return value

    def grid(self) -> List[Number]:
        return [parse_t(t) for t in self.t_grid]

