import math
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    computed_field,
    field_validator,
    model_validator,
)

from src.core.config import (
    DEFAULT_BUDGET,
    DEFAULT_ELLS,
    DEFAULT_SEED,
    EXHAUSTIVE_ELL_CAP,
    OUTPUT_FORMATS,
)
from src.core.errors import ConfigError, OmegaOutOfRangeError
from src.core.modarith import is_prime

Subcommand = Literal["duke", "blcount", "tx", "equidist", "derangement", "sieve"]
SieveDemo = Literal["zero", "even-numerator", "half"]


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    height: List[int] = Field(default_factory=lambda: [10], min_length=1)
    ell: List[int] = Field(default_factory=lambda: list(DEFAULT_ELLS), min_length=1)
    budget: int = Field(default=DEFAULT_BUDGET, ge=0)
    primes: List[int] = Field(default_factory=lambda: [101])
    ell_cap: int = Field(default=EXHAUSTIVE_ELL_CAP, ge=2)
    shards: int = Field(default=1, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    out: Optional[str] = None
    summary: Optional[str] = None
    format: str = "csv"
    demo: SieveDemo = "even-numerator"
    log_window: Optional[float] = Field(default=None, gt=0)

    @field_validator("height")
    @classmethod
    def validate_height(cls, v):
        if not all(h >= 1 for h in v):
            raise ValueError("heights must be positive")
        return v

    @field_validator("ell")
    @classmethod
    def validate_ell(cls, v):
        bad = [q for q in v if not is_prime(q)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        return sorted(set(v))

    @field_validator("primes")
    @classmethod
    def validate_primes(cls, v):
        bad = [p for p in v if p <= 3 or not is_prime(p)]
        if bad:
            raise ValueError(f"primes must exceed 3 and be prime: {bad}")
        return v

    @field_validator("format")
    @classmethod
    def validate_format(cls, v):
        if v not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {OUTPUT_FORMATS}")
        return v

    @classmethod
    def build(cls, **kwargs) -> "ExperimentConfig":
        try:
            return cls(**kwargs)
        except ValidationError as e:
            raise ConfigError(
                "invalid experiment configuration",
                {"errors": [err["msg"] for err in e.errors()]},
            ) from e

    def emitted(self) -> Dict[str, Any]:
        """Config as written to output; shards and output paths never change results."""
        return self.model_dump(exclude={"shards", "out", "summary"})


class Reason(str, Enum):
    REDUCIBLE = "Reducible"
    SPLIT_CARTAN_NORM = "SplitCartanNorm"
    NONSPLIT_CARTAN_NORM = "NonsplitCartanNorm"
    EXCEPTIONAL = "Exceptional"


ALL_REASONS: FrozenSet[Reason] = frozenset(Reason)


class ImageVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    ell: int
    reasons: FrozenSet[Reason] = Field(default_factory=lambda: ALL_REASONS)
    primes_used: int = Field(default=0, ge=0)

    @computed_field
    @property
    def kind(self) -> str:
        return "ContainsSL2" if not self.reasons else "Candidate"

    @property
    def contains_sl2(self) -> bool:
        return not self.reasons

    def label(self) -> str:
        if self.contains_sl2:
            return "ContainsSL2"
        return "Candidate(" + "|".join(sorted(r.value for r in self.reasons)) + ")"


class Mod2Image(str, Enum):
    FULL = "Full"
    CYCLIC3 = "Cyclic3"
    ORDER_LE2 = "OrderLE2"


class SieveProblem(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    degree: Literal[1] = 1
    omega: Dict[int, Fraction] = Field(default_factory=dict)
    excluded: FrozenSet[int] = frozenset()
    x: float = Field(ge=2)
    Q: Optional[float] = None

    @field_validator("omega", mode="before")
    @classmethod
    def validate_omega(cls, v):
        out = {}
        for p, w in dict(v).items():
            frac = Fraction(w)
            if not 0 <= frac < 1:
                raise OmegaOutOfRangeError(p, frac)
            out[int(p)] = frac
        return out

    @model_validator(mode="after")
    def default_modulus(self):
        if self.Q is None:
            self.Q = math.sqrt(self.x)
        if self.Q < 1:
            raise ValueError("Q must be at least 1")
        return self

    def omega_at(self, p: int) -> Fraction:
        if p in self.excluded:
            return Fraction(0)
        return self.omega.get(p, Fraction(0))


class DukeRow(BaseModel):
    a: int
    b: int
    mod2: Optional[str] = None
    verdicts: Dict[int, str] = Field(default_factory=dict)
    in_b: int = 0
    t_witness: Optional[int] = None

    def flat(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"a": self.a, "b": self.b, "mod2": self.mod2}
        for ell in sorted(self.verdicts):
            row[f"ell_{ell}"] = self.verdicts[ell]
        row["in_b"] = self.in_b
        row["t_witness"] = self.t_witness
        return row


class BlcountRow(BaseModel):
    x: int
    ell: int
    measured: int
    bound_shape: float
    ratio: float


class TxRow(BaseModel):
    a: int
    b: int
    witness: Optional[int] = None
    window: int


class EquidistRow(BaseModel):
    p: int
    ell: int
    t: int
    d: int
    count: int
    predicted: float
    normalized_deviation: float
    tame: int


class DerangementRow(BaseModel):
    ell: int
    subgroup: str
    det: Optional[int] = None
    ratio: Optional[float] = None
    derangement_proportion: Optional[float] = None
    status: str = "ok"


class SieveRow(BaseModel):
    demo: str
    x: int
    Q: float
    L: float
    L_exact: str
    bound: float
    count: int
    within: int
