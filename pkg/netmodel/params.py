from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from geometry.lattice import apothem_for_density

MAX_SEED = 2**64 - 1


class LinkMode(str, Enum):
    EXACT_CELL = "exact_cell"
    RAYLEIGH = "rayleigh"


class SidelobeMode(str, Enum):
    CONSTANT = "constant"
    UNIFORM = "uniform"


class Mode(str, Enum):
    CENTER = "center"
    TYPICAL = "typical"


class SimParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    lam: float = Field(alias="lambda")
    eta: float
    nu: float
    alpha: float
    delta1: float
    delta2: float
    delta: float
    theta: float
    m_antennas: int | None = None
    rings: int = Field(default=3, ge=0)
    link_mode: LinkMode = LinkMode.RAYLEIGH
    sidelobe_mode: SidelobeMode = SidelobeMode.CONSTANT
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    cell_attempts: int = Field(default=10_000, ge=1)
    outer_radius: float | None = None

    @field_validator("lam", "eta")
    @classmethod
    def _positive_density(cls, value: float) -> float:
        if not (math.isfinite(value) and value > 0):
            raise ValueError("density must be positive")
        return value

    @field_validator("alpha")
    @classmethod
    def _alpha_above_two(cls, value: float) -> float:
        if not value > 2:
            raise ValueError("path-loss exponent must exceed 2 (far-field interference diverges)")
        return value

    @field_validator("nu")
    @classmethod
    def _nu_fraction(cls, value: float) -> float:
        if not 0 < value <= 1:
            raise ValueError("interior fraction nu must lie in (0, 1]")
        return value

    @field_validator("delta1", "delta2", "delta", "theta")
    @classmethod
    def _positive(cls, value: float) -> float:
        if not (math.isfinite(value) and value > 0):
            raise ValueError("must be positive")
        return value

    @field_validator("m_antennas")
    @classmethod
    def _antennas(cls, value: int | None) -> int | None:
        if value is not None and value < 1:
            raise ValueError("antenna count must be at least 1 (null for unlimited)")
        return value

    @field_validator("outer_radius")
    @classmethod
    def _outer(cls, value: float | None) -> float | None:
        if value is not None and not value > 0:
            raise ValueError("outer radius must be positive")
        return value

    @field_validator("delta2")
    @classmethod
    def _mainlobe_bounds(cls, value: float, info: ValidationInfo) -> float:
        delta1 = info.data.get("delta1")
        if delta1 is not None and delta1 > value:
            raise ValueError("delta1 must not exceed delta2")
        return value

    @field_validator("link_mode", "sidelobe_mode", mode="before")
    @classmethod
    def _lower_enum(cls, value: object) -> object:
        return value.lower() if isinstance(value, str) else value

    @property
    def k(self) -> float:
        return self.lam / self.eta

    @property
    def rho(self) -> float:
        return apothem_for_density(self.eta)

    @property
    def interior_apothem(self) -> float:
        return math.sqrt(self.nu) * self.rho

    @property
    def window_radius(self) -> float:
        if self.outer_radius is not None:
            return self.outer_radius
        return (2 * self.rings + 1) * self.rho

    @property
    def unlimited_nulling(self) -> bool:
        return self.m_antennas is None

    def with_k(self, k: float, hold: str = "lambda") -> SimParams:
        if not k > 0:
            raise ValueError(f"K must be positive, got {k}")
        if hold == "lambda":
            return self.model_copy(update={"eta": self.lam / k})
        if hold == "eta":
            return self.model_copy(update={"lam": self.eta * k})
        raise ValueError(f"hold must be 'lambda' or 'eta', got {hold!r}")

    def echo(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)
