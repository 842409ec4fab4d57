from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .geometry import SPEED_OF_LIGHT, PulseSpec


class FarFieldSource(BaseModel):
    """Plane wave a(t - t0 - s_x x)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["far_field"] = "far_field"
    slowness: float  # s/m
    delay: float  # s
    pulse: PulseSpec

    @field_validator("slowness")
    @classmethod
    def _slowness_is_physical(cls, value: float) -> float:
        # Tolerate the rounding of values written as +/- 1/c in scenario files.
        if abs(value) > (1.0 + 1e-12) / SPEED_OF_LIGHT:
            msg = f"|slowness| must not exceed 1/c, got {value}"
            raise ValueError(msg)
        return value

    def arrival_time(self, x: np.ndarray) -> np.ndarray:
        return self.delay + self.slowness * np.asarray(x)

    def spreading(self, x: np.ndarray) -> np.ndarray:
        return np.ones_like(np.asarray(x, dtype=float))


class NearFieldSource(BaseModel):
    """Spherical wave a(t - t0 - R/c) / R from a point at (x0, z0)."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["near_field"] = "near_field"
    x0: float  # m
    z0: float = Field(gt=0)  # m
    delay: float  # s
    pulse: PulseSpec

    def distance(self, x: np.ndarray) -> np.ndarray:
        return np.hypot(np.asarray(x) - self.x0, self.z0)

    def arrival_time(self, x: np.ndarray) -> np.ndarray:
        return self.delay + self.distance(x) / SPEED_OF_LIGHT

    def spreading(self, x: np.ndarray) -> np.ndarray:
        return 1.0 / self.distance(x)


SourceSpec = Annotated[Union[FarFieldSource, NearFieldSource], Field(discriminator="kind")]
