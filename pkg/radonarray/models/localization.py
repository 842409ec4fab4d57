import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .geometry import SPEED_OF_LIGHT
from .grids import uniform_axis


class SubArray(BaseModel):
    """Contiguous element range [start, stop) of a parent array."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(ge=0)
    stop: int
    center_x: float  # m, parent coordinates
    length: float = Field(ge=0)  # m

    @model_validator(mode="after")
    def _non_empty(self):
        if self.stop <= self.start:
            msg = f"empty sub-array [{self.start}, {self.stop})"
            raise ValueError(msg)
        return self

    @property
    def element_count(self) -> int:
        return self.stop - self.start

    def fraunhofer_distance(self, wavelength: float) -> float:
        return 2.0 * self.length**2 / wavelength


class AoAEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    center_x: float  # m
    slowness: float  # s/m
    delay: float  # s, arrival time at the sub-array centre
    peak_semblance: float = Field(ge=0, le=1 + 1e-9)

    @field_validator("slowness")
    @classmethod
    def _slowness_is_physical(cls, value: float) -> float:
        return float(np.clip(value, -1.0 / SPEED_OF_LIGHT, 1.0 / SPEED_OF_LIGHT))

    @property
    def bearing(self) -> np.ndarray:
        """Unit vector (x, z) from the sub-array centre toward the source.

        Moveout slope is positive on the far side of the source, so the ray
        leans against the sign of the slowness.
        """
        sin_theta = -SPEED_OF_LIGHT * self.slowness
        return np.array([sin_theta, np.sqrt(max(0.0, 1.0 - sin_theta**2))])


class PositionEstimate(BaseModel):
    model_config = ConfigDict(frozen=True)

    x0: float  # m
    z0: float = Field(gt=0)  # m
    residual: float = Field(ge=0)  # m, RMS perpendicular ray distance
    estimates: list[AoAEstimate]

    @property
    def range(self) -> float:
        return float(np.hypot(self.x0, self.z0))


class LocalizationResult(BaseModel):
    """Fused position and the envelope extracted along its hyperbola."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    position: PositionEstimate
    subarray_count: int
    envelope: np.ndarray
    t_start: float
    dt: float = Field(gt=0)
    peak_time: float
    coherent_gain: float

    @field_validator("envelope", mode="before")
    @classmethod
    def _frozen_envelope(cls, value) -> np.ndarray:
        vector = np.array(value, dtype=np.float64, copy=True).ravel()
        vector.setflags(write=False)
        return vector

    @property
    def t_axis(self) -> np.ndarray:
        return uniform_axis(self.t_start, self.dt, self.envelope.size)
