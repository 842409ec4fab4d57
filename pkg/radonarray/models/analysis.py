import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .grids import uniform_axis


def _frozen_vector(value) -> np.ndarray:
    vector = np.array(value, dtype=np.float64, copy=True).ravel()
    vector.setflags(write=False)
    return vector


class SlownessBand(BaseModel):
    """Closed slowness interval [p_low, p_high] in s/m."""

    model_config = ConfigDict(frozen=True)

    p_low: float
    p_high: float

    @model_validator(mode="after")
    def _ordered(self):
        if self.p_high < self.p_low:
            msg = f"p_high {self.p_high} is below p_low {self.p_low}"
            raise ValueError(msg)
        return self

    def contains(self, p: float) -> bool:
        return self.p_low <= p <= self.p_high


class SlownessProfile(BaseModel):
    """Time-summed semblance S(p), normalised to a maximum of 1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    p_start: float
    dp: float = Field(gt=0)

    values_as_vector = field_validator("values", mode="before")(_frozen_vector)

    @property
    def p_axis(self) -> np.ndarray:
        return uniform_axis(self.p_start, self.dp, self.values.size)


class SlownessMask(BaseModel):
    """tau-independent slowness response H(p) with values in [0, 1]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mask: np.ndarray
    stopped_bands: list[SlownessBand] = []
    guard_cells: int = Field(default=0, ge=0)
    taper_cells: int = Field(default=0, ge=0)

    mask_as_vector = field_validator("mask", mode="before")(_frozen_vector)

    @property
    def is_hard(self) -> bool:
        return bool(np.all((self.mask == 0.0) | (self.mask == 1.0)))


class EllipseLocus(BaseModel):
    """Stationary-phase peak locus of a near-field source in the (tau, p) plane.

    The locus satisfies (tau - t0 + p x0)^2 = (z0^2 / c^2)(1 - c^2 p^2). Sampled
    points keep only the causal branch and only slownesses with |p| < 1/c.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x0: float
    z0: float = Field(gt=0)
    t0: float
    p: np.ndarray
    tau: np.ndarray
    stationary_x: np.ndarray
    supported: np.ndarray

    arrays_as_vectors = field_validator("p", "tau", "stationary_x", mode="before")(
        _frozen_vector
    )

    @field_validator("supported", mode="before")
    @classmethod
    def _frozen_mask(cls, value) -> np.ndarray:
        mask = np.array(value, dtype=bool, copy=True).ravel()
        mask.setflags(write=False)
        return mask

    @property
    def coefficients(self) -> dict[str, float]:
        """Coefficients of z0^2/c^2 = a (tau-t0)^2 + b (tau-t0) p + d p^2."""
        return {
            "a": 1.0,
            "b": 2.0 * self.x0,
            "d": self.x0**2 + self.z0**2,
        }


class SquintReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    bandwidth_ratio: float  # B / f_c, two-sided B
    aperture_ratio: float  # L / lambda_c
    product: float
    ttd_required: bool
    worst_phase_error: float  # rad
