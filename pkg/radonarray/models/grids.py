from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import InvalidArgumentError
from .geometry import ArrayGeometry

WindowShape = Literal["rectangular", "raised_cosine", "blackman_harris"]


def _frozen_matrix(value) -> np.ndarray:
    matrix = np.array(value, dtype=np.float64, copy=True)
    if matrix.ndim != 2:
        msg = f"expected a 2-D matrix, got shape {matrix.shape}"
        raise ValueError(msg)
    if not np.all(np.isfinite(matrix)):
        msg = "grid samples must be finite"
        raise ValueError(msg)
    matrix.setflags(write=False)
    return matrix


def _fmt(value: float) -> str:
    return repr(float(value))


def uniform_axis(start: float, step: float, count: int) -> np.ndarray:
    axis = start + np.arange(count) * step
    axis.setflags(write=False)
    return axis


def axis_params(axis, name: str) -> tuple[float, float]:
    """Return (start, step) of a strictly increasing uniform axis.

    A single-point axis has no spacing; it is given a unit step so it can
    still be stored as (start, step).
    """
    axis = np.asarray(axis, dtype=np.float64).ravel()
    if axis.size == 0:
        msg = f"{name} must not be empty"
        raise InvalidArgumentError(msg)
    if axis.size == 1:
        return float(axis[0]), 1.0
    step = float(axis[-1] - axis[0]) / (axis.size - 1)
    steps = np.diff(axis)
    if step <= 0 or not np.allclose(steps, step, rtol=1e-6, atol=0.0):
        msg = f"{name} must be strictly increasing and uniform"
        raise InvalidArgumentError(msg)
    return float(axis[0]), step


class SpaceTimeGrid(BaseModel):
    """Sampled f(t, x): one column per array element."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    samples: np.ndarray  # [n_t x M]
    dt: float = Field(gt=0)  # s
    t_start: float  # s
    geometry: ArrayGeometry

    samples_as_matrix = field_validator("samples", mode="before")(_frozen_matrix)

    @model_validator(mode="after")
    def _columns_match_elements(self):
        if self.samples.shape[1] != self.geometry.element_count:
            msg = (
                f"{self.samples.shape[1]} columns for "
                f"{self.geometry.element_count} array elements"
            )
            raise ValueError(msg)
        if self.samples.shape[0] < 1:
            msg = "a space/time grid needs at least one time sample"
            raise ValueError(msg)
        return self

    @property
    def n_t(self) -> int:
        return self.samples.shape[0]

    @property
    def t_axis(self) -> np.ndarray:
        return uniform_axis(self.t_start, self.dt, self.n_t)

    def subarray(self, start: int, stop: int) -> "SpaceTimeGrid":
        """Columns [start, stop) re-expressed on a geometry centred on the sub-array."""
        return SpaceTimeGrid(
            samples=self.samples[:, start:stop],
            dt=self.dt,
            t_start=self.t_start,
            geometry=self.geometry.sub_geometry(stop - start),
        )

    def with_samples(self, samples: np.ndarray) -> "SpaceTimeGrid":
        return SpaceTimeGrid(
            samples=samples, dt=self.dt, t_start=self.t_start, geometry=self.geometry
        )

    def header_fields(self) -> dict[str, str]:
        return {
            "kind": "spacetime",
            "row_start": _fmt(self.t_start),
            "row_step": _fmt(self.dt),
            "row_unit": "s",
            "col_start": _fmt(float(self.geometry.element_x[0])),
            "col_step": _fmt(self.geometry.spacing),
            "col_unit": "m",
            "carrier_wavelength": _fmt(self.geometry.carrier_wavelength),
        }

    @classmethod
    def from_header(cls, header: dict[str, str], payload: np.ndarray) -> "SpaceTimeGrid":
        geometry = ArrayGeometry(
            element_count=payload.shape[1],
            spacing=float(header["col_step"]),
            carrier_wavelength=float(header["carrier_wavelength"]),
        )
        return cls(
            samples=payload,
            dt=float(header["row_step"]),
            t_start=float(header["row_start"]),
            geometry=geometry,
        )


class RadonGrid(BaseModel):
    """Sampled f_r(tau, p): one column per slowness."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    samples: np.ndarray  # [n_tau x n_p]
    d_tau: float = Field(gt=0)  # s
    tau_start: float  # s
    p_start: float  # s/m
    dp: float = Field(gt=0)  # s/m

    samples_as_matrix = field_validator("samples", mode="before")(_frozen_matrix)

    @property
    def n_tau(self) -> int:
        return self.samples.shape[0]

    @property
    def tau_axis(self) -> np.ndarray:
        return uniform_axis(self.tau_start, self.d_tau, self.n_tau)

    @property
    def p_axis(self) -> np.ndarray:
        return uniform_axis(self.p_start, self.dp, self.samples.shape[1])

    def with_samples(self, samples: np.ndarray) -> "RadonGrid":
        return RadonGrid(
            samples=samples,
            d_tau=self.d_tau,
            tau_start=self.tau_start,
            p_start=self.p_start,
            dp=self.dp,
        )

    def header_fields(self) -> dict[str, str]:
        return {
            "kind": "radon",
            "row_start": _fmt(self.tau_start),
            "row_step": _fmt(self.d_tau),
            "row_unit": "s",
            "col_start": _fmt(self.p_start),
            "col_step": _fmt(self.dp),
            "col_unit": "s/m",
        }

    @classmethod
    def from_header(cls, header: dict[str, str], payload: np.ndarray) -> "RadonGrid":
        return cls(
            samples=payload,
            d_tau=float(header["row_step"]),
            tau_start=float(header["row_start"]),
            p_start=float(header["col_start"]),
            dp=float(header["col_step"]),
        )


class SemblanceGrid(BaseModel):
    """Windowed semblance s_w(tau, p), every value in [0, 1]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray  # [n_tau x n_p]
    d_tau: float = Field(gt=0)
    tau_start: float
    p_start: float
    dp: float = Field(gt=0)
    window_shape: WindowShape = "rectangular"
    window_len: int = Field(ge=1)

    values_as_matrix = field_validator("values", mode="before")(_frozen_matrix)

    @model_validator(mode="after")
    def _values_in_unit_interval(self):
        if self.values.size and (self.values.min() < 0 or self.values.max() > 1 + 1e-9):
            msg = "semblance values must lie in [0, 1]"
            raise ValueError(msg)
        return self

    @property
    def n_tau(self) -> int:
        return self.values.shape[0]

    @property
    def tau_axis(self) -> np.ndarray:
        return uniform_axis(self.tau_start, self.d_tau, self.n_tau)

    @property
    def p_axis(self) -> np.ndarray:
        return uniform_axis(self.p_start, self.dp, self.values.shape[1])

    def header_fields(self) -> dict[str, str]:
        return {
            "kind": "semblance",
            "row_start": _fmt(self.tau_start),
            "row_step": _fmt(self.d_tau),
            "row_unit": "s",
            "col_start": _fmt(self.p_start),
            "col_step": _fmt(self.dp),
            "col_unit": "s/m",
            "window_shape": self.window_shape,
            "window_len": str(self.window_len),
        }

    @classmethod
    def from_header(cls, header: dict[str, str], payload: np.ndarray) -> "SemblanceGrid":
        return cls(
            values=payload,
            d_tau=float(header["row_step"]),
            tau_start=float(header["row_start"]),
            p_start=float(header["col_start"]),
            dp=float(header["col_step"]),
            window_shape=header.get("window_shape", "rectangular"),
            window_len=int(header.get("window_len", "1")),
        )
