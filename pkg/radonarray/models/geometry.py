from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

SPEED_OF_LIGHT = 299_792_458.0  # m/s


class ArrayGeometry(BaseModel):
    """Uniform linear array centred on the origin, lying on z = 0."""

    model_config = ConfigDict(frozen=True)

    element_count: int = Field(ge=2)
    spacing: float = Field(gt=0)  # m
    carrier_wavelength: float = Field(gt=0)  # m

    @property
    def element_x(self) -> np.ndarray:
        """Element x-coordinates (m), strictly increasing and symmetric about 0."""
        x = -self.length / 2 + np.arange(self.element_count) * self.spacing
        x.setflags(write=False)
        return x

    @property
    def length(self) -> float:
        """Aperture L = (M - 1) dx in metres."""
        return (self.element_count - 1) * self.spacing

    def sub_geometry(self, element_count: int) -> "ArrayGeometry":
        """A centred array with the same spacing and wavelength but fewer elements."""
        return ArrayGeometry(
            element_count=element_count,
            spacing=self.spacing,
            carrier_wavelength=self.carrier_wavelength,
        )


class PulseSpec(BaseModel):
    """Gaussian-envelope pulse modulated onto a carrier."""

    model_config = ConfigDict(frozen=True)

    center_freq: float = Field(gt=0)  # Hz
    single_side_bandwidth: float = Field(gt=0)  # Hz
    envelope_shape: Literal["gaussian"] = "gaussian"
    amplitude: float = 1.0

    @model_validator(mode="after")
    def _passband_is_real(self):
        if self.single_side_bandwidth > self.center_freq:
            msg = (
                f"single_side_bandwidth {self.single_side_bandwidth} exceeds "
                f"center_freq {self.center_freq}"
            )
            raise ValueError(msg)
        return self

    @property
    def sigma_t(self) -> float:
        """Envelope standard deviation; the spectrum is e^-2 of peak at f0 +/- B_ss."""
        return 1.0 / (np.pi * self.single_side_bandwidth)

    @property
    def duration(self) -> float:
        """Nominal pulse duration, 6 sigma_t."""
        return 6.0 * self.sigma_t

    @property
    def two_sided_bandwidth(self) -> float:
        return 2.0 * self.single_side_bandwidth

    def scaled(self, factor: float) -> "PulseSpec":
        return self.model_copy(update={"amplitude": self.amplitude * factor})
