from collections.abc import Sequence
from logging import getLogger

import numpy as np

from .errors import InvalidArgumentError
from .models import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    PulseSpec,
    SourceSpec,
    SpaceTimeGrid,
)

logger = getLogger(__name__)

OVERSAMPLING = 4  # samples per period of f0 + B_ss
PULSE_HALF_SPAN = 5.0  # sigma_t kept either side of an arrival by the default window
EMPTY_RECORD_SAMPLES = 256


def make_array(element_count: int, carrier_freq: float) -> ArrayGeometry:
    """Half-wavelength uniform linear array centred on the origin.

    Parameters
    ----------
    element_count (int): Number of elements M, at least 2.
    carrier_freq (float): Carrier frequency in Hz; sets the spacing c / (2 f_c).
    """
    if element_count < 2:
        msg = f"an array needs at least 2 elements, got {element_count}"
        raise InvalidArgumentError(msg)
    if carrier_freq <= 0:
        msg = f"carrier frequency must be positive, got {carrier_freq}"
        raise InvalidArgumentError(msg)

    wavelength = SPEED_OF_LIGHT / carrier_freq
    return ArrayGeometry(
        element_count=element_count,
        spacing=wavelength / 2.0,
        carrier_wavelength=wavelength,
    )


def gaussian_pulse(t, pulse: PulseSpec):
    """a(t) cos(2 pi f0 t) with a(t) = amplitude exp(-t^2 / (2 sigma_t^2))."""
    t = np.asarray(t, dtype=np.float64)
    envelope = pulse.amplitude * np.exp(-0.5 * (t / pulse.sigma_t) ** 2)
    return envelope * np.cos(2.0 * np.pi * pulse.center_freq * t)


def default_sampling(
    geometry: ArrayGeometry,
    sources: Sequence[SourceSpec],
    pulse: PulseSpec | None = None,
    dt: float | None = None,
    t_start: float | None = None,
) -> tuple[float, float, int]:
    """Time axis covering every arrival with PULSE_HALF_SPAN sigma_t to spare.

    Parameters
    ----------
    geometry (ArrayGeometry): Receiving array.
    sources (Sequence[SourceSpec]): Far- and near-field emitters.
    pulse (PulseSpec, optional): Pulse used for dt when there are no sources. Defaults to None.
    dt (float, optional): Fixed sampling interval. Defaults to None (derived from the pulses).
    t_start (float, optional): Fixed first sample time. Defaults to None (derived from the arrivals).

    Returns
    -------
    tuple[float, float, int]: (t_start, dt, n_t). A derived t_start is a multiple of dt so
    that delays given on the sampling lattice land exactly on samples. n_t always reaches
    the latest arrival plus PULSE_HALF_SPAN sigma_t from the effective t_start and dt.
    """
    if dt is None:
        pulses = [source.pulse for source in sources] or ([pulse] if pulse else [])
        if not pulses:
            msg = "cannot choose a sampling interval without a pulse"
            raise InvalidArgumentError(msg)
        dt = min(1.0 / (OVERSAMPLING * (p.center_freq + p.single_side_bandwidth)) for p in pulses)
    elif dt <= 0:
        msg = f"dt must be positive, got {dt}"
        raise InvalidArgumentError(msg)

    if not sources:
        return (0.0 if t_start is None else float(t_start)), dt, EMPTY_RECORD_SAMPLES

    x = geometry.element_x
    latest = max(
        float(np.max(s.arrival_time(x))) + PULSE_HALF_SPAN * s.pulse.sigma_t for s in sources
    )
    if t_start is None:
        earliest = min(
            float(np.min(s.arrival_time(x))) - PULSE_HALF_SPAN * s.pulse.sigma_t for s in sources
        )
        t_start = float(np.floor(earliest / dt) * dt)
    n_t = max(int(np.ceil((latest - t_start) / dt)) + 1, 1)
    return float(t_start), dt, n_t


def synthesize(
    geometry: ArrayGeometry,
    sources: Sequence[SourceSpec],
    t_start: float,
    dt: float,
    n_t: int,
    noise_std: float = 0.0,
    seed: int | None = None,
) -> SpaceTimeGrid:
    """Superpose plane and spherical arrivals on the array, plus optional white noise.

    Parameters
    ----------
    geometry (ArrayGeometry): Receiving array.
    sources (Sequence[SourceSpec]): Far- and near-field emitters.
    t_start (float): Time of the first sample (s).
    dt (float): Sampling interval (s).
    n_t (int): Number of time samples.
    noise_std (float, optional): Standard deviation of additive white Gaussian noise. Defaults to 0.
    seed (int, optional): Seed of the noise generator. Defaults to None.
    """
    if dt <= 0:
        msg = f"dt must be positive, got {dt}"
        raise InvalidArgumentError(msg)
    if n_t < 1:
        msg = f"n_t must be at least 1, got {n_t}"
        raise InvalidArgumentError(msg)
    if noise_std < 0:
        msg = f"noise_std must be non-negative, got {noise_std}"
        raise InvalidArgumentError(msg)

    x = geometry.element_x
    t = t_start + np.arange(n_t)[:, None] * dt
    samples = np.zeros((n_t, geometry.element_count))

    for source in sources:
        lag = t - source.arrival_time(x)[None, :]
        samples += gaussian_pulse(lag, source.pulse) * source.spreading(x)[None, :]

    if noise_std > 0:
        rng = np.random.default_rng(seed)
        samples += rng.normal(0.0, noise_std, size=samples.shape)

    logger.debug(
        f"Synthesized {len(sources)} sources on {geometry.element_count} elements, "
        f"{n_t} samples from t={t_start:.4e} s"
    )
    return SpaceTimeGrid(samples=samples, dt=dt, t_start=t_start, geometry=geometry)


def trajectory_rms(grid: SpaceTimeGrid, source: SourceSpec, half_width: float) -> float:
    """RMS of the samples lying within half_width of a source's arrival curve."""
    lag = grid.t_axis[:, None] - source.arrival_time(grid.geometry.element_x)[None, :]
    window = np.abs(lag) <= half_width
    if not np.any(window):
        return 0.0
    return float(np.sqrt(np.mean(grid.samples[window] ** 2)))
