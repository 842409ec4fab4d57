from logging import getLogger

import numpy as np
from scipy import ndimage
from scipy.signal import windows

from .errors import InvalidArgumentError
from .models import PulseSpec, SemblanceGrid, SlownessBand, SlownessProfile, SpaceTimeGrid, WindowShape
from .models.grids import axis_params, uniform_axis
from .sampling import sample_traces

logger = getLogger(__name__)

DEFAULT_ENERGY_FLOOR = 1e-6


def window_taps(shape: WindowShape, length: int) -> np.ndarray:
    """Non-negative smoothing window of `length` samples, normalised to unit sum.

    Tapered shapes are taken from a window two samples longer with the zero
    end points dropped, so short windows keep every tap positive.
    """
    if length < 1:
        msg = f"window length must be at least 1 sample, got {length}"
        raise InvalidArgumentError(msg)
    if shape == "rectangular":
        taps = windows.boxcar(length)
    elif shape == "raised_cosine":
        taps = windows.hann(length + 2)[1:-1]
    elif shape == "blackman_harris":
        taps = windows.blackmanharris(length + 2)[1:-1]
    else:
        msg = f"Unknown window shape {shape}"
        raise InvalidArgumentError(msg)
    return taps / taps.sum()


def default_window_len(pulse: PulseSpec, dt: float) -> int:
    """Arrival pulse duration (6 sigma_t) in samples."""
    return max(1, int(round(pulse.duration / dt)))


def semblance_terms(
    data: SpaceTimeGrid,
    p_axis,
    tau_axis,
    window_len: int,
    window_shape: WindowShape = "rectangular",
) -> tuple[np.ndarray, np.ndarray]:
    """Windowed coherent and total energy along every line tau + p x.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]: ([(1/M') sum f]^2 * w, [(1/M') sum f^2] * w),
    both [n_tau x n_p]. M' counts the traces whose sample time is inside the record.
    """
    taps = window_taps(window_shape, window_len)
    x = data.geometry.element_x
    tau_axis = np.asarray(tau_axis, dtype=np.float64)
    p_axis = np.asarray(p_axis, dtype=np.float64)

    coherent = np.zeros((tau_axis.size, p_axis.size))
    total = np.zeros_like(coherent)
    for k, p in enumerate(p_axis):
        values, inside = sample_traces(
            data.samples, data.t_start, data.dt, tau_axis[:, None] + p * x[None, :]
        )
        count = inside.sum(axis=1)
        live = count > 0
        coherent[live, k] = (values[live].sum(axis=1) / count[live]) ** 2
        total[live, k] = (values[live] ** 2).sum(axis=1) / count[live]

    coherent = ndimage.convolve1d(coherent, taps, axis=0, mode="constant", cval=0.0)
    total = ndimage.convolve1d(total, taps, axis=0, mode="constant", cval=0.0)
    return coherent, total


def semblance_ratio(
    coherent: np.ndarray, total: np.ndarray, energy_floor: float = DEFAULT_ENERGY_FLOOR
) -> np.ndarray:
    """coherent / total, with empty or numerically negligible cells set to 0."""
    ceiling = float(total.max()) if total.size else 0.0
    if ceiling <= 0.0:
        return np.zeros_like(total)
    live = total > max(energy_floor * ceiling, 0.0)
    ratio = np.zeros_like(total)
    np.divide(coherent, total, out=ratio, where=live)
    return np.clip(ratio, 0.0, 1.0)


def semblance(
    data: SpaceTimeGrid,
    p_axis,
    tau_axis,
    window_len: int,
    window_shape: WindowShape = "rectangular",
    energy_floor: float = DEFAULT_ENERGY_FLOOR,
) -> SemblanceGrid:
    """Ratio of windowed coherent to windowed total energy on the (tau, p) plane.

    Parameters
    ----------
    data (SpaceTimeGrid): Space/time record.
    p_axis (array-like): Uniform slowness grid (s/m).
    tau_axis (array-like): Uniform delay grid (s).
    window_len (int): Smoothing window length in samples.
    window_shape (WindowShape, optional): Window taper. Defaults to "rectangular".
    energy_floor (float, optional): Cells whose windowed energy is below this
        fraction of the grid maximum are reported as 0. Defaults to 1e-6.
    """
    p_start, dp = axis_params(p_axis, "p_axis")
    tau_start, d_tau = axis_params(tau_axis, "tau_axis")
    p_axis = uniform_axis(p_start, dp, np.size(p_axis))
    tau_axis = uniform_axis(tau_start, d_tau, np.size(tau_axis))

    coherent, total = semblance_terms(data, p_axis, tau_axis, window_len, window_shape)
    return SemblanceGrid(
        values=semblance_ratio(coherent, total, energy_floor),
        d_tau=d_tau,
        tau_start=tau_start,
        p_start=p_start,
        dp=dp,
        window_shape=window_shape,
        window_len=window_len,
    )


def slowness_profile(grid: SemblanceGrid) -> SlownessProfile:
    """Semblance summed over tau and normalised so its maximum is 1."""
    summed = grid.values.sum(axis=0)
    peak = float(summed.max()) if summed.size else 0.0
    values = summed / peak if peak > 0.0 else np.zeros_like(summed)
    return SlownessProfile(values=values, p_start=grid.p_start, dp=grid.dp)


def detect_plane_waves(profile: SlownessProfile, epsilon: float) -> list[SlownessBand]:
    """Maximal runs of slowness cells with S(p) >= epsilon, as closed intervals."""
    if not 0.0 < epsilon < 1.0:
        msg = f"threshold must lie in (0, 1), got {epsilon}"
        raise InvalidArgumentError(msg)

    above = np.concatenate(([False], profile.values >= epsilon, [False]))
    edges = np.flatnonzero(np.diff(above.astype(np.int8)))
    p_axis = profile.p_axis
    bands = [
        SlownessBand(p_low=float(p_axis[start]), p_high=float(p_axis[stop - 1]))
        for start, stop in zip(edges[::2], edges[1::2])
    ]
    logger.info(f"Detected {len(bands)} plane-wave slowness bands at epsilon={epsilon}")
    return bands
