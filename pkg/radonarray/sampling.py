"""Linear interpolation of array traces at arbitrary times.

Every delay-and-sum in the package (slant stack, TTD sum, semblance,
backprojection, hyperbolic stack) samples traces through `sample_traces`, so
the forward Radon transform and the TTD sum share one interpolant exactly.
"""
import numpy as np


def sample_traces(
    samples: np.ndarray,
    t_start: float,
    dt: float,
    times: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate each trace at the requested times.

    Parameters
    ----------
    samples (np.ndarray): Trace matrix [n_t x M], one column per trace.
    t_start (float): Time of the first row.
    dt (float): Row spacing.
    times (np.ndarray): Query times broadcastable to [K x M]; column n is read from trace n.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]: Interpolated values [K x M] (zero outside the
    record) and the boolean mask of queries that fell inside the record.
    """
    n_t, n_traces = samples.shape
    times = np.broadcast_to(times, np.broadcast_shapes(np.shape(times), (1, n_traces)))
    position = (times - t_start) / dt
    inside = (position >= 0.0) & (position <= n_t - 1)
    columns = np.arange(n_traces)

    if n_t == 1:
        values = np.where(position == 0.0, samples[0, columns], 0.0)
        return values, position == 0.0

    lower = np.clip(np.floor(position), 0, n_t - 2).astype(np.intp)
    weight = position - lower
    values = (1.0 - weight) * samples[lower, columns] + weight * samples[lower + 1, columns]
    values[~inside] = 0.0
    return values, inside
