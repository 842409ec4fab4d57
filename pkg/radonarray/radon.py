from logging import getLogger

import numpy as np
from scipy import fft, signal

from .errors import InvalidArgumentError
from .models import SPEED_OF_LIGHT, ArrayGeometry, EllipseLocus, RadonGrid, SpaceTimeGrid
from .models.grids import axis_params, uniform_axis
from .sampling import sample_traces

logger = getLogger(__name__)

DEFAULT_SLOWNESS_COUNT = 501

# Global gain of the ramp-filtered backprojection. The continuous inversion
# formula with the |w|/(2 pi) filter and dp weighting has unit gain; finite
# aperture and interpolation losses are left to a scalar fit by the caller.
RECONSTRUCTION_SCALE = 1.0


def default_p_axis(n_p: int = DEFAULT_SLOWNESS_COUNT) -> np.ndarray:
    """n_p uniformly spaced slownesses covering [-1/c, +1/c]."""
    if n_p < 2:
        msg = f"a slowness axis needs at least 2 points, got {n_p}"
        raise InvalidArgumentError(msg)
    return uniform_axis(-1.0 / SPEED_OF_LIGHT, 2.0 / (SPEED_OF_LIGHT * (n_p - 1)), n_p)


def default_tau_axis(data: SpaceTimeGrid, padding: float | None = None) -> np.ndarray:
    """The record's time axis extended by `padding` on both sides.

    The default padding L / (2c) keeps every line t = tau + p x with |p| <= 1/c
    that crosses the record inside the tau axis, which backprojection relies on.
    """
    if padding is None:
        padding = data.geometry.length / (2.0 * SPEED_OF_LIGHT)
    pad = int(np.ceil(padding / data.dt))
    return uniform_axis(data.t_start - pad * data.dt, data.dt, data.n_t + 2 * pad)


def forward_radon(data: SpaceTimeGrid, p_axis, tau_axis) -> RadonGrid:
    """Slant stack f_r(tau, p) = dx * sum_n f(tau + p x_n, x_n).

    Parameters
    ----------
    data (SpaceTimeGrid): Space/time record.
    p_axis (array-like): Uniform slowness grid (s/m).
    tau_axis (array-like): Uniform delay grid (s).
    """
    p_start, dp = axis_params(p_axis, "p_axis")
    tau_start, d_tau = axis_params(tau_axis, "tau_axis")
    p_axis = uniform_axis(p_start, dp, np.size(p_axis))
    tau_axis = uniform_axis(tau_start, d_tau, np.size(tau_axis))

    x = data.geometry.element_x
    dx = data.geometry.spacing
    stack = np.empty((tau_axis.size, p_axis.size))
    for k, p in enumerate(p_axis):
        values, _ = sample_traces(
            data.samples, data.t_start, data.dt, tau_axis[:, None] + p * x[None, :]
        )
        stack[:, k] = dx * values.sum(axis=1)

    logger.debug(f"Forward Radon transform: {tau_axis.size} delays x {p_axis.size} slownesses")
    return RadonGrid(samples=stack, d_tau=d_tau, tau_start=tau_start, p_start=p_start, dp=dp)


def ttd_equivalence_check(data: SpaceTimeGrid, tau: float, p: float) -> float:
    """TTD sum sum_n f(tau + p x_n, x_n) through the interpolant used by forward_radon.

    forward_radon at (tau, p) equals data.geometry.spacing times this value.
    """
    x = data.geometry.element_x
    values, _ = sample_traces(data.samples, data.t_start, data.dt, (tau + p * x)[None, :])
    return float(values.sum(axis=1)[0])


def ramp_response(n_fft: int, d_tau: float) -> np.ndarray:
    """|w| / (2 pi) on the rfft bins of an n_fft-point column, in Hz; zero at DC."""
    return np.abs(fft.rfftfreq(n_fft, d=d_tau))


def ramp_filter(radon: RadonGrid) -> np.ndarray:
    """Filter every slowness column along tau with |w| / (2 pi), cut off at Nyquist.

    Columns are zero padded to the next power of two >= 2 n_tau so the
    frequency-domain product does not wrap around.
    """
    n_fft = 1 << int(np.ceil(np.log2(max(2 * radon.n_tau, 2))))
    spectrum = fft.rfft(radon.samples, n=n_fft, axis=0)
    response = ramp_response(n_fft, radon.d_tau)
    filtered = fft.irfft(spectrum * response[:, None], n=n_fft, axis=0)
    return filtered[: radon.n_tau]


def inverse_radon(radon: RadonGrid, geometry: ArrayGeometry, t_axis) -> SpaceTimeGrid:
    """Filtered backprojection f(t, x_n) = dp * sum_k g(t - p_k x_n, p_k).

    g is the ramp-filtered Radon column. The result carries RECONSTRUCTION_SCALE
    and is defined up to a global positive factor.
    """
    t_start, dt = axis_params(t_axis, "t_axis")
    t_axis = uniform_axis(t_start, dt, np.size(t_axis))

    filtered = ramp_filter(radon)
    p_axis = radon.p_axis
    x = geometry.element_x

    samples = np.empty((t_axis.size, geometry.element_count))
    for n, x_n in enumerate(x):
        values, _ = sample_traces(
            filtered, radon.tau_start, radon.d_tau, t_axis[:, None] - p_axis[None, :] * x_n
        )
        samples[:, n] = values.sum(axis=1)
    samples *= radon.dp * RECONSTRUCTION_SCALE

    logger.debug(f"Inverse Radon transform onto {geometry.element_count} traces")
    return SpaceTimeGrid(samples=samples, dt=dt, t_start=t_start, geometry=geometry)


def radon_envelope(radon: RadonGrid) -> np.ndarray:
    """Analytic-signal magnitude of every slowness column along tau."""
    return np.abs(signal.hilbert(radon.samples, axis=0))


def ellipse_locus(
    x0: float,
    z0: float,
    t0: float,
    p_axis,
    aperture_length: float | None = None,
    pulse_duration: float = 0.0,
) -> EllipseLocus:
    """Peak locus of a near-field source in the Radon plane.

    For every |p| < 1/c the causal root of
    (tau - t0 + p x0)^2 = (z0^2 / c^2)(1 - c^2 p^2) is returned. A slowness is
    supported by the aperture when its stationary point x* = x0 + c p R* lies
    within [-L/2, L/2]; without an aperture every point counts as supported.

    With a pulse_duration T the stationary point must also sit far enough
    inside the aperture that the arrival from the nearer aperture edge trails
    the ridge by at least T / 2, i.e. |x*| + sqrt(T R*^3 c) / z0 <= L/2.
    """
    if z0 <= 0:
        msg = f"z0 must be positive, got {z0}"
        raise InvalidArgumentError(msg)

    p = np.asarray(p_axis, dtype=np.float64)
    p = p[np.abs(SPEED_OF_LIGHT * p) < 1.0]
    cosine = np.sqrt(1.0 - (SPEED_OF_LIGHT * p) ** 2)
    tau = t0 - p * x0 + (z0 / SPEED_OF_LIGHT) * cosine
    stationary_range = z0 / cosine
    stationary_x = x0 + SPEED_OF_LIGHT * p * stationary_range

    if aperture_length is None:
        supported = np.ones(p.size, dtype=bool)
    else:
        margin = np.sqrt(pulse_duration * stationary_range**3 * SPEED_OF_LIGHT) / z0
        supported = np.abs(stationary_x) + margin <= aperture_length / 2.0

    return EllipseLocus(
        x0=x0, z0=z0, t0=t0, p=p, tau=tau, stationary_x=stationary_x, supported=supported
    )


def hyperbolic_stack(data: SpaceTimeGrid, x0: float, z0: float, t_axis) -> np.ndarray:
    """Spreading-compensated stack (1/M) sum_n R_n f(t + R_n / c, x_n).

    A source at (x0, z0) emitting a(t - t0) yields a(t - t0) on t_axis.
    """
    if z0 <= 0:
        msg = f"z0 must be positive, got {z0}"
        raise InvalidArgumentError(msg)

    t_axis = np.asarray(t_axis, dtype=np.float64)
    distance = np.hypot(data.geometry.element_x - x0, z0)
    values, _ = sample_traces(
        data.samples,
        data.t_start,
        data.dt,
        t_axis[:, None] + distance[None, :] / SPEED_OF_LIGHT,
    )
    return (values * distance[None, :]).mean(axis=1)
