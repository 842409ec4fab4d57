from concurrent.futures import ThreadPoolExecutor
from logging import getLogger

import numpy as np

from .errors import (
    BehindArrayError,
    IllConditionedTriangulationError,
    InvalidArgumentError,
    NoArrivalError,
    RadonArrayError,
    StageError,
    SubArraySizingError,
)
from .models import (
    SPEED_OF_LIGHT,
    AoAEstimate,
    ArrayGeometry,
    LocalizationResult,
    LocalizationSettings,
    PositionEstimate,
    SpaceTimeGrid,
    SubArray,
    WindowShape,
)
from .radon import default_p_axis, default_tau_axis, hyperbolic_stack
from .sampling import sample_traces
from .semblance import DEFAULT_ENERGY_FLOOR, semblance_ratio, semblance_terms

logger = getLogger(__name__)

DEFAULT_ENERGY_GATE = 0.25
DEFAULT_CONDITION_BOUND = 1e6


def partition(geometry: ArrayGeometry, k: int) -> list[SubArray]:
    """Split the array into k contiguous sub-arrays whose sizes differ by at most one.

    The larger sub-arrays come first.
    """
    m = geometry.element_count
    if k < 2 or k > m:
        msg = f"cannot split {m} elements into {k} sub-arrays"
        raise InvalidArgumentError(msg)

    base, extra = divmod(m, k)
    x = geometry.element_x
    subarrays = []
    start = 0
    for i in range(k):
        stop = start + base + (1 if i < extra else 0)
        subarrays.append(
            SubArray(
                start=start,
                stop=stop,
                center_x=float(x[start:stop].mean()),
                length=(stop - start - 1) * geometry.spacing,
            )
        )
        start = stop
    return subarrays


def _full_coverage(
    data: SpaceTimeGrid, p_axis: np.ndarray, tau_axis: np.ndarray, window_len: int
) -> np.ndarray:
    """Cells whose window reads every trace inside the record."""
    x = data.geometry.element_x
    half_window = (window_len // 2) * data.dt
    t_end = data.t_start + (data.samples.shape[0] - 1) * data.dt
    earliest = tau_axis[:, None] + np.minimum(p_axis * x[0], p_axis * x[-1])[None, :] - half_window
    latest = tau_axis[:, None] + np.maximum(p_axis * x[0], p_axis * x[-1])[None, :] + half_window
    return (earliest >= data.t_start) & (latest <= t_end)


def estimate_aoa(
    sub_data: SpaceTimeGrid,
    p_axis,
    tau_axis,
    window_len: int,
    window_shape: WindowShape = "rectangular",
    energy_gate: float = DEFAULT_ENERGY_GATE,
    energy_floor: float = DEFAULT_ENERGY_FLOOR,
    center_x: float = 0.0,
) -> AoAEstimate:
    """Plane-wave slowness and delay of the strongest coherent arrival on a sub-array.

    Only cells whose window reads every trace inside the record, and whose
    windowed coherent energy reaches `energy_gate` times the largest such
    energy, compete for the semblance peak. The slowness is refined with a
    three-point parabola through the semblance at the peak delay.

    Parameters
    ----------
    sub_data (SpaceTimeGrid): Record of one sub-array, on coordinates centred on it.
    p_axis (array-like): Uniform slowness grid (s/m).
    tau_axis (array-like): Uniform delay grid (s).
    window_len (int): Semblance window length in samples.
    window_shape (WindowShape, optional): Window taper. Defaults to "rectangular".
    energy_gate (float, optional): Fraction of the peak coherent energy a cell
        needs to be considered. Defaults to 0.25.
    energy_floor (float, optional): See semblance. Defaults to 1e-6.
    center_x (float, optional): Sub-array centre in parent coordinates, copied
        to the estimate. Defaults to 0.0.
    """
    p_axis = np.asarray(p_axis, dtype=np.float64)
    tau_axis = np.asarray(tau_axis, dtype=np.float64)
    coherent, total = semblance_terms(sub_data, p_axis, tau_axis, window_len, window_shape)
    covered = _full_coverage(sub_data, p_axis, tau_axis, window_len)
    peak_coherent = float(coherent[covered].max()) if covered.any() else 0.0
    if peak_coherent <= 0.0:
        msg = "no coherent energy on the sub-array"
        raise NoArrivalError(msg)

    ratio = semblance_ratio(coherent, total, energy_floor)
    candidates = np.where(covered & (coherent >= energy_gate * peak_coherent), ratio, -1.0)
    j, k = np.unravel_index(int(np.argmax(candidates)), candidates.shape)
    peak = float(candidates[j, k])
    if peak <= 0.0:
        msg = "no coherent arrival above the energy floor"
        raise NoArrivalError(msg)

    p_hat = float(p_axis[k])
    if 0 < k < p_axis.size - 1:
        left, centre, right = ratio[j, k - 1], ratio[j, k], ratio[j, k + 1]
        curvature = left - 2.0 * centre + right
        if curvature < 0.0:
            offset = float(np.clip(0.5 * (left - right) / curvature, -0.5, 0.5))
            p_hat += offset * float(p_axis[1] - p_axis[0])

    return AoAEstimate(
        center_x=center_x,
        slowness=p_hat,
        delay=float(tau_axis[j]),
        peak_semblance=min(peak, 1.0),
    )


def triangulate(
    estimates: list[AoAEstimate], condition_bound: float = DEFAULT_CONDITION_BOUND
) -> PositionEstimate:
    """Least-squares intersection of the bearing rays of two or more sub-arrays.

    The point q minimises sum_i |(I - d_i d_i^T)(q - a_i)|^2, where a_i is the
    sub-array centre on the array axis and d_i its unit bearing.
    """
    if len(estimates) < 2:
        msg = f"triangulation needs at least two bearings, got {len(estimates)}"
        raise InvalidArgumentError(msg)

    normal = np.zeros((2, 2))
    rhs = np.zeros(2)
    projectors = []
    for estimate in estimates:
        d = estimate.bearing
        projector = np.eye(2) - np.outer(d, d)
        anchor = np.array([estimate.center_x, 0.0])
        normal += projector
        rhs += projector @ anchor
        projectors.append((projector, anchor))

    condition = np.linalg.cond(normal)
    if not np.isfinite(condition) or condition > condition_bound:
        msg = f"bearing rays are nearly parallel (condition number {condition:.3g})"
        raise IllConditionedTriangulationError(msg)

    q = np.linalg.solve(normal, rhs)
    if q[1] <= 0.0:
        msg = f"rays intersect at z = {q[1]:.4g} m, behind the array"
        raise BehindArrayError(msg)

    residual = float(
        np.sqrt(np.mean([np.sum((projector @ (q - anchor)) ** 2) for projector, anchor in projectors]))
    )
    logger.debug(f"Triangulated ({q[0]:.4f}, {q[1]:.4f}) m with residual {residual:.3g} m")
    return PositionEstimate(
        x0=float(q[0]), z0=float(q[1]), residual=residual, estimates=list(estimates)
    )


def _subarray_estimate(
    data: SpaceTimeGrid, sub: SubArray, p_axis: np.ndarray, settings: LocalizationSettings
) -> AoAEstimate | None:
    sub_data = data.subarray(sub.start, sub.stop)
    try:
        return estimate_aoa(
            sub_data,
            p_axis,
            default_tau_axis(sub_data),
            settings.window_len,
            settings.window_shape,
            energy_gate=settings.energy_gate,
            center_x=sub.center_x,
        )
    except NoArrivalError:
        return None


def adaptive_partition(
    data: SpaceTimeGrid, settings: LocalizationSettings
) -> tuple[int, list[SubArray], list[AoAEstimate | None]]:
    """Halve sub-arrays (k = 2, 4, 8, ...) until every one sees a plane wave.

    A partition is accepted when the peak semblance of every sub-array reaches
    settings.theta_ff. Sub-arrays smaller than settings.min_subarray_elements
    are never formed.

    Returns
    -------
    tuple[int, list[SubArray], list[AoAEstimate | None]]: The accepted k, its sub-arrays
    and their estimates (None where a sub-array saw no arrival).

    Raises
    ------
    NoArrivalError: The record is identically zero.
    SubArraySizingError: No admissible k reached the threshold.
    """
    if not np.any(data.samples):
        msg = "no arrival: the record holds no signal"
        raise NoArrivalError(msg)

    m = data.geometry.element_count
    p_axis = default_p_axis(settings.n_p)
    best_k, best_peak = 0, 0.0

    k = 2
    while k <= settings.k_max and m // k >= settings.min_subarray_elements:
        subarrays = partition(data.geometry, k)
        with ThreadPoolExecutor() as pool:
            estimates = list(
                pool.map(lambda sub: _subarray_estimate(data, sub, p_axis, settings), subarrays)
            )

        peaks = [0.0 if estimate is None else estimate.peak_semblance for estimate in estimates]
        worst = min(peaks)
        wavelength = data.geometry.carrier_wavelength
        logger.debug(
            f"k={k}: min peak semblance {worst:.3f}, sub-array Fraunhofer distance "
            f"{subarrays[0].fraunhofer_distance(wavelength):.3f} m"
        )
        if worst > best_peak or best_k == 0:
            best_k, best_peak = k, worst
        if worst >= settings.theta_ff:
            logger.info(f"Accepted {k} sub-arrays (min peak semblance {worst:.3f})")
            return k, subarrays, estimates
        k *= 2

    msg = f"no partition up to k={settings.k_max} reached theta_ff={settings.theta_ff}"
    raise SubArraySizingError(msg, best_k, best_peak)


def _coherent_gain(data: SpaceTimeGrid, distance: np.ndarray, peak_time: float) -> float:
    values, _ = sample_traces(
        data.samples, data.t_start, data.dt, (peak_time + distance / SPEED_OF_LIGHT)[None, :]
    )
    aligned = values[0] * distance
    strongest = float(np.max(np.abs(aligned)))
    if strongest == 0.0:
        return 0.0
    return float(abs(aligned.sum()) / strongest)


def localize_and_extract(
    data: SpaceTimeGrid,
    settings: LocalizationSettings,
    original: SpaceTimeGrid | None = None,
) -> LocalizationResult:
    """Locate the near-field source on `data` and extract its envelope.

    `data` is normally the slowness-filtered record. The envelope is stacked
    along the hyperbola of the fused position on `original` (defaults to
    `data`), on a time axis shifted back by the shortest propagation time.

    Raises
    ------
    StageError: Wraps the failing sub-operation; stage is one of
        'localize/partition', 'localize/triangulate' or 'localize/extract'.
    """
    original = data if original is None else original

    try:
        k, _, estimates = adaptive_partition(data, settings)
    except RadonArrayError as e:
        raise StageError("localize/partition", e) from e

    try:
        position = triangulate([e for e in estimates if e is not None], settings.condition_bound)
    except RadonArrayError as e:
        raise StageError("localize/triangulate", e) from e

    try:
        distance = np.hypot(original.geometry.element_x - position.x0, position.z0)
        t_axis = original.t_axis - distance.min() / SPEED_OF_LIGHT
        envelope = hyperbolic_stack(original, position.x0, position.z0, t_axis)
        peak_time = float(t_axis[int(np.argmax(np.abs(envelope)))])
        gain = _coherent_gain(original, distance, peak_time)
    except RadonArrayError as e:
        raise StageError("localize/extract", e) from e

    logger.info(
        f"Source at x0={position.x0:.4f} m, z0={position.z0:.4f} m "
        f"from {k} sub-arrays, coherent gain {gain:.1f}"
    )
    return LocalizationResult(
        position=position,
        subarray_count=k,
        envelope=envelope,
        t_start=float(t_axis[0]),
        dt=original.dt,
        peak_time=peak_time,
        coherent_gain=gain,
    )
