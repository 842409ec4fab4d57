import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radonarray.errors import (
    BehindArrayError,
    IllConditionedTriangulationError,
    InvalidArgumentError,
    NoArrivalError,
    StageError,
    SubArraySizingError,
)
from radonarray.localization import (
    adaptive_partition,
    estimate_aoa,
    localize_and_extract,
    partition,
    triangulate,
)
from radonarray.models import (
    SPEED_OF_LIGHT,
    AoAEstimate,
    FarFieldSource,
    LocalizationSettings,
    NearFieldSource,
    PulseSpec,
    SpaceTimeGrid,
)
from radonarray.radon import default_p_axis, default_tau_axis
from radonarray.semblance import default_window_len
from radonarray.wavefield import default_sampling, make_array, synthesize

PULSE = PulseSpec(center_freq=16e9, single_side_bandwidth=8e9)
OVERSAMPLE = 8


def record(element_count: int, sources) -> SpaceTimeGrid:
    geometry = make_array(element_count, 24e9)
    t_start, dt, n_t = default_sampling(geometry, sources)
    return synthesize(geometry, sources, t_start, dt / OVERSAMPLE, n_t * OVERSAMPLE)


def localization_settings(data: SpaceTimeGrid, **overrides) -> LocalizationSettings:
    return LocalizationSettings(window_len=default_window_len(PULSE, data.dt), **overrides)


def bearing_towards(center_x: float, x0: float, z0: float) -> AoAEstimate:
    distance = np.hypot(center_x - x0, z0)
    return AoAEstimate(
        center_x=center_x,
        slowness=(center_x - x0) / (SPEED_OF_LIGHT * distance),
        delay=0.0,
        peak_semblance=1.0,
    )


@pytest.mark.parametrize(
    "element_count, k, sizes",
    [
        (251, 5, [51, 50, 50, 50, 50]),
        (251, 2, [126, 125]),
        (16, 4, [4, 4, 4, 4]),
        (10, 3, [4, 3, 3]),
    ],
)
def test_partition_sizes(element_count, k, sizes):
    subarrays = partition(make_array(element_count, 24e9), k)

    assert [sub.element_count for sub in subarrays] == sizes


def test_partition_centres_are_element_means():
    geometry = make_array(16, 24e9)

    subarrays = partition(geometry, 4)

    for sub in subarrays:
        assert sub.center_x == pytest.approx(geometry.element_x[sub.start : sub.stop].mean())
        assert sub.length == pytest.approx(3 * geometry.spacing)


@pytest.mark.parametrize("k", [0, 1, 17])
def test_partition_rejects_bad_k(k):
    with pytest.raises(InvalidArgumentError):
        partition(make_array(16, 24e9), k)


@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_partition_covers_array_once(data):
    element_count = data.draw(st.integers(2, 300))
    k = data.draw(st.integers(2, element_count))

    subarrays = partition(make_array(element_count, 24e9), k)
    sizes = [sub.element_count for sub in subarrays]

    assert subarrays[0].start == 0
    assert subarrays[-1].stop == element_count
    assert all(a.stop == b.start for a, b in zip(subarrays, subarrays[1:]))
    assert max(sizes) - min(sizes) <= 1
    assert sizes == sorted(sizes, reverse=True)


def test_triangulate_exact_bearings():
    x0, z0 = 0.03, 0.4
    estimates = [bearing_towards(center, x0, z0) for center in (-0.3, -0.1, 0.1, 0.3)]

    position = triangulate(estimates)

    assert position.x0 == pytest.approx(x0, rel=1e-6)
    assert position.z0 == pytest.approx(z0, rel=1e-6)
    assert position.residual == pytest.approx(0.0, abs=1e-9)
    assert position.range == pytest.approx(np.hypot(x0, z0))


def test_triangulate_parallel_bearings_is_ill_conditioned():
    estimates = [
        AoAEstimate(center_x=center, slowness=0.2 / SPEED_OF_LIGHT, delay=0.0, peak_semblance=1.0)
        for center in (-0.1, 0.1)
    ]

    with pytest.raises(IllConditionedTriangulationError):
        triangulate(estimates)


def test_triangulate_diverging_bearings_is_behind_array():
    estimates = [
        AoAEstimate(center_x=-0.1, slowness=0.5 / SPEED_OF_LIGHT, delay=0.0, peak_semblance=1.0),
        AoAEstimate(center_x=0.1, slowness=-0.5 / SPEED_OF_LIGHT, delay=0.0, peak_semblance=1.0),
    ]

    with pytest.raises(BehindArrayError):
        triangulate(estimates)


def test_triangulate_needs_two_bearings():
    with pytest.raises(InvalidArgumentError):
        triangulate([bearing_towards(0.0, 0.0, 1.0)])


def test_estimate_aoa_on_plane_wave():
    source = FarFieldSource(slowness=0.4 / SPEED_OF_LIGHT, delay=0.1e-9, pulse=PULSE)
    data = record(16, [source])
    p_axis = default_p_axis()

    estimate = estimate_aoa(
        data, p_axis, default_tau_axis(data), default_window_len(PULSE, data.dt), center_x=0.25
    )

    assert estimate.slowness == pytest.approx(source.slowness, abs=float(p_axis[1] - p_axis[0]))
    assert estimate.delay == pytest.approx(source.delay, abs=2 * data.dt)
    assert estimate.peak_semblance >= 0.95
    assert estimate.center_x == 0.25


def test_estimate_aoa_on_silence():
    data = record(8, [FarFieldSource(slowness=0.0, delay=0.0, pulse=PULSE)])
    silent = data.with_samples(np.zeros_like(data.samples))

    with pytest.raises(NoArrivalError):
        estimate_aoa(silent, default_p_axis(11), default_tau_axis(silent), 5)


def test_distant_source_accepts_two_subarrays():
    data = record(16, [NearFieldSource(x0=0.0, z0=3.0, delay=0.0, pulse=PULSE)])

    k, subarrays, estimates = adaptive_partition(data, localization_settings(data))

    assert k == 2
    assert len(subarrays) == len(estimates) == 2
    assert all(estimate.peak_semblance >= 0.95 for estimate in estimates)


def test_close_source_needs_smaller_subarrays():
    data = record(32, [NearFieldSource(x0=0.0, z0=0.3, delay=0.0, pulse=PULSE)])

    k, subarrays, _ = adaptive_partition(data, localization_settings(data, theta_ff=0.98, k_max=8))

    assert k > 2
    assert len(subarrays) == k


def test_noise_never_reaches_threshold():
    geometry = make_array(32, 24e9)
    rng = np.random.default_rng(5)
    data = SpaceTimeGrid(samples=rng.normal(size=(400, 32)), dt=1e-11, t_start=0.0, geometry=geometry)
    options = LocalizationSettings(window_len=32, min_subarray_elements=8, n_p=101)

    with pytest.raises(SubArraySizingError) as raised:
        adaptive_partition(data, options)

    assert raised.value.best_k in (2, 4)
    assert raised.value.best_peak < options.theta_ff


def test_silent_record_has_no_arrival():
    geometry = make_array(16, 24e9)
    data = SpaceTimeGrid(samples=np.zeros((64, 16)), dt=1e-11, t_start=0.0, geometry=geometry)

    with pytest.raises(NoArrivalError):
        adaptive_partition(data, LocalizationSettings())


def test_localize_and_extract_close_source():
    source = NearFieldSource(x0=0.02, z0=0.3, delay=0.0, pulse=PULSE)
    data = record(32, [source])

    result = localize_and_extract(data, localization_settings(data, theta_ff=0.98, k_max=8))

    assert result.position.range == pytest.approx(source.distance(0.0), rel=0.05)
    cross_range = abs(result.position.x0 - source.x0)
    assert cross_range <= 0.02 * source.distance(0.0)
    assert result.subarray_count > 2
    assert result.peak_time == pytest.approx(source.delay, abs=2 * data.dt)
    assert result.coherent_gain >= 16


def test_localize_and_extract_reports_partition_stage():
    geometry = make_array(16, 24e9)
    data = SpaceTimeGrid(samples=np.zeros((64, 16)), dt=1e-11, t_start=0.0, geometry=geometry)

    with pytest.raises(StageError) as raised:
        localize_and_extract(data, LocalizationSettings())

    assert raised.value.stage == "localize/partition"
    assert isinstance(raised.value.cause, NoArrivalError)


def subarray_estimates(data: SpaceTimeGrid, k: int) -> list[AoAEstimate]:
    subarrays = partition(data.geometry, k)
    estimates = []
    for sub in subarrays:
        sub_data = data.subarray(sub.start, sub.stop)
        estimates.append(
            estimate_aoa(
                sub_data,
                default_p_axis(),
                default_tau_axis(sub_data),
                default_window_len(PULSE, data.dt),
                center_x=sub.center_x,
            )
        )
    return estimates


def test_broadside_source_tilts_edge_subarrays_apart():
    data = record(32, [NearFieldSource(x0=0.0, z0=0.3, delay=0.0, pulse=PULSE)])
    dp = float(np.diff(default_p_axis()[:2])[0])

    estimates = subarray_estimates(data, 4)
    left, right = estimates[0], estimates[-1]

    assert left.slowness < 0.0 < right.slowness
    assert abs(left.slowness + right.slowness) <= dp


def test_mirrored_source_gives_mirrored_bearings():
    near = record(32, [NearFieldSource(x0=0.04, z0=0.3, delay=0.0, pulse=PULSE)])
    mirrored = record(32, [NearFieldSource(x0=-0.04, z0=0.3, delay=0.0, pulse=PULSE)])
    dp = float(np.diff(default_p_axis()[:2])[0])

    estimates = subarray_estimates(near, 4)
    reflected = subarray_estimates(mirrored, 4)[::-1]

    for estimate, mirror in zip(estimates, reflected):
        assert estimate.slowness == pytest.approx(-mirror.slowness, abs=dp)
        assert estimate.center_x == pytest.approx(-mirror.center_x)


def test_peak_semblance_rises_as_subarrays_shrink():
    data = record(32, [NearFieldSource(x0=0.02, z0=0.3, delay=0.0, pulse=PULSE)])

    worst = [min(e.peak_semblance for e in subarray_estimates(data, k)) for k in (2, 4, 8)]

    assert worst == sorted(worst)
    assert worst[0] < worst[-1]


def test_triangulate_perturbed_bearings_has_residual():
    x0, z0 = 0.03, 0.4
    nudge = 0.002 / SPEED_OF_LIGHT
    estimates = [
        bearing_towards(center, x0, z0).model_copy(
            update={"slowness": bearing_towards(center, x0, z0).slowness + sign * nudge}
        )
        for center, sign in ((-0.2, 1.0), (0.0, -1.0), (0.2, 1.0))
    ]

    position = triangulate(estimates)

    assert position.residual > 0.0
    assert position.x0 == pytest.approx(x0, abs=0.02)
    assert position.z0 == pytest.approx(z0, abs=0.02)
