import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import signal

from radonarray.errors import InvalidArgumentError
from radonarray.models import (
    SPEED_OF_LIGHT,
    FarFieldSource,
    NearFieldSource,
    PulseSpec,
    SubArray,
)
from radonarray.wavefield import (
    default_sampling,
    gaussian_pulse,
    make_array,
    synthesize,
    trajectory_rms,
)

PULSE = PulseSpec(center_freq=16e9, single_side_bandwidth=8e9)


def test_make_array_half_wavelength_spacing():
    geometry = make_array(251, 24e9)
    wavelength = SPEED_OF_LIGHT / 24e9

    assert geometry.spacing == pytest.approx(wavelength / 2)
    assert geometry.length == pytest.approx(250 * wavelength / 2)
    assert geometry.element_x.sum() == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("element_count, carrier_freq", [(1, 24e9), (0, 24e9), (8, 0.0), (8, -1.0)])
def test_make_array_rejects_bad_arguments(element_count, carrier_freq):
    with pytest.raises(InvalidArgumentError):
        make_array(element_count, carrier_freq)


def test_gaussian_pulse_peaks_at_zero():
    t = np.linspace(-5 * PULSE.sigma_t, 5 * PULSE.sigma_t, 1001)
    values = gaussian_pulse(t, PULSE)

    assert values[500] == pytest.approx(1.0)
    assert np.max(np.abs(values)) == pytest.approx(1.0)


def test_subarray_fraunhofer_distance():
    subarray = SubArray(start=0, stop=4, center_x=0.0, length=1.0)

    assert subarray.fraunhofer_distance(0.5) == pytest.approx(4.0)


def test_default_sampling_covers_every_arrival():
    geometry = make_array(32, 24e9)
    sources = [
        FarFieldSource(slowness=0.5 / SPEED_OF_LIGHT, delay=1e-9, pulse=PULSE),
        NearFieldSource(x0=0.0, z0=0.5, delay=0.0, pulse=PULSE),
    ]

    t_start, dt, n_t = default_sampling(geometry, sources)
    t_end = t_start + (n_t - 1) * dt

    assert dt == pytest.approx(1.0 / (4 * (16e9 + 8e9)))
    assert t_start / dt == pytest.approx(round(t_start / dt))
    for source in sources:
        arrivals = source.arrival_time(geometry.element_x)
        assert arrivals.min() - 3 * PULSE.sigma_t >= t_start
        assert arrivals.max() + 3 * PULSE.sigma_t <= t_end


@pytest.mark.parametrize("divisor", [4, 0.5])
def test_explicit_dt_still_covers_latest_arrival(divisor):
    geometry = make_array(32, 24e9)
    source = NearFieldSource(x0=0.0, z0=0.3, delay=0.0, pulse=PULSE)
    _, auto_dt, _ = default_sampling(geometry, [source])

    t_start, dt, n_t = default_sampling(geometry, [source], dt=auto_dt / divisor)
    arrivals = source.arrival_time(geometry.element_x)

    assert dt == auto_dt / divisor
    assert t_start <= arrivals.min() - 5 * PULSE.sigma_t
    assert t_start + (n_t - 1) * dt >= arrivals.max() + 5 * PULSE.sigma_t


def test_explicit_t_start_is_kept_and_window_reaches_arrivals():
    geometry = make_array(32, 24e9)
    source = NearFieldSource(x0=0.0, z0=0.3, delay=0.0, pulse=PULSE)
    t_first = -2.0e-9

    t_start, dt, n_t = default_sampling(geometry, [source], t_start=t_first)
    latest = source.arrival_time(geometry.element_x).max()

    assert t_start == t_first
    assert t_start + (n_t - 1) * dt >= latest + 5 * PULSE.sigma_t


def test_explicit_dt_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        default_sampling(make_array(8, 24e9), [], PULSE, dt=0.0)



def test_empty_source_list_gives_silent_record():
    geometry = make_array(16, 24e9)
    t_start, dt, n_t = default_sampling(geometry, [], PULSE)

    grid = synthesize(geometry, [], t_start, dt, n_t)

    assert grid.samples.shape == (n_t, 16)
    assert not np.any(grid.samples)


def test_far_field_source_lands_on_its_line():
    geometry = make_array(16, 24e9)
    source = FarFieldSource(slowness=0.3 / SPEED_OF_LIGHT, delay=0.0, pulse=PULSE)
    dt = 1.0 / (32 * (PULSE.center_freq + PULSE.single_side_bandwidth))
    t_start, _, n_t = default_sampling(geometry, [source], PULSE)
    grid = synthesize(geometry, [source], t_start, dt, int(n_t * 8))

    # Sampled at the exact arrival, every trace reads the pulse peak.
    arrivals = source.arrival_time(geometry.element_x)
    rows = np.rint((arrivals - t_start) / dt).astype(int)
    peaks = grid.samples[rows, np.arange(16)]
    np.testing.assert_allclose(peaks, 1.0, atol=0.02)


def test_near_field_amplitude_follows_spreading():
    geometry = make_array(16, 24e9)
    source = NearFieldSource(x0=0.0, z0=0.2, delay=0.0, pulse=PULSE)
    dt = 1.0 / (32 * (PULSE.center_freq + PULSE.single_side_bandwidth))
    t_start, _, n_t = default_sampling(geometry, [source], PULSE)
    grid = synthesize(geometry, [source], t_start, dt, int(n_t * 8))

    peaks = np.abs(grid.samples).max(axis=0)
    np.testing.assert_allclose(peaks, 1.0 / source.distance(geometry.element_x), rtol=0.02)


def test_noise_is_reproducible_with_seed():
    geometry = make_array(8, 24e9)
    first = synthesize(geometry, [], 0.0, 1e-11, 64, noise_std=0.1, seed=7)
    second = synthesize(geometry, [], 0.0, 1e-11, 64, noise_std=0.1, seed=7)
    other = synthesize(geometry, [], 0.0, 1e-11, 64, noise_std=0.1, seed=8)

    np.testing.assert_array_equal(first.samples, second.samples)
    assert not np.array_equal(first.samples, other.samples)


@settings(max_examples=20, deadline=None)
@given(
    a=st.floats(min_value=-3.0, max_value=3.0),
    b=st.floats(min_value=-3.0, max_value=3.0),
)
def test_synthesis_is_linear_in_amplitude(a, b):
    geometry = make_array(8, 24e9)
    first = FarFieldSource(slowness=0.2 / SPEED_OF_LIGHT, delay=0.1e-9, pulse=PULSE)
    second = NearFieldSource(x0=0.01, z0=0.3, delay=0.0, pulse=PULSE)
    t_start, dt, n_t = default_sampling(geometry, [first, second])

    combined = synthesize(
        geometry,
        [
            first.model_copy(update={"pulse": PULSE.scaled(a)}),
            second.model_copy(update={"pulse": PULSE.scaled(b)}),
        ],
        t_start,
        dt,
        n_t,
    )
    expected = (
        a * synthesize(geometry, [first], t_start, dt, n_t).samples
        + b * synthesize(geometry, [second], t_start, dt, n_t).samples
    )

    np.testing.assert_allclose(combined.samples, expected, atol=1e-9)


def test_trajectory_rms_sees_only_its_source():
    geometry = make_array(16, 24e9)
    source = FarFieldSource(slowness=0.0, delay=0.0, pulse=PULSE)
    elsewhere = FarFieldSource(slowness=0.0, delay=2e-9, pulse=PULSE)
    t_start, dt, n_t = default_sampling(geometry, [source, elsewhere])
    grid = synthesize(geometry, [source], t_start, dt, n_t)

    assert trajectory_rms(grid, source, PULSE.duration / 2) > 0.1
    assert trajectory_rms(grid, elsewhere, PULSE.duration / 2) < 1e-6


@pytest.mark.parametrize("fraction", [0.5, -0.3, 0.85])
def test_far_field_moveout_between_neighbours(fraction):
    geometry = make_array(16, 24e9)
    source = FarFieldSource(slowness=fraction / SPEED_OF_LIGHT, delay=0.0, pulse=PULSE)
    _, auto_dt, _ = default_sampling(geometry, [source])
    t_start, dt, n_t = default_sampling(geometry, [source], dt=auto_dt / 4)
    grid = synthesize(geometry, [source], t_start, dt, n_t)

    expected = round(source.slowness * geometry.spacing / dt)
    lags = signal.correlation_lags(n_t, n_t)
    for n in range(geometry.element_count - 1):
        correlation = signal.correlate(grid.samples[:, n + 1], grid.samples[:, n])
        assert lags[int(np.argmax(correlation))] == expected
