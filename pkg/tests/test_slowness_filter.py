import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from radonarray.errors import InvalidArgumentError
from radonarray.models import SPEED_OF_LIGHT, RadonGrid, SlownessBand
from radonarray.radon import default_p_axis
from radonarray.slowness_filter import apply_mask, build_mask

P_AXIS = default_p_axis()
DP = float(P_AXIS[1] - P_AXIS[0])

REFERENCE_BANDS = [
    SlownessBand(p_low=(s - 0.01) / SPEED_OF_LIGHT, p_high=(s + 0.01) / SPEED_OF_LIGHT)
    for s in (-0.8, -0.55, 0.45, 0.62, 0.85)
]


def radon_grid(samples) -> RadonGrid:
    samples = np.asarray(samples, dtype=float)
    return RadonGrid(samples=samples, d_tau=1e-11, tau_start=0.0, p_start=float(P_AXIS[0]), dp=DP)


def zero_runs(mask: np.ndarray) -> int:
    stopped = np.concatenate(([False], mask == 0.0, [False]))
    return int(np.count_nonzero(np.diff(stopped.astype(np.int8)) == 1))


def test_no_bands_gives_all_pass_mask():
    mask = build_mask([], P_AXIS)

    assert np.all(mask.mask == 1.0)
    assert mask.stopped_bands == []


def test_all_pass_mask_leaves_radon_bit_identical():
    rng = np.random.default_rng(0)
    radon = radon_grid(rng.normal(size=(32, P_AXIS.size)))

    filtered = apply_mask(radon, build_mask([], P_AXIS))

    np.testing.assert_array_equal(filtered.samples, radon.samples)


def test_reference_bands_give_five_zero_runs():
    mask = build_mask(REFERENCE_BANDS, P_AXIS, guard_cells=1, taper_cells=0)

    assert mask.is_hard
    assert zero_runs(mask.mask) == 5
    for band in REFERENCE_BANDS:
        inside = (P_AXIS >= band.p_low) & (P_AXIS <= band.p_high)
        assert np.all(mask.mask[inside] == 0.0)


def test_guard_cells_widen_stop_band():
    band = SlownessBand(p_low=float(P_AXIS[100]), p_high=float(P_AXIS[104]))

    mask = build_mask([band], P_AXIS, guard_cells=2, taper_cells=0)

    np.testing.assert_array_equal(np.flatnonzero(mask.mask == 0.0), np.arange(98, 107))


def test_taper_ramps_back_to_one():
    band = SlownessBand(p_low=float(P_AXIS[200]), p_high=float(P_AXIS[200]))

    mask = build_mask([band], P_AXIS, guard_cells=0, taper_cells=3).mask

    assert mask[200] == 0.0
    assert 0.0 < mask[199] < mask[198] < mask[197] < 1.0
    assert mask[196] == 1.0
    np.testing.assert_allclose(mask[201:204], mask[199:196:-1])


def test_band_between_grid_points_stops_nearest_cell():
    p = float(P_AXIS[300]) + 0.2 * DP
    band = SlownessBand(p_low=p, p_high=p + 0.1 * DP)

    mask = build_mask([band], P_AXIS, guard_cells=0, taper_cells=0)

    np.testing.assert_array_equal(np.flatnonzero(mask.mask == 0.0), [300])


def test_overlapping_bands_merge():
    bands = [
        SlownessBand(p_low=float(P_AXIS[10]), p_high=float(P_AXIS[20])),
        SlownessBand(p_low=float(P_AXIS[18]), p_high=float(P_AXIS[30])),
    ]

    mask = build_mask(bands, P_AXIS, guard_cells=0, taper_cells=0)

    assert len(mask.stopped_bands) == 1
    assert zero_runs(mask.mask) == 1


def test_negative_cells_are_rejected():
    with pytest.raises(InvalidArgumentError):
        build_mask([], P_AXIS, guard_cells=-1)


def test_mask_length_must_match_radon():
    radon = radon_grid(np.ones((4, P_AXIS.size)))
    mask = build_mask([], default_p_axis(11))

    with pytest.raises(InvalidArgumentError):
        apply_mask(radon, mask)


band_indices = st.lists(
    st.tuples(st.integers(0, P_AXIS.size - 1), st.integers(0, 20)), min_size=0, max_size=6
)


@settings(max_examples=30, deadline=None)
@given(
    indices=band_indices,
    guard=st.integers(0, 3),
    samples=arrays(np.float64, (6, P_AXIS.size), elements=st.floats(-1e3, 1e3)),
)
def test_hard_mask_is_idempotent_and_never_adds_energy(indices, guard, samples):
    bands = [
        SlownessBand(p_low=float(P_AXIS[i]), p_high=float(P_AXIS[min(i + w, P_AXIS.size - 1)]))
        for i, w in indices
    ]
    mask = build_mask(bands, P_AXIS, guard_cells=guard, taper_cells=0)
    radon = radon_grid(samples)

    once = apply_mask(radon, mask)
    twice = apply_mask(once, mask)

    np.testing.assert_array_equal(once.samples, twice.samples)
    assert np.sum(once.samples**2) <= np.sum(radon.samples**2)


@settings(max_examples=30, deadline=None)
@given(indices=band_indices, taper=st.integers(0, 5))
def test_mask_values_lie_in_unit_interval(indices, taper):
    bands = [
        SlownessBand(p_low=float(P_AXIS[i]), p_high=float(P_AXIS[min(i + w, P_AXIS.size - 1)]))
        for i, w in indices
    ]

    mask = build_mask(bands, P_AXIS, taper_cells=taper).mask

    assert np.all((mask >= 0.0) & (mask <= 1.0))
