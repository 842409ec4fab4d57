from collections.abc import Sequence
from logging import getLogger

import numpy as np

from .errors import InvalidArgumentError
from .models import RadonGrid, SlownessBand, SlownessMask
from .models.grids import axis_params

logger = getLogger(__name__)

DEFAULT_GUARD_CELLS = 1
DEFAULT_TAPER_CELLS = 2


def _band_cells(band: SlownessBand, p_start: float, dp: float, n_p: int) -> tuple[int, int]:
    """Inclusive index range of the grid cells a band covers.

    A band lying between two grid points maps to the nearest point.
    """
    low = int(np.ceil((band.p_low - p_start) / dp - 1e-9))
    high = int(np.floor((band.p_high - p_start) / dp + 1e-9))
    if high < low:
        nearest = int(round((0.5 * (band.p_low + band.p_high) - p_start) / dp))
        low = high = nearest
    return max(low, 0), min(high, n_p - 1)


def _merge(ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for low, high in sorted(ranges):
        if merged and low <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], high))
        else:
            merged.append((low, high))
    return merged


def build_mask(
    bands: Sequence[SlownessBand],
    p_axis,
    guard_cells: int = DEFAULT_GUARD_CELLS,
    taper_cells: int = DEFAULT_TAPER_CELLS,
) -> SlownessMask:
    """Zero/one slowness bandstop response with optional raised-cosine edges.

    Parameters
    ----------
    bands (Sequence[SlownessBand]): Slowness intervals to stop.
    p_axis (array-like): Uniform slowness grid the mask is defined on.
    guard_cells (int, optional): Cells added to each side of every band. Defaults to 1.
    taper_cells (int, optional): Length of the raised-cosine ramp from 0 back to 1;
        0 gives the hard mask. Defaults to 2.
    """
    if guard_cells < 0 or taper_cells < 0:
        msg = f"guard_cells and taper_cells must be non-negative, got {guard_cells}, {taper_cells}"
        raise InvalidArgumentError(msg)

    p_start, dp = axis_params(p_axis, "p_axis")
    n_p = int(np.size(p_axis))
    cells = [_band_cells(band, p_start, dp, n_p) for band in bands]
    cells = [(low, high) for low, high in cells if low <= high]
    stopped = _merge(
        [(max(low - guard_cells, 0), min(high + guard_cells, n_p - 1)) for low, high in cells]
    )

    mask = np.ones(n_p)
    ramp = 0.5 * (1.0 - np.cos(np.pi * np.arange(1, taper_cells + 1) / (taper_cells + 1)))
    for low, high in stopped:
        mask[low : high + 1] = 0.0
        for step, weight in enumerate(ramp, start=1):
            if low - step >= 0:
                mask[low - step] = min(mask[low - step], weight)
            if high + step < n_p:
                mask[high + step] = min(mask[high + step], weight)

    logger.debug(f"Slowness mask stops {len(stopped)} bands over {n_p} cells")
    return SlownessMask(
        mask=mask,
        stopped_bands=[
            SlownessBand(p_low=p_start + low * dp, p_high=p_start + high * dp)
            for low, high in stopped
        ],
        guard_cells=guard_cells,
        taper_cells=taper_cells,
    )


def apply_mask(radon: RadonGrid, mask: SlownessMask) -> RadonGrid:
    """Multiply every slowness column of the Radon grid by its mask value."""
    if mask.mask.size != radon.samples.shape[1]:
        msg = (
            f"mask has {mask.mask.size} entries but the Radon grid has "
            f"{radon.samples.shape[1]} slownesses"
        )
        raise InvalidArgumentError(msg)
    return radon.with_samples(radon.samples * mask.mask[None, :])
