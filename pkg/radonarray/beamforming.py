from typing import NamedTuple

import numpy as np
from scipy import signal

from .errors import InvalidArgumentError
from .models import SPEED_OF_LIGHT, ArrayGeometry, PulseSpec, SpaceTimeGrid, SquintReport
from .sampling import sample_traces

SQUINT_THRESHOLD = 0.5


class PhaseShiftOutput(NamedTuple):
    magnitude: np.ndarray
    real: np.ndarray


def ttd_beamform(data: SpaceTimeGrid, tau: float, p: float, t_axis) -> np.ndarray:
    """True-time-delay sum a(t) = sum_n f(t + tau + p x_n, x_n)."""
    t_axis = np.asarray(t_axis, dtype=np.float64)
    x = data.geometry.element_x
    values, _ = sample_traces(
        data.samples, data.t_start, data.dt, t_axis[:, None] + tau + p * x[None, :]
    )
    return values.sum(axis=1)


def analytic_traces(samples: np.ndarray) -> np.ndarray:
    """Analytic signal of every column, zero padded against wrap-around."""
    n_t = samples.shape[0]
    n_fft = 1 << int(np.ceil(np.log2(max(2 * n_t, 2))))
    return signal.hilbert(samples, N=n_fft, axis=0)[:n_t]


def phase_shift_beamform(data: SpaceTimeGrid, p: float, carrier_freq: float) -> PhaseShiftOutput:
    """Narrowband steering: rotate each analytic trace by exp(+i w_c p x_n) and sum.

    Only the carrier phase of the TTD delay p x_n is applied, so envelopes stay
    misaligned across the aperture (beam squint).
    """
    if carrier_freq <= 0:
        msg = f"carrier frequency must be positive, got {carrier_freq}"
        raise InvalidArgumentError(msg)

    steering = np.exp(1j * 2.0 * np.pi * carrier_freq * p * data.geometry.element_x)
    beam = (analytic_traces(data.samples) * steering[None, :]).sum(axis=1)
    return PhaseShiftOutput(magnitude=np.abs(beam), real=beam.real)


def coherence_loss(data: SpaceTimeGrid, p: float, carrier_freq: float) -> float:
    """Ratio of the TTD envelope peak to the phase-shift peak when steering at p."""
    ttd = ttd_beamform(data, 0.0, p, data.t_axis)
    ttd_peak = float(np.max(np.abs(analytic_traces(ttd[:, None]))))
    phase_peak = float(np.max(phase_shift_beamform(data, p, carrier_freq).magnitude))
    if phase_peak == 0.0:
        return 1.0 if ttd_peak == 0.0 else float("inf")
    return ttd_peak / phase_peak


def squint_report(geometry: ArrayGeometry, pulse: PulseSpec, p: float) -> SquintReport:
    """Beam-squint criterion (B / f_c)(L / lambda_c) > 1/2 for the pulse's band."""
    bandwidth = pulse.two_sided_bandwidth
    carrier_wavelength = SPEED_OF_LIGHT / pulse.center_freq
    bandwidth_ratio = bandwidth / pulse.center_freq
    aperture_ratio = geometry.length / carrier_wavelength
    product = bandwidth_ratio * aperture_ratio
    return SquintReport(
        bandwidth_ratio=bandwidth_ratio,
        aperture_ratio=aperture_ratio,
        product=product,
        ttd_required=product > SQUINT_THRESHOLD,
        worst_phase_error=np.pi * bandwidth * abs(p) * geometry.length / 2.0,
    )
