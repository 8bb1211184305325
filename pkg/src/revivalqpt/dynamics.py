"""Gaussian packets over energy eigenstates and autocorrelation traces.

A packet c_k ~ exp[-(k - k0)^2 / sigma] populates eigenlevels directly
(the sigma convention divides by sigma, not 2*sigma^2), so the survival
amplitude A(t) = sum_k c_k^2 exp(-i E_k t) needs eigenvalues only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .spectral import EnergySpectrum, ValidationError

__all__ = [
    "WavePacket",
    "TimeGrid",
    "AutocorrelationTrace",
    "gaussian_packet",
    "default_time_grid",
    "autocorrelation",
    "detect_recurrences",
]

DEFAULT_CUTOFF = 1e-8
DEFAULT_THRESHOLD = 0.9
# Samples closer than this are one plateau; plateaus produce no maximum.
PLATEAU_TOL = 1e-12


@dataclass(frozen=True)
class WavePacket:
    """Normalized positive coefficients c_k on level indices k."""

    indices: np.ndarray
    coefficients: np.ndarray
    k0: int
    sigma: float

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=int)
        c = np.asarray(self.coefficients, dtype=float)
        if idx.ndim != 1 or c.shape != idx.shape or idx.size == 0:
            raise ValidationError("indices and coefficients must be matching vectors")
        if np.any(c <= 0):
            raise ValidationError("coefficients must be positive")
        if abs(float(np.sum(c ** 2)) - 1.0) > 1e-12:
            raise ValidationError("coefficients must satisfy sum c_k^2 = 1")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coefficients", c)

    def __len__(self) -> int:
        return self.indices.size


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid t = 0, dt, ..., (count-1)*dt."""

    dt: float
    count: int

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValidationError(f"dt must be positive and finite, got {self.dt}")
        if self.count < 2:
            raise ValidationError(f"count must be >= 2, got {self.count}")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.count, dtype=float) * self.dt


@dataclass(frozen=True)
class AutocorrelationTrace:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if t.shape != v.shape or t.ndim != 1:
            raise ValidationError("times and values must be matching vectors")
        mod = np.abs(v)
        if t.size and t[0] == 0.0 and abs(mod[0] - 1.0) > 1e-12:
            raise ValidationError("|A(0)| must equal 1")
        if np.any(mod > 1.0 + 1e-12):
            raise ValidationError("|A(t)| exceeded 1")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @cached_property
    def modulus(self) -> np.ndarray:
        return np.abs(self.values)


def gaussian_packet(
    spectrum_size: int, k0: int, sigma: float, cutoff: float = DEFAULT_CUTOFF
) -> WavePacket:
    """Packet with weights exp[-(k - k0)^2 / sigma], keeping levels whose
    weight relative to the peak exceeds `cutoff`, then normalizing."""
    if not (0 <= k0 < spectrum_size):
        raise ValidationError(f"k0={k0} outside [0, {spectrum_size - 1}]")
    if not sigma > 0:
        raise ValidationError(f"sigma must be positive, got {sigma}")
    if not (0.0 <= cutoff < 1.0):
        raise ValidationError(f"cutoff must lie in [0, 1), got {cutoff}")
    k = np.arange(spectrum_size, dtype=float)
    with np.errstate(under="ignore"):
        weights = np.exp(-((k - k0) ** 2) / sigma)
    keep = weights / weights.max() > cutoff
    if not np.any(keep):
        raise ValidationError("all weights fell below the cutoff")
    kept = weights[keep]
    c = kept / math.sqrt(float(np.sum(kept ** 2)))
    return WavePacket(np.nonzero(keep)[0], c, int(k0), float(sigma))


def default_time_grid(t_cl_estimate: float, t_r_estimate: float) -> TimeGrid:
    """dt = T_Cl/50 and a horizon of 2.5*T_R, falling back to 25*T_Cl when
    the revival estimate is infinite."""
    if not (t_cl_estimate > 0 and math.isfinite(t_cl_estimate)):
        raise ValidationError("classical-period estimate must be finite and positive")
    dt = t_cl_estimate / 50.0
    if math.isfinite(t_r_estimate):
        horizon = 2.5 * t_r_estimate
    else:
        horizon = 25.0 * t_cl_estimate
    return TimeGrid(dt=dt, count=int(math.ceil(horizon / dt)) + 1)


def autocorrelation(
    spectrum: EnergySpectrum, packet: WavePacket, grid: TimeGrid
) -> AutocorrelationTrace:
    """A(t) = sum_k c_k^2 exp(-i E_k t) over the populated levels."""
    if packet.indices.max() >= len(spectrum) or packet.indices.min() < 0:
        raise ValidationError("packet populates levels outside the spectrum")
    energies = spectrum.levels[packet.indices]
    weights = packet.coefficients ** 2
    times = grid.times
    # chunked to keep the phase matrix small on long horizons
    values = np.empty(times.size, dtype=complex)
    step = max(1, 2_000_000 // max(energies.size, 1))
    for start in range(0, times.size, step):
        block = times[start : start + step]
        values[start : start + step] = np.exp(
            -1j * np.outer(block, energies)
        ) @ weights
    return AutocorrelationTrace(times, values)


def _refine_peak(times: np.ndarray, modulus: np.ndarray, i: int, dt: float) -> float:
    y0, y1, y2 = modulus[i - 1], modulus[i], modulus[i + 1]
    den = y0 - 2.0 * y1 + y2
    offset = 0.0 if den == 0.0 else 0.5 * (y0 - y2) / den
    return float(times[i] + offset * dt)


def detect_recurrences(
    trace: AutocorrelationTrace, threshold: float = DEFAULT_THRESHOLD
) -> list[tuple[float, float]]:
    """Recurrences of |A(t)|: strong peaks where the packet has re-formed.

    A sample is a peak when it strictly exceeds both neighbours by more
    than the plateau tolerance, so flat stretches and the t=0 start never
    qualify.  Among the peaks, a recurrence is one standing at a local
    maximum of the peak-height sequence (within the same tolerance):
    carrier oscillations climbing toward or decaying away from a revival
    are ignored, while trains of equal-height peaks keep every member.
    A first or last peak counts only when it matches its neighbour to the
    plateau tolerance.  Each time is refined by a quadratic through the
    three samples around the peak.  Returns (time, |A|) pairs, ascending,
    with |A| >= threshold.
    """
    if not (0.0 < threshold < 1.0):
        raise ValidationError(f"threshold must lie in (0, 1), got {threshold}")
    y = trace.modulus
    t = trace.times
    if y.size < 3:
        return []
    dt = float(t[1] - t[0])
    rising = y[1:-1] - y[:-2] > PLATEAU_TOL
    falling = y[1:-1] - y[2:] > PLATEAU_TOL
    peak_indices = np.nonzero(rising & falling)[0] + 1
    if peak_indices.size == 0:
        return []
    heights = y[peak_indices]
    events: list[tuple[float, float]] = []
    last = heights.size - 1
    for p in range(heights.size):
        if heights[p] < threshold:
            continue
        if p > 0:
            left_ok = heights[p] >= heights[p - 1] - PLATEAU_TOL
        else:
            left_ok = last > 0 and abs(heights[0] - heights[1]) <= PLATEAU_TOL
        if p < last:
            right_ok = heights[p] >= heights[p + 1] - PLATEAU_TOL
        else:
            right_ok = last > 0 and abs(heights[last] - heights[last - 1]) <= PLATEAU_TOL
        if left_ok and right_ok:
            events.append(
                (_refine_peak(t, y, int(peak_indices[p]), dt), float(heights[p]))
            )
    return events
