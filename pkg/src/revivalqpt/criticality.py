"""Scans across the transition, divergence location, and power-law fits.

The revival time diverges where the spectral anharmonicity E'' changes
sign, so divergences are located by bisection on the derivative rather
than by maximizing the timescale itself.  Exponents come from
least-squares lines in log-log space against a critical-point estimate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .spectral import EnergySpectrum, SolverError, ValidationError
from .timescales import TimescaleSet, timescales_at
from .vibron import VibronParams, vibron_spectrum

__all__ = [
    "ScanResult",
    "PowerLawFit",
    "scan",
    "locate_divergence",
    "locate_tcl_peak",
    "fit_powerlaw",
    "fit_powerlaw_free",
    "scaling_with_N",
    "semiclassical_check",
]

# Default fit window: drop this many points nearest xc, cap the distance.
WINDOW_DROP_NEAREST = 3
WINDOW_CAP = 0.1

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ScanResult:
    """Rows of (control value, timescales, gap) over a monotone grid."""

    model: str
    k0: int
    controls: np.ndarray
    rows: tuple[TimescaleSet, ...]
    gaps: np.ndarray
    metadata: dict

    def __post_init__(self):
        controls = np.asarray(self.controls, dtype=float)
        gaps = np.asarray(self.gaps, dtype=float)
        steps = np.diff(controls)
        if controls.size > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValidationError("control values must be strictly monotone")
        if len(self.rows) != controls.size or gaps.size != controls.size:
            raise ValidationError("rows, controls, and gaps must align")
        object.__setattr__(self, "controls", controls)
        object.__setattr__(self, "gaps", gaps)
        object.__setattr__(self, "rows", tuple(self.rows))

    def column(self, name: str) -> np.ndarray:
        if name == "gap":
            return self.gaps.copy()
        attr = {"T_cl": "t_cl", "T_r": "t_r", "T_sr": "t_sr"}.get(name)
        if attr is None:
            raise ValidationError(f"unknown column {name!r}")
        return np.array([getattr(r, attr) for r in self.rows], dtype=float)


@dataclass(frozen=True)
class PowerLawFit:
    """y ~ amplitude * |x - xc|^exponent over the window used."""

    xc: float
    exponent: float
    amplitude: float
    r2: float
    side: str
    window: tuple[float, float]
    n_points: int


def scan(
    spectrum_factory: Callable[[float], EnergySpectrum],
    k0: int,
    grid: Sequence[float],
    *,
    model: str = "",
    metadata: Optional[dict] = None,
    workers: int = 1,
) -> ScanResult:
    """Timescales and gap at every grid point, rows in grid order.

    Points run on a bounded worker pool; assembly order is the grid
    order regardless of completion order, so results are deterministic.
    A failure at any point aborts the scan naming the offending value.
    """
    controls = np.asarray(list(grid), dtype=float)
    if controls.size == 0:
        raise ValidationError("empty control grid")

    def one(x: float) -> tuple[TimescaleSet, float]:
        spectrum = spectrum_factory(float(x))
        row = timescales_at(spectrum, k0)
        gap = float(spectrum.levels[1] - spectrum.levels[0])
        return row, gap

    results: list[Optional[tuple[TimescaleSet, float]]] = [None] * controls.size
    if workers <= 1:
        for i, x in enumerate(controls):
            try:
                results[i] = one(x)
            except Exception as exc:
                raise SolverError(f"scan failed at control={x!r}: {exc}") from exc
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {i: pool.submit(one, x) for i, x in enumerate(controls)}
            for i in range(controls.size):
                try:
                    results[i] = futures[i].result()
                except Exception as exc:
                    raise SolverError(
                        f"scan failed at control={controls[i]!r}: {exc}"
                    ) from exc
    rows = tuple(r[0] for r in results)
    gaps = np.array([r[1] for r in results])
    return ScanResult(
        model=model,
        k0=int(k0),
        controls=controls,
        rows=rows,
        gaps=gaps,
        metadata=dict(metadata or {}),
    )


_DERIVATIVE_SLOT = {"second": 1, "third": 2}


def locate_divergence(
    spectrum_factory: Callable[[float], EnergySpectrum],
    k0: int,
    bracket: tuple[float, float],
    *,
    derivative: str = "second",
    tol: float = 1e-9,
) -> float:
    """Bisection root of the chosen spectral derivative at k0.

    The revival (or super-revival, with derivative="third") time blows up
    where the derivative crosses zero, so the root is the divergence
    point.  The bracket ends must give opposite signs.
    """
    slot = _DERIVATIVE_SLOT.get(derivative)
    if slot is None:
        raise ValidationError(f"derivative must be 'second' or 'third', got {derivative!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ValidationError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")

    def f(x: float) -> float:
        return timescales_at(spectrum_factory(x), k0).derivative_values[slot]

    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ValidationError(
            f"no sign change in bracket: derivative({lo}) = {flo:+.6e}, "
            f"derivative({hi}) = {fhi:+.6e}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _golden_max(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def locate_tcl_peak(
    spectrum_factory: Callable[[float], EnergySpectrum],
    k0: int,
    bracket: tuple[float, float],
    *,
    xtol: float = 1e-7,
) -> float:
    """Control value where the classical period peaks (it stays finite).

    Uses golden-section search on 2*pi/|slope|.  At k0 = 0 the slope is
    the centred difference (E_2 - E_0)/2: the gap alone minimizes at a
    measurably different control value than the classical-period crest,
    while the centred slope tracks the crest.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ValidationError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")

    if k0 == 0:
        def period(x: float) -> float:
            levels = spectrum_factory(x).levels
            slope = 0.5 * (levels[2] - levels[0])
            return 2.0 * math.pi / abs(slope) if slope != 0.0 else math.inf
    else:
        def period(x: float) -> float:
            return timescales_at(spectrum_factory(x), k0).t_cl

    return _golden_max(period, lo, hi, xtol)


def _window_select(
    d: np.ndarray, y: np.ndarray, window: Optional[tuple[float, float]]
) -> tuple[np.ndarray, np.ndarray, tuple[float, float]]:
    """Order by distance and apply either the explicit window or the
    default one (drop the nearest points, cap the distance)."""
    order = np.argsort(d)
    d, y = d[order], y[order]
    if window is None:
        d, y = d[WINDOW_DROP_NEAREST:], y[WINDOW_DROP_NEAREST:]
        keep = d <= WINDOW_CAP
        d, y = d[keep], y[keep]
        if d.size == 0:
            raise ValidationError("default window left no points")
        effective = (float(d[0]), float(d[-1]))
    else:
        w_lo, w_hi = float(window[0]), float(window[1])
        if not w_hi > w_lo:
            raise ValidationError(f"window must satisfy lo < hi, got ({w_lo}, {w_hi})")
        keep = (d >= w_lo) & (d <= w_hi)
        d, y = d[keep], y[keep]
        effective = (w_lo, w_hi)
    return d, y, effective


def _fit_one_side(
    x: np.ndarray,
    y: np.ndarray,
    xc: float,
    side: str,
    window: Optional[tuple[float, float]],
) -> PowerLawFit:
    d = (x - xc) if side == "above" else (xc - x)
    usable = (d > 0) & np.isfinite(y) & (y > 0)
    d, y = d[usable], y[usable]
    d, y, effective = _window_select(d, y, window)
    if d.size < 5:
        raise ValidationError(
            f"need at least 5 points on side {side!r} inside the window, got {d.size}"
        )
    log_d, log_y = np.log(d), np.log(y)
    slope, intercept = np.polyfit(log_d, log_y, 1)
    corr = np.corrcoef(log_d, log_y)[0, 1]
    r2 = min(max(float(corr * corr), 0.0), 1.0) if np.isfinite(corr) else 0.0
    return PowerLawFit(
        xc=float(xc),
        exponent=float(slope),
        amplitude=float(math.exp(intercept)),
        r2=r2,
        side=side,
        window=effective,
        n_points=int(d.size),
    )


def fit_powerlaw(
    scan_result: ScanResult,
    column: str,
    xc: float,
    side: str = "above",
    window: Optional[tuple[float, float]] = None,
) -> Union[PowerLawFit, tuple[PowerLawFit, PowerLawFit]]:
    """Least-squares line in (log|x - xc|, log y).

    `window` is a (lo, hi) band of distances from xc; None selects the
    default, which drops the 3 points nearest xc and caps the distance
    at 0.1.  side="both" fits below and above independently and returns
    the pair.
    """
    x = scan_result.controls
    y = scan_result.column(column)
    if side == "both":
        return (
            _fit_one_side(x, y, xc, "below", window),
            _fit_one_side(x, y, xc, "above", window),
        )
    if side not in ("below", "above"):
        raise ValidationError(f"side must be 'below', 'above', or 'both', got {side!r}")
    return _fit_one_side(x, y, xc, side, window)


def fit_powerlaw_free(
    scan_result: ScanResult,
    column: str,
    side: str,
    bracket: tuple[float, float],
    window: Optional[tuple[float, float]] = None,
    *,
    xtol: float = 1e-7,
) -> PowerLawFit:
    """fit_powerlaw with xc chosen by maximizing r^2 over the bracket.

    r^2 as a function of the trial xc is only piecewise smooth (points
    enter and leave the window as xc moves), so a coarse sweep first
    picks the basin holding the best value and golden-section search
    then refines inside it.
    """
    if side not in ("below", "above"):
        raise ValidationError(f"free fit needs side 'below' or 'above', got {side!r}")
    lo, hi = float(bracket[0]), float(bracket[1])
    if not hi > lo:
        raise ValidationError(f"degenerate bracket ({lo}, {hi})")

    def quality(xc: float) -> float:
        try:
            return fit_powerlaw(scan_result, column, xc, side, window).r2
        except ValidationError:
            return -math.inf

    sweep = np.linspace(lo, hi, 65)
    scores = [quality(x) for x in sweep]
    peak = int(np.argmax(scores))
    if not math.isfinite(scores[peak]):
        raise ValidationError("free fit found no usable xc in the bracket")
    basin_lo = sweep[max(peak - 1, 0)]
    basin_hi = sweep[min(peak + 1, sweep.size - 1)]
    best_xc = _golden_max(quality, float(basin_lo), float(basin_hi), xtol)
    if quality(best_xc) < scores[peak]:
        best_xc = float(sweep[peak])
    return fit_powerlaw(scan_result, column, best_xc, side, window)


def scaling_with_N(
    source: Callable[[int], Union[EnergySpectrum, TimescaleSet]],
    k0_rule: Union[int, float, None],
    sizes: Sequence[int],
    column: str = "T_cl",
) -> PowerLawFit:
    """Log-log fit of one timescale against system size N.

    `source` maps a size to either an EnergySpectrum (then `k0_rule`
    places the centre: an int is a fixed k0, a float in (0, 1/2) is a
    fixed fraction x0 with k0 = round(x0*N)) or directly to a
    TimescaleSet (then `k0_rule` is ignored).  Intended use is four or
    more sizes spanning a decade; two is the hard floor.
    """
    sizes = [int(n) for n in sizes]
    if len(sizes) < 2:
        raise ValidationError("need at least two sizes")
    attr = {"T_cl": "t_cl", "T_r": "t_r", "T_sr": "t_sr"}.get(column)
    if attr is None:
        raise ValidationError(f"unknown column {column!r}")
    values = []
    for n in sizes:
        obj = source(n)
        if isinstance(obj, EnergySpectrum):
            if isinstance(k0_rule, int) and not isinstance(k0_rule, bool):
                k0 = k0_rule
            elif isinstance(k0_rule, float) and 0.0 < k0_rule < 0.5:
                k0 = int(round(k0_rule * n))
            else:
                raise ValidationError(
                    f"k0_rule must be an int or a fraction in (0, 1/2), got {k0_rule!r}"
                )
            obj = timescales_at(obj, k0)
        value = getattr(obj, attr)
        if not (math.isfinite(value) and value > 0):
            raise ValidationError(f"{column} at N={n} is not finite and positive")
        values.append(value)
    log_n = np.log(np.asarray(sizes, dtype=float))
    log_t = np.log(np.asarray(values))
    slope, intercept = np.polyfit(log_n, log_t, 1)
    corr = np.corrcoef(log_n, log_t)[0, 1]
    r2 = min(max(float(corr * corr), 0.0), 1.0) if np.isfinite(corr) else 0.0
    return PowerLawFit(
        xc=0.0,
        exponent=float(slope),
        amplitude=float(math.exp(intercept)),
        r2=r2,
        side="above",
        window=(float(min(sizes)), float(max(sizes))),
        n_points=len(sizes),
    )


SEMICLASSICAL_CHI = 0.2


def semiclassical_check(
    N: int,
    k_window: tuple[int, int],
    *,
    spectrum: Optional[EnergySpectrum] = None,
) -> PowerLawFit:
    """Slope of log(E_k/N - 0.2) against log k over the window, at the
    critical coupling.  Rejects windows containing a non-positive
    ordinate, which happens at very small k."""
    k_lo, k_hi = int(k_window[0]), int(k_window[1])
    if spectrum is None:
        spectrum = vibron_spectrum(VibronParams(N, SEMICLASSICAL_CHI))
    D = len(spectrum)
    if not (1 <= k_lo <= k_hi <= D - 1):
        raise ValidationError(f"window [{k_lo}, {k_hi}] outside (0, {D - 1}]")
    ks = np.arange(k_lo, k_hi + 1)
    ordinate = spectrum.levels[ks] / float(N) - SEMICLASSICAL_CHI
    bad = ks[ordinate <= 0]
    if bad.size:
        raise ValidationError(
            f"non-positive ordinate inside window at k = {bad.tolist()}"
        )
    log_k, log_y = np.log(ks.astype(float)), np.log(ordinate)
    slope, intercept = np.polyfit(log_k, log_y, 1)
    corr = np.corrcoef(log_k, log_y)[0, 1]
    r2 = min(max(float(corr * corr), 0.0), 1.0) if np.isfinite(corr) else 0.0
    return PowerLawFit(
        xc=0.0,
        exponent=float(slope),
        amplitude=float(math.exp(intercept)),
        r2=r2,
        side="above",
        window=(float(k_lo), float(k_hi)),
        n_points=int(ks.size),
    )
