"""Classical, revival, and super-revival timescales from spectral derivatives.

T_Cl = 2*pi/|E'|, T_R = 4*pi/|E''|, T_SR = 12*pi/|E'''|, with the
derivatives of E_k taken at the packet centre k0 by finite differences.
A vanishing derivative maps to an infinite timescale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .spectral import EnergySpectrum, ValidationError

__all__ = ["TimescaleSet", "timescales_at", "timescale_ratio_vs_N"]


@dataclass(frozen=True)
class TimescaleSet:
    """The three timescales at one level index, plus the derivative
    values (E', E'', E''') they came from.  At k0 = 0 the E' slot holds
    the gap E1 - E0, which is what the classical period is taken from
    there."""

    t_cl: float
    t_r: float
    t_sr: float
    k0: int
    derivative_values: tuple[float, float, float]


def _period(multiple: float, derivative: float) -> float:
    if derivative == 0.0:
        return math.inf
    return multiple * math.pi / abs(derivative)


def timescales_at(spectrum: EnergySpectrum, k0: int) -> TimescaleSet:
    """Timescales at level k0 of an ascending spectrum.

    Interior points (2 <= k0 <= D-3) use central differences:
        E'   = (E_{k0+1} - E_{k0-1}) / 2
        E''  = E_{k0+1} + E_{k0-1} - 2 E_{k0}
        E''' = (E_{k0+2} - 2 E_{k0+1} + 2 E_{k0-1} - E_{k0-2}) / 2
    The boundary k0 = 0 takes E'' from the parabola through the three
    lowest levels, E''' from the cubic through the four lowest, and the
    classical period from the gap: T_Cl = 2*pi/(E1 - E0).
    """
    levels = spectrum.levels
    D = levels.size
    if D < 4:
        raise ValidationError(f"spectrum too short for stencils: {D} < 4")
    if k0 == 0:
        gap = levels[1] - levels[0]
        # parabola through levels 0..2: second derivative at k=0
        e2 = levels[0] - 2.0 * levels[1] + levels[2]
        # cubic through levels 0..3: third derivative (constant in k)
        e3 = levels[3] - 3.0 * levels[2] + 3.0 * levels[1] - levels[0]
        return TimescaleSet(
            t_cl=_period(2.0, gap),
            t_r=_period(4.0, e2),
            t_sr=_period(12.0, e3),
            k0=0,
            derivative_values=(float(gap), float(e2), float(e3)),
        )
    if 2 <= k0 <= D - 3:
        e1 = 0.5 * (levels[k0 + 1] - levels[k0 - 1])
        e2 = levels[k0 + 1] + levels[k0 - 1] - 2.0 * levels[k0]
        e3 = 0.5 * (
            levels[k0 + 2]
            - 2.0 * levels[k0 + 1]
            + 2.0 * levels[k0 - 1]
            - levels[k0 - 2]
        )
        return TimescaleSet(
            t_cl=_period(2.0, e1),
            t_r=_period(4.0, e2),
            t_sr=_period(12.0, e3),
            k0=int(k0),
            derivative_values=(float(e1), float(e2), float(e3)),
        )
    raise ValidationError(
        f"k0={k0} outside the stencil domain {{0}} union [2, {D - 3}] for D={D}"
    )


def timescale_ratio_vs_N(
    spectrum_for_size: Callable[[int], EnergySpectrum],
    x0: float,
    sizes: Sequence[int],
) -> list[tuple[int, TimescaleSet]]:
    """Timescales at the fixed fractional centre k0 = round(x0*N) across
    system sizes, for ratio analysis."""
    if not (0.0 < x0 < 0.5):
        raise ValidationError(f"x0={x0} outside (0, 1/2)")
    sizes = list(sizes)
    if len(sizes) < 2:
        raise ValidationError("need at least two sizes")
    out = []
    for n in sizes:
        spec = spectrum_for_size(int(n))
        k0 = int(round(x0 * n))
        out.append((int(n), timescales_at(spec, k0)))
    return out
