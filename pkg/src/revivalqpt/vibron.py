"""The l=0 sector of the U(3) vibron model.

H(chi) = (1-chi) * k_hat + chi/(N-1) * P_hat with the pairing operator
P_hat = N(N+1) - W^2.  Only even basis labels k_b = 2i carry an l=0
state, so the sector is a single tridiagonal chain of dimension
D = floor(N/2) + 1.  The model crosses a quantum phase transition at
chi = 0.2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import (
    EnergySpectrum,
    SymTridiagonal,
    ValidationError,
    eig_sym_tridiagonal,
)
from .timescales import TimescaleSet

__all__ = [
    "VibronParams",
    "VibronSpectrum",
    "build_vibron",
    "vibron_spectrum",
    "vibron_gap_thermodynamic",
    "vibron_exact_times",
]

CHI_C = 0.2


@dataclass(frozen=True)
class VibronParams:
    """N: number of bound states; chi: control parameter in [0, 1]."""

    N: int
    chi: float

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise ValidationError(f"N must be an integer >= 2, got {self.N!r}")
        if not (0.0 <= self.chi <= 1.0):
            raise ValidationError(f"chi={self.chi} outside [0, 1]")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "chi", float(self.chi))

    @property
    def dim(self) -> int:
        return self.N // 2 + 1


VibronSpectrum = EnergySpectrum


def _a_l0(N: float, k: np.ndarray) -> np.ndarray:
    # diagonal W^2 element at l=0: a(k) = (N-k)(k+2) + (N-k+1)k
    return (N - k) * (k + 2.0) + (N - k + 1.0) * k


def build_vibron(params: VibronParams) -> SymTridiagonal:
    """Tridiagonal matrix of H(chi) over the l=0 chain, basis label 2i.

    The off-diagonal element between rows i and i+1 is the sign-flipped
    coupling element of W^2 (P = N(N+1) - W^2), which leaves the spectrum
    untouched because a basis-sign similarity removes the overall sign.
    """
    N = float(params.N)
    chi = params.chi
    D = params.dim
    i = np.arange(D, dtype=float)
    kb = 2.0 * i
    diag = (1.0 - chi) * kb + (chi / (N - 1.0)) * (N * (N + 1.0) - _a_l0(N, kb))
    ii = np.arange(D - 1, dtype=float)
    off = (chi / (N - 1.0)) * (2.0 * ii + 2.0) * np.sqrt(
        (N - 2.0 * ii) * (N - 2.0 * ii - 1.0)
    )
    return SymTridiagonal(diag, off)


def vibron_spectrum(params: VibronParams) -> EnergySpectrum:
    """Ascending l=0 eigenvalues; the level index k is the ascending rank."""
    system = eig_sym_tridiagonal(build_vibron(params), want_vectors=False)
    return EnergySpectrum(system.values, params=params)


def vibron_gap_thermodynamic(chi: float) -> float:
    """Large-N gap sqrt((5*chi - 1)(1 + 3*chi)), defined for chi > 0.2."""
    if not chi > CHI_C:
        raise ValidationError(f"gap formula needs chi > {CHI_C}, got {chi}")
    return math.sqrt((5.0 * chi - 1.0) * (1.0 + 3.0 * chi))


def vibron_exact_times(params: VibronParams, k0: int) -> TimescaleSet:
    """Closed-form timescales at the integrable endpoints chi = 0 and chi = 1.

    chi=0: T_Cl = pi, T_R and T_SR infinite (harmonic spectrum E_k = 2k).
    chi=1: T_Cl = (N-1)*pi/(2N+1-4*k0) at interior k0 and 2*pi/(E1-E0)
    at k0 = 0; T_R = (N-1)*pi/2; T_SR infinite (quadratic spectrum).
    """
    D = params.dim
    if not (0 <= k0 < D):
        raise ValidationError(f"k0={k0} outside [0, {D - 1}]")
    if params.chi == 0.0:
        return TimescaleSet(
            t_cl=math.pi,
            t_r=math.inf,
            t_sr=math.inf,
            k0=int(k0),
            derivative_values=(2.0, 0.0, 0.0),
        )
    if params.chi == 1.0:
        N = params.N
        e2 = -8.0 / (N - 1.0)
        if k0 == 0:
            gap = 2.0 * (2.0 * N - 1.0) / (N - 1.0)  # E_1 - E_0 of E_k(1)
            return TimescaleSet(
                t_cl=2.0 * math.pi / gap,
                t_r=(N - 1.0) * math.pi / 2.0,
                t_sr=math.inf,
                k0=0,
                derivative_values=(gap, e2, 0.0),
            )
        e1 = (4.0 / (N - 1.0)) * (N + 0.5 - 2.0 * k0)
        return TimescaleSet(
            t_cl=(N - 1.0) * math.pi / abs(2.0 * N + 1.0 - 4.0 * k0),
            t_r=(N - 1.0) * math.pi / 2.0,
            t_sr=math.inf,
            k0=int(k0),
            derivative_values=(e1, e2, 0.0),
        )
    raise ValidationError(
        f"closed forms exist only at chi in {{0, 1}}, got chi={params.chi}"
    )
