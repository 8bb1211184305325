"""Parity blocks of the Dicke Hamiltonian in the truncated |n, m> basis.

H = w0*Jz + w*a^dag a + (lambda/sqrt(2j)) (a^dag + a)(J+ + J-)

conserves the parity of n + m + j, so each block diagonalizes on its
own.  The basis is enumerated n-major with m ascending inside each n.
The superradiant transition of the full model sits at
lambda_c = sqrt(w0*w)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectral import (
    EnergySpectrum,
    SolverError,
    SymDense,
    ValidationError,
    eig_sym_dense,
)

__all__ = [
    "DickeParams",
    "DickeSpectrum",
    "TRUNCATION_SCHEDULE",
    "build_dicke_block",
    "dicke_basis",
    "dicke_spectrum",
    "converge_truncation",
    "dicke_lambda_c",
]

TRUNCATION_SCHEDULE = (20, 40, 80, 160, 320)


@dataclass(frozen=True)
class DickeParams:
    j: float
    w0: float
    w: float
    lam: float
    n_max: int
    parity: str = "even"

    def __post_init__(self):
        two_j = 2.0 * self.j
        if self.j <= 0 or abs(two_j - round(two_j)) > 1e-12:
            raise ValidationError(f"j must be a positive half-integer, got {self.j}")
        if self.w0 <= 0 or self.w <= 0:
            raise ValidationError("w0 and w must be positive")
        if self.lam < 0:
            raise ValidationError(f"lambda must be >= 0, got {self.lam}")
        if not isinstance(self.n_max, (int, np.integer)) or self.n_max < 1:
            raise ValidationError(f"n_max must be an integer >= 1, got {self.n_max!r}")
        if self.parity not in ("even", "odd"):
            raise ValidationError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        object.__setattr__(self, "j", float(self.j))
        object.__setattr__(self, "w0", float(self.w0))
        object.__setattr__(self, "w", float(self.w))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "n_max", int(self.n_max))


DickeSpectrum = EnergySpectrum


def dicke_basis(params: DickeParams) -> list[tuple[int, float]]:
    """(n, m) states of the requested parity, n-major, m ascending.

    m is returned as a float (half-integers occur for half-integer j).
    Parity is the parity of n + m + j, which is always an integer.
    """
    two_j = int(round(2.0 * params.j))
    want = 0 if params.parity == "even" else 1
    basis = []
    for n in range(params.n_max + 1):
        for two_m in range(-two_j, two_j + 1, 2):
            if (n + (two_m + two_j) // 2) % 2 == want:
                basis.append((n, two_m / 2.0))
    if not basis:
        raise ValidationError("empty parity block")
    return basis


def build_dicke_block(params: DickeParams) -> SymDense:
    """One parity block of H.

    Diagonal: w0*m + w*n.  Off-diagonal between (n, m) and (n+1, m+-1):
    (lambda/sqrt(2j)) * sqrt(n+1) * sqrt(j(j+1) - m*m'), the product of
    the boson ladder element and the spin ladder element.  The coupling
    changes n + m by 0 or +-2, so the block loses no matrix element.
    """
    basis = dicke_basis(params)
    index = {(n, m): i for i, (n, m) in enumerate(basis)}
    dim = len(basis)
    j = params.j
    g = params.lam / math.sqrt(2.0 * j)
    H = np.zeros((dim, dim))
    for i, (n, m) in enumerate(basis):
        H[i, i] = params.w0 * m + params.w * n
        for dm in (-1.0, 1.0):
            other = index.get((n + 1, m + dm))
            if other is None:
                continue
            element = g * math.sqrt(n + 1.0) * math.sqrt(
                j * (j + 1.0) - m * (m + dm)
            )
            H[i, other] = element
            H[other, i] = element
    return SymDense(H)


def dicke_spectrum(
    params: DickeParams, truncation_converged: bool = False
) -> EnergySpectrum:
    """Ascending eigenvalues of the requested parity block."""
    system = eig_sym_dense(build_dicke_block(params), want_vectors=False)
    return EnergySpectrum(
        system.values, params=params, truncation_converged=truncation_converged
    )


def converge_truncation(params: DickeParams, retained: int, tol: float) -> int:
    """Smallest schedule n_max whose lowest `retained` levels move by less
    than `tol` (absolute) when n_max doubles.  Raises if even the last
    doubling still moves them."""
    if retained < 1:
        raise ValidationError(f"retained must be >= 1, got {retained}")
    if tol <= 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    previous = None
    for step, n_max in enumerate(TRUNCATION_SCHEDULE):
        trial = DickeParams(
            params.j, params.w0, params.w, params.lam, n_max, params.parity
        )
        levels = dicke_spectrum(trial).levels
        if levels.size < retained:
            raise ValidationError(
                f"block at n_max={n_max} holds {levels.size} < retained={retained} levels"
            )
        head = levels[:retained]
        if previous is not None and float(np.max(np.abs(head - previous))) < tol:
            return TRUNCATION_SCHEDULE[step - 1]
        previous = head
    raise SolverError(
        f"lowest {retained} levels still move at n_max={TRUNCATION_SCHEDULE[-1]}"
    )


def dicke_lambda_c(w0: float, w: float) -> float:
    """Critical coupling sqrt(w0*w)/2 of the superradiant transition."""
    if w0 <= 0 or w <= 0:
        raise ValidationError("w0 and w must be positive")
    return math.sqrt(w0 * w) / 2.0
