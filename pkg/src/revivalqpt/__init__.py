"""Wave-packet revival timescales across quantum phase transitions.

Spectra of the U(3) vibron model (l=0 sector) and the Dicke model,
Gaussian packets over energy eigenstates, autocorrelation traces, and
the critical behaviour of the classical / revival / super-revival
timescales extracted from spectral derivatives.
"""

from .spectral import (
    EigenSystem,
    EnergySpectrum,
    SolverError,
    SymDense,
    SymTridiagonal,
    ValidationError,
    eig_sym_dense,
    eig_sym_tridiagonal,
)
from .vibron import (
    VibronParams,
    build_vibron,
    vibron_exact_times,
    vibron_gap_thermodynamic,
    vibron_spectrum,
)
from .dicke import (
    DickeParams,
    build_dicke_block,
    converge_truncation,
    dicke_lambda_c,
    dicke_spectrum,
)
from .timescales import TimescaleSet, timescale_ratio_vs_N, timescales_at
from .dynamics import (
    AutocorrelationTrace,
    TimeGrid,
    WavePacket,
    autocorrelation,
    default_time_grid,
    detect_recurrences,
    gaussian_packet,
)
from .criticality import (
    PowerLawFit,
    ScanResult,
    fit_powerlaw,
    fit_powerlaw_free,
    locate_divergence,
    locate_tcl_peak,
    scaling_with_N,
    scan,
    semiclassical_check,
)
from ._version import __version__

__all__ = [
    "AutocorrelationTrace",
    "DickeParams",
    "EigenSystem",
    "EnergySpectrum",
    "PowerLawFit",
    "ScanResult",
    "SolverError",
    "SymDense",
    "SymTridiagonal",
    "TimeGrid",
    "TimescaleSet",
    "ValidationError",
    "VibronParams",
    "WavePacket",
    "autocorrelation",
    "build_dicke_block",
    "build_vibron",
    "converge_truncation",
    "default_time_grid",
    "detect_recurrences",
    "dicke_lambda_c",
    "dicke_spectrum",
    "eig_sym_dense",
    "eig_sym_tridiagonal",
    "fit_powerlaw",
    "fit_powerlaw_free",
    "gaussian_packet",
    "locate_divergence",
    "locate_tcl_peak",
    "scaling_with_N",
    "scan",
    "semiclassical_check",
    "timescale_ratio_vs_N",
    "timescales_at",
    "vibron_exact_times",
    "vibron_gap_thermodynamic",
    "vibron_spectrum",
]
