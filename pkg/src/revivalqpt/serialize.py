"""Deterministic text emission: CSV files and fit records.

Identical inputs must produce byte-identical files, so floats are
printed with 17 significant digits (round-trip exact for float64),
infinities as `inf`, and nothing time- or host-dependent is written.
Every file opens with one comment line carrying the resolved config and
the package version.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence, Union

from ._version import __version__ as PACKAGE_VERSION
from .criticality import PowerLawFit, ScanResult

Cell = Union[int, float, str]

__all__ = [
    "format_float",
    "comment_line",
    "write_csv",
    "read_csv",
    "fit_record",
    "parse_fit_record",
    "scan_csv_rows",
    "scan_result_from_csv",
]


def format_float(x: float) -> str:
    return f"{float(x):.17g}"


def _format_cell(value: Cell) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans have no CSV representation here")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def comment_line(config: dict) -> str:
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return f"# revivalqpt {PACKAGE_VERSION} config={payload}"


def csv_text(
    header: Sequence[str], rows: Iterable[Sequence[Cell]], config: dict
) -> str:
    lines = [comment_line(config), ",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def write_csv(
    path: Union[str, Path],
    header: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    config: dict,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows, config), encoding="ascii")
    return path


def read_csv(path: Union[str, Path]) -> tuple[list[str], list[list[float]]]:
    """Header and float rows of a CSV written by write_csv; comment lines
    are skipped.  `inf` parses back to math.inf via float()."""
    header: list[str] = []
    rows: list[list[float]] = []
    for line in Path(path).read_text(encoding="ascii").splitlines():
        if not line or line.startswith("#"):
            continue
        if not header:
            header = line.split(",")
            continue
        rows.append([float(cell) for cell in line.split(",")])
    return header, rows


def fit_record(fit: PowerLawFit) -> str:
    """Key-value text form of one fit, one field per line.

    window serializes as `lo,hi`; floats use 17 significant digits.
    """
    lines = [
        f"xc = {format_float(fit.xc)}",
        f"exponent = {format_float(fit.exponent)}",
        f"amplitude = {format_float(fit.amplitude)}",
        f"r2 = {format_float(fit.r2)}",
        f"side = {fit.side}",
        f"window = {format_float(fit.window[0])},{format_float(fit.window[1])}",
        f"n_points = {fit.n_points}",
    ]
    return "\n".join(lines) + "\n"


def parse_fit_record(text: str) -> PowerLawFit:
    fields: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    lo, _, hi = fields["window"].partition(",")
    return PowerLawFit(
        xc=float(fields["xc"]),
        exponent=float(fields["exponent"]),
        amplitude=float(fields["amplitude"]),
        r2=float(fields["r2"]),
        side=fields["side"],
        window=(float(lo), float(hi)),
        n_points=int(fields["n_points"]),
    )


def scan_csv_rows(result: ScanResult) -> list[list[Cell]]:
    rows: list[list[Cell]] = []
    for x, ts, gap in zip(result.controls, result.rows, result.gaps):
        rows.append(
            [float(x), result.k0, ts.t_cl, ts.t_r, ts.t_sr, float(gap)]
        )
    return rows


def scan_result_from_csv(path: Union[str, Path]) -> ScanResult:
    """Rebuild a ScanResult from a `control,k0,T_cl,T_r,T_sr,gap` file.

    Derivative values are not stored in the CSV, so the reloaded rows
    carry NaN placeholders there; fits never read them.
    """
    from .timescales import TimescaleSet

    header, rows = read_csv(path)
    expected = ["control", "k0", "T_cl", "T_r", "T_sr", "gap"]
    if header != expected:
        raise ValueError(f"unexpected scan header {header!r}")
    controls = [r[0] for r in rows]
    k0 = int(rows[0][1]) if rows else 0
    sets = tuple(
        TimescaleSet(
            t_cl=r[2],
            t_r=r[3],
            t_sr=r[4],
            k0=int(r[1]),
            derivative_values=(math.nan, math.nan, math.nan),
        )
        for r in rows
    )
    gaps = [r[5] for r in rows]
    return ScanResult(
        model="csv",
        k0=k0,
        controls=controls,
        rows=sets,
        gaps=gaps,
        metadata={"source": str(path)},
    )
