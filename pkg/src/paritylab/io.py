"""Deterministic CSV output with a commented header block.

Every file starts with '#' comment lines carrying the tool version, the
phase-space convention tag and the fully resolved run configuration, so
a data file is reproducible from its own header.  Floats are written in
scientific notation with 17 significant digits; identical configurations
produce byte-identical files.
"""

from __future__ import annotations

import io as _io
import math
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from . import __version__
from .errors import DomainError
from .rabi import RabiTrace
from .wigner import CONVENTION


def format_float(x: float) -> str:
    return format(float(x), ".16e")


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    return str(v)


def header_lines(config: Mapping[str, object], extra: Sequence[str] = ()) -> list[str]:
    lines = [f"# paritylab {__version__}", f"# convention: {CONVENTION}"]
    for key in sorted(config):
        lines.append(f"# config: {key} = {format_value(config[key])}")
    lines.extend(f"# {line}" for line in extra)
    return lines


def write_csv(stream: TextIO, columns: Sequence[str], rows: Iterable[Sequence],
              config: Mapping[str, object], extra: Sequence[str] = ()) -> None:
    for line in header_lines(config, extra):
        stream.write(line + "\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(
            format_float(v) if isinstance(v, (float, np.floating)) else str(v)
            for v in row) + "\n")


def csv_text(columns: Sequence[str], rows: Iterable[Sequence],
             config: Mapping[str, object], extra: Sequence[str] = ()) -> str:
    buf = _io.StringIO()
    write_csv(buf, columns, rows, config, extra)
    return buf.getvalue()


TRACE_COLUMNS = ("tau", "p_ground", "p_excited")


def write_trace_csv(stream: TextIO, trace: RabiTrace,
                    config: Mapping[str, object]) -> None:
    rows = zip(trace.taus.tolist(), trace.p_ground.tolist(), trace.p_excited.tolist())
    write_csv(stream, TRACE_COLUMNS, rows, config)


def read_trace_csv(stream: TextIO) -> RabiTrace:
    """Read a Rabi trace written by write_trace_csv (or an external file
    following the same tau,p_ground,p_excited schema)."""
    header = None
    taus: list[float] = []
    pg: list[float] = []
    pe: list[float] = []
    for raw in stream:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = tuple(s.strip() for s in line.split(","))
            if header != TRACE_COLUMNS:
                raise DomainError(
                    f"trace file columns {header} do not match {TRACE_COLUMNS}")
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise DomainError(f"trace row {line!r} does not have 3 columns")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise DomainError(f"trace row {line!r} has a non-numeric field") from None
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"trace row {line!r} has a non-finite field")
        taus.append(values[0])
        pg.append(values[1])
        pe.append(values[2])
    if header is None or not taus:
        raise DomainError("trace file has no data rows")
    return RabiTrace(np.array(taus), np.array(pg), np.array(pe))
