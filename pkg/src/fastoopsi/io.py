"""Delimited-text trace files and result files."""
from __future__ import annotations

import math
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, TraceFormatError
from .model import FluorescenceTrace

RESULT_HEADER = ("t", "F", "C", "n")
#: Relative tolerance on the spacing of a time column.
GRID_RTOL = 1e-6
_FMT = "{:.15g}"


def _split(line):
    return [tok.strip() for tok in line.split(",")] if "," in line else line.split()


def read_table(path):
    """Parse a comma- or whitespace-delimited numeric table.

    The first non-blank line is taken as a header if it does not parse as
    numbers. Blank lines and lines starting with ``#`` are skipped.

    Returns
    -------
    header : list of str or None
    data : ndarray, shape (rows, cols)
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TraceFormatError(f"cannot read file: {exc.strerror or exc}", path=path) from None
    header = None
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = _split(line)
        try:
            vals = [float(tok) for tok in toks]
        except ValueError:
            if header is None and not rows:
                header = toks
                continue
            raise TraceFormatError(f"cannot parse {line!r} as numbers", path=path, line=lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise TraceFormatError(f"non-finite value in {line!r}", path=path, line=lineno)
        if width is None:
            width = len(vals)
            if header is not None and len(header) != width:
                raise TraceFormatError(
                    f"header has {len(header)} columns but data has {width}", path=path, line=lineno)
        elif len(vals) != width:
            raise TraceFormatError(f"expected {width} columns, found {len(vals)}", path=path, line=lineno)
        rows.append(vals)
    if not rows:
        raise TraceFormatError("no data rows", path=path)
    return header, np.array(rows, dtype=np.float64)


def _grid_step(t, path):
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise TraceFormatError("time column is not strictly increasing", path=path)
    step = (t[-1] - t[0]) / (len(t) - 1)
    if np.any(np.abs(steps - step) > GRID_RTOL * abs(step)):
        raise TraceFormatError("time column is not uniformly spaced", path=path)
    return float(step)


def read_trace(path, dt_override=None) -> FluorescenceTrace:
    """Load a fluorescence trace.

    Accepts one column (values) or two columns (time, value). A file with a
    header naming an ``F`` column (such as a result file) is also accepted.
    The frame interval comes from the time column when there is one,
    otherwise from ``dt_override``.
    """
    header, data = read_table(path)
    ncol = data.shape[1]
    t = None
    if header is not None and "F" in header and ncol > 2:
        values = data[:, header.index("F")]
        if "t" in header:
            t = data[:, header.index("t")]
    elif ncol == 1:
        values = data[:, 0]
    elif ncol == 2:
        t, values = data[:, 0], data[:, 1]
    else:
        raise TraceFormatError(f"expected 1 or 2 columns, found {ncol}", path=path)

    if t is not None and len(t) >= 2:
        dt = _grid_step(t, path)
    elif dt_override is not None:
        dt = float(dt_override)
    else:
        raise DomainError(f"{path}: no time column; the frame interval must be given")
    if not dt > 0:
        raise DomainError(f"frame interval must be positive, got {dt}")
    return FluorescenceTrace(values, dt)


def read_column(path, name="n"):
    """Return column ``name`` if the header has it, else the last column."""
    header, data = read_table(path)
    if header is not None and name in header:
        return data[:, header.index(name)]
    return data[:, -1]


def _atomic_write(path: Path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x):
    return _FMT.format(float(x))


def write_columns(path, header, columns, dt):
    """Write ``t`` followed by ``columns`` as CSV, atomically."""
    T = len(columns[0])
    lines = [",".join(("t",) + tuple(header))]
    for i in range(T):
        lines.append(",".join([_fmt(i * dt)] + [_fmt(col[i]) for col in columns]))
    _atomic_write(Path(path), "\n".join(lines) + "\n")


def result_paths(path):
    """``(csv_path, meta_path)`` for an output stem or ``.csv`` path."""
    path = Path(path)
    if path.suffix != ".csv":
        path = path.with_name(path.name + ".csv")
    return path, path.with_suffix(".meta")


def metadata(result) -> dict:
    P = result.params
    return {
        "tool": "fastoopsi",
        "version": __version__,
        "method": result.method,
        "T": str(result.n.T),
        "dt": _fmt(P.dt),
        "alpha": _fmt(P.alpha),
        "beta": _fmt(P.beta),
        "sigma": _fmt(P.sigma),
        "gamma": _fmt(P.gamma),
        "lambda_rate": _fmt(P.lambda_rate),
        "objective_trajectory": ",".join(_fmt(v) for v in result.objective_trajectory),
        "converged": "true" if result.converged else "false",
        "iterations": str(result.iterations),
    }


def write_result(result, path):
    """Write ``<stem>.csv`` (columns ``t,F,C,n``) and ``<stem>.meta`` (``key=value``).

    Both files are written via a temporary file and renamed into place.
    Returns the two paths.
    """
    csv_path, meta_path = result_paths(path)
    try:
        write_columns(csv_path, RESULT_HEADER[1:], [result.F.values, result.C.values, result.n.values],
                      result.n.dt)
        meta = metadata(result)
        _atomic_write(meta_path, "".join(f"{k}={v}\n" for k, v in meta.items()))
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write result: {exc.strerror}", str(csv_path)) from None
    return csv_path, meta_path


def read_metadata(path) -> dict:
    """Parse a ``key=value`` metadata file into a dict of strings."""
    out = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise TraceFormatError(f"expected key=value, got {line!r}", path=path)
        out[key.strip()] = value.strip()
    return out
