"""Loading one-dimensional samples, summary statistics and the EDF."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable, Sequence

import numpy as np


class SampleError(ValueError):
    """Raised when input data cannot form a valid sample."""


@dataclass(frozen=True)
class Sample:
    """Ascending, finite, one-dimensional observations.

    ``values`` is a read-only float array. Construct through
    :func:`make_sample` or :func:`load_sample` rather than directly.
    """

    values: np.ndarray
    label: str = ""
    text: tuple[str, ...] = field(default=(), repr=False, compare=False)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    sd: float
    min: float
    max: float

    def as_dict(self) -> dict:
        return {"mean": self.mean, "sd": self.sd, "min": self.min, "max": self.max}


def make_sample(values: Iterable[float], label: str = "", text: Sequence[str] | None = None) -> Sample:
    """Validate ``values`` and return them as a sorted :class:`Sample`.

    ``text`` optionally carries the original decimal strings so a sample can be
    written back out exactly; it is reordered alongside the values.
    """
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.float64)
    if arr.ndim != 1:
        raise SampleError("sample must be one-dimensional")
    if arr.size < 2:
        raise SampleError(f"need at least 2 values, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise SampleError("sample contains non-finite values")
    order = np.argsort(arr, kind="stable")
    arr = arr[order]
    arr.setflags(write=False)
    kept_text: tuple[str, ...] = ()
    if text is not None:
        if len(text) != order.size:
            raise SampleError("text and values differ in length")
        kept_text = tuple(text[i] for i in order)
    return Sample(values=arr, label=label, text=kept_text)


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _parse_rows(rows: list[list[str]], column: str | int | None) -> tuple[list[float], list[str]]:
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise SampleError("empty input")

    header: list[str] | None = None
    first = [c.strip() for c in rows[0]]
    if not all(_is_number(c) for c in first if c):
        header = first
        rows = rows[1:]
        if not rows:
            raise SampleError("input has a header but no data rows")

    if column is None:
        idx = 0
    elif isinstance(column, int) or (isinstance(column, str) and column.isdigit() and (header is None or column not in header)):
        idx = int(column)
    else:
        if header is None:
            raise SampleError(f"column {column!r} requested but input has no header row")
        if column not in header:
            raise SampleError(f"column {column!r} not found; available: {', '.join(header)}")
        idx = header.index(column)

    values, text = [], []
    for rownum, row in enumerate(rows, start=1):
        if idx >= len(row):
            raise SampleError(f"row {rownum}: missing column {idx}")
        cell = row[idx].strip()
        try:
            v = float(cell)
        except ValueError:
            raise SampleError(f"row {rownum}: cannot parse {cell!r} as a number") from None
        if not math.isfinite(v):
            raise SampleError(f"row {rownum}: non-finite value {cell!r}")
        values.append(v)
        text.append(cell)
    return values, text


def load_sample(source: str | os.PathLike | IO | bytes, column: str | int | None = None, label: str | None = None) -> Sample:
    """Read a sample from CSV or newline-delimited numbers.

    Parameters
    ----------
    source
        A path, raw bytes, or an open text/binary stream.
    column
        Column name (requires a header row) or zero-based index. Defaults to
        the first column.
    label
        Free-text identifier; defaults to the file stem for paths.

    Raises
    ------
    SampleError
        On empty input, an unparseable cell (the data row number is reported,
        counting from 1 after any header) or fewer than two values.
    """
    if isinstance(source, (bytes, bytearray)):
        content = bytes(source).decode("utf-8-sig")
        default_label = ""
    elif isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8-sig", newline="") as fh:
            content = fh.read()
        default_label = os.path.splitext(os.path.basename(os.fspath(source)))[0]
    else:
        raw = source.read()
        content = raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw
        default_label = ""
    rows = list(csv.reader(io.StringIO(content)))
    values, text = _parse_rows(rows, column)
    return make_sample(values, label=default_label if label is None else label, text=text)


def dump_sample(s: Sample, fh: IO[str], header: str | None = "value") -> None:
    """Write ``s`` as one value per line, reusing original text when known."""
    if header:
        fh.write(header + "\n")
    cells = s.text if s.text else [repr(float(v)) for v in s.values]
    for c in cells:
        fh.write(c + "\n")


def housefly_path() -> str:
    """Filesystem path of the bundled housefly wing-length CSV."""
    return str(resources.files("cedagof").joinpath("data/housefly.csv"))


def load_housefly() -> Sample:
    return load_sample(housefly_path(), label="housefly")


def summarize(s: Sample) -> SummaryStats:
    """Mean, sample standard deviation (divisor n - 1), min and max."""
    v = s.values
    mean = float(np.mean(v))
    # mean of identical values can drift by an ulp
    mean = min(max(mean, float(v[0])), float(v[-1]))
    sd = float(np.std(v, ddof=1))
    return SummaryStats(mean=mean, sd=sd, min=float(v[0]), max=float(v[-1]))


def edf_eval(s: Sample, x):
    """Empirical distribution function: fraction of values <= ``x``.

    Accepts a scalar or an array of evaluation points.
    """
    counts = np.searchsorted(s.values, x, side="right")
    out = counts / s.n
    return float(out) if np.ndim(out) == 0 else out


def synthetic_left_skewed(n: int = 2432, seed: int = 2017, mean: float = 95.35, sd: float = 1.36, log_sd: float = 0.35) -> Sample:
    """Left-skewed stand-in for pitch-speed data.

    Negated lognormal draws with log-scale sd ``log_sd``, standardized and then
    scaled to exactly ``mean`` and ``sd`` (sample sd, divisor n - 1).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    x = -np.exp(log_sd * rng.standard_normal(n))
    x = (x - x.mean()) / x.std(ddof=1)
    return make_sample(mean + sd * x, label="synthetic-left-skewed")
