"""Turn a price or index series into increment curves on [0, 1].

The series is cut into ``segments`` consecutive windows of
``points_per_segment`` steps. Neighbouring windows share their boundary
observation. Each window is linearly interpolated, mapped onto [0, 1] and
shifted to start at zero, optionally after taking logs (log-returns).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigError, GridMismatchError, IngestError
from .hilbert import FunctionSample, Grid, PairedSample
from .validation import check_positive_int

MODES = ("log_returns", "increments")
# default output grid refines each sampling step this many times
GRID_REFINEMENT = 10


@dataclass(frozen=True, eq=False)
class TimeSeries:
    timestamps: tuple
    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        timestamps = tuple(self.timestamps)
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(timestamps) != values.shape[0]:
            raise IngestError(
                f"{len(timestamps)} timestamps but {values.shape[0] if values.ndim else 0} values"
            )
        if not np.all(np.isfinite(values)):
            raise IngestError("series values must be finite")
        for k, (a, b) in enumerate(zip(timestamps, timestamps[1:]), start=1):
            if not a < b:
                raise IngestError(f"timestamps not strictly increasing at position {k}: {a} >= {b}")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.timestamps)


def _month_index(d: date) -> int:
    return d.year * 12 + d.month - 1


def check_regular(series: TimeSeries):
    """Reject series with gaps: spacing must be constant in days or in calendar months."""
    ts = series.timestamps
    if len(ts) < 3:
        return
    day_steps = {(b - a).days for a, b in zip(ts, ts[1:])}
    if len(day_steps) == 1:
        return
    month_steps = {_month_index(b) - _month_index(a) for a, b in zip(ts, ts[1:])}
    same_day = len({d.day for d in ts}) == 1
    if len(month_steps) == 1 and same_day:
        return
    for k, (a, b) in enumerate(zip(ts, ts[1:]), start=1):
        if (b - a).days != (ts[1] - ts[0]).days and \
                _month_index(b) - _month_index(a) != _month_index(ts[1]) - _month_index(ts[0]):
            raise IngestError(f"irregular or missing timestamp between {a} and {b} (position {k})")
    raise IngestError("timestamps are not evenly spaced in days or calendar months")


def read_series_csv(path, name: str | None = None) -> TimeSeries:
    """Read a ``date,value`` CSV with ISO-8601 dates."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc.strerror or exc}") from None
    return parse_series_csv(text, name if name is not None else path.stem, source=str(path))


def parse_series_csv(text: str, name: str = "", source: str = "<string>") -> TimeSeries:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError(f"{source}: empty file") from None
    if [h.strip().lower() for h in header] != ["date", "value"]:
        raise IngestError(f"{source}: header must be 'date,value', got {','.join(header)!r}")
    timestamps, values = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise IngestError(f"{source}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            timestamps.append(date.fromisoformat(row[0].strip()))
            values.append(float(row[1]))
        except ValueError as exc:
            raise IngestError(f"{source}:{lineno}: {exc}") from None
    if not timestamps:
        raise IngestError(f"{source}: no observations")
    try:
        return TimeSeries(tuple(timestamps), np.array(values), name)
    except IngestError as exc:
        raise IngestError(f"{source}: {exc}") from None


@dataclass(frozen=True)
class SegmentationConfig:
    segments: int
    points_per_segment: int
    mode: str = "log_returns"
    grid_points: int | None = None

    def __post_init__(self):
        check_positive_int(self.segments, "segments")
        check_positive_int(self.points_per_segment, "points_per_segment")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.grid_points is not None:
            check_positive_int(self.grid_points, "grid_points", minimum=2)

    @property
    def required_length(self) -> int:
        return self.segments * self.points_per_segment + 1

    @property
    def grid(self) -> Grid:
        if self.grid_points is None:
            return Grid(GRID_REFINEMENT * self.points_per_segment + 1)
        return Grid(self.grid_points)


def _levels(values: np.ndarray, mode: str) -> np.ndarray:
    if mode == "log_returns":
        bad = np.flatnonzero(values <= 0)
        if bad.size:
            raise IngestError(
                f"log_returns mode needs positive values; value {values[bad[0]]!r} at position {bad[0]}"
            )
        return np.log(values)
    return np.asarray(values, dtype=float)


def segment_windows(series: TimeSeries, config: SegmentationConfig) -> list:
    """``(first, last)`` timestamp of every window."""
    m = config.points_per_segment
    _check_length(len(series), config)
    return [(series.timestamps[j * m], series.timestamps[(j + 1) * m])
            for j in range(config.segments)]


def _check_length(length, config):
    if length < config.required_length:
        raise IngestError(
            f"series has {length} observations; {config.segments} segments of "
            f"{config.points_per_segment} steps need {config.required_length}"
        )


def curve_array(values, config: SegmentationConfig) -> np.ndarray:
    """Increment curves of a raw value vector, shape ``(segments, grid_points)``."""
    values = np.asarray(values, dtype=float)
    _check_length(values.shape[0], config)
    m = config.points_per_segment
    levels = _levels(values[:config.required_length], config.mode)
    knots = np.linspace(0.0, 1.0, m + 1)
    t = config.grid.points
    out = np.empty((config.segments, t.size))
    for j in range(config.segments):
        window = levels[j * m:(j + 1) * m + 1]
        out[j] = np.interp(t, knots, window - window[0])
    return out


def to_curves(series: TimeSeries, config: SegmentationConfig) -> list:
    """Log-return (or increment) curves of every window, each starting at 0."""
    check_regular(series)
    grid = config.grid
    return [FunctionSample(grid, row) for row in curve_array(series.values, config)]


def pair_curves(curves_1, curves_2) -> PairedSample:
    """Zip the ``j``-th curve of each list into pair ``j``."""
    curves_1, curves_2 = list(curves_1), list(curves_2)
    if len(curves_1) != len(curves_2):
        raise GridMismatchError(f"curve counts differ: {len(curves_1)} vs {len(curves_2)}")
    return PairedSample.from_pairs(list(zip(curves_1, curves_2)))


def pair_series(series_1: TimeSeries, series_2: TimeSeries, config: SegmentationConfig) -> PairedSample:
    """Ingest two series and pair them window by window.

    The ``j``-th windows of both series must cover identical timestamps.
    """
    w1 = segment_windows(series_1, config)
    w2 = segment_windows(series_2, config)
    m = config.points_per_segment
    span_1 = series_1.timestamps[:config.required_length]
    span_2 = series_2.timestamps[:config.required_length]
    if span_1 != span_2:
        k = next(i for i, (a, b) in enumerate(zip(span_1, span_2)) if a != b)
        raise IngestError(
            f"calendar mismatch in window {k // m + 1}: {span_1[k]} vs {span_2[k]}"
        )
    assert w1 == w2
    return pair_curves(to_curves(series_1, config), to_curves(series_2, config))


def write_curves_csv(curves, file):
    """Write ``segment,t,value`` rows (segments numbered from 1)."""
    writer = csv.writer(file, lineterminator="\n")
    writer.writerow(["segment", "t", "value"])
    for j, curve in enumerate(curves, start=1):
        for t, v in zip(curve.grid.points, curve.values):
            writer.writerow([j, repr(float(t)), repr(float(v))])


class IncrementCurves(TransformerMixin, BaseEstimator):
    """Transformer from a raw value vector to a matrix of increment curves.

    Stateless; ``fit`` only validates parameters. ``transform`` takes a 1-D
    array of observations and returns ``(segments, grid_points)`` rows.
    """

    def __init__(self, segments=20, points_per_segment=12, mode="log_returns", grid_points=None):
        self.segments = segments
        self.points_per_segment = points_per_segment
        self.mode = mode
        self.grid_points = grid_points

    def _config(self):
        return SegmentationConfig(self.segments, self.points_per_segment, self.mode,
                                  self.grid_points)

    def fit(self, X=None, y=None):
        self._config()
        return self

    def transform(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 2 and 1 in X.shape:
            X = X.ravel()
        if X.ndim != 1:
            raise IngestError(f"expected a 1-D series, got shape {X.shape}")
        return curve_array(X, self._config())

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        return tags
