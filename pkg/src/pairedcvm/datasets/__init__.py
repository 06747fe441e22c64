"""Synthetic monthly index series bundled for examples and tests.

``null_index_a.csv`` and ``null_index_b.csv`` are two dependent monthly
series (01/1999 to 01/2019, 241 observations) whose log-returns share one
law. ``constant.csv`` is flat at 100 and ``exponential.csv`` grows by a
factor ``e`` per month. All files are regenerated by :func:`write_fixtures`.
"""

from datetime import date
from importlib import resources
from pathlib import Path

import numpy as np

FIXTURES = ("null_index_a", "null_index_b", "constant", "exponential")


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURES)}")
    return Path(str(resources.files(__name__).joinpath(f"{name}.csv")))


def monthly_dates(count: int, start=date(1999, 1, 1)) -> list:
    out = []
    for k in range(count):
        month = start.month - 1 + k
        out.append(date(start.year + month // 12, month % 12 + 1, start.day))
    return out


def synthetic_null_pair(seed=20190101, count=241, drift=0.004, vol=0.045, corr=0.8):
    """Two correlated geometric random walks with identical monthly return laws."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((2, count - 1))
    z[1] = corr * z[0] + np.sqrt(1 - corr**2) * z[1]
    log_levels = np.concatenate([np.zeros((2, 1)), np.cumsum(drift + vol * z, axis=1)], axis=1)
    return 1000.0 * np.exp(log_levels[0]), 1000.0 * np.exp(log_levels[1])


def _write(path, dates, values):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("date,value\n")
        for d, v in zip(dates, values):
            fh.write(f"{d.isoformat()},{float(v)!r}\n")


def write_fixtures(directory=None):
    directory = Path(directory) if directory is not None else Path(__file__).parent
    dates = monthly_dates(241)
    a, b = synthetic_null_pair()
    _write(directory / "null_index_a.csv", dates, a)
    _write(directory / "null_index_b.csv", dates, b)
    _write(directory / "constant.csv", dates, np.full(241, 100.0))
    _write(directory / "exponential.csv", dates, np.exp(np.arange(241.0)))
