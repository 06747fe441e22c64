"""Size and power studies on correlated Brownian bridges.

Each scenario draws ``n`` i.i.d. pairs

    X_{j,i}(t) = a_i * B_{j,i}(t) + b_i * t * (1 - t),

where ``(B_{j,1}, B_{j,2})`` are standard Brownian bridges with cross
covariance ``r * (min(s, t) - s t)``, and records how often each resampling
test rejects.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from .exceptions import ConfigError, DomainError
from .hilbert import FunctionSample, Grid, PairedSample
from .resampling import ResamplingConfig, run_test
from .validation import check_alpha, check_positive_int

DATA_STREAM = 3
TEST_SEED_STREAM = 4
SCENARIO_SEED_STREAM = 5

DEFAULT_GRID_POINTS = 101
DESK_RESAMPLING = ResamplingConfig(replicates=199, direction_count=200)
REPORT_COLUMNS = ("scenario_id", "method", "alpha", "rate", "stderr", "runs")


def _derived_seed(master: int, *key: int) -> int:
    seq = np.random.SeedSequence(master, spawn_key=tuple(key))
    return int(seq.generate_state(1, np.uint64)[0])


def _check_r(r):
    if not isinstance(r, (int, float, np.floating)) or not 0.0 <= r <= 1.0:
        raise DomainError(f"dependency r must lie in [0, 1], got {r!r}")
    return float(r)


@dataclass(frozen=True)
class ScenarioConfig:
    a1: float = 1.0
    a2: float = 1.0
    b1: float = 0.0
    b2: float = 0.0
    r: float = 0.0
    n: int = 20
    grid_points: int = DEFAULT_GRID_POINTS
    alphas: tuple = (0.05,)
    runs: int = 500
    resampling: ResamplingConfig = field(default_factory=lambda: DESK_RESAMPLING)

    def __post_init__(self):
        for name in ("a1", "a2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value == 0:
                raise ConfigError(f"scale {name} must be a nonzero real, got {value!r}")
        for name in ("b1", "b2"):
            if not np.isfinite(getattr(self, name)):
                raise ConfigError(f"drift {name} must be finite")
        try:
            _check_r(self.r)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None
        check_positive_int(self.n, "n", minimum=2)
        check_positive_int(self.grid_points, "grid_points", minimum=2)
        check_positive_int(self.runs, "runs")
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas:
            raise ConfigError("at least one alpha level is required")
        for a in alphas:
            check_alpha(a)
        object.__setattr__(self, "alphas", alphas)
        if not isinstance(self.resampling, ResamplingConfig):
            raise ConfigError("resampling must be a ResamplingConfig")

    @property
    def is_null(self) -> bool:
        return self.a1 == self.a2 and self.b1 == self.b2

    def to_dict(self):
        return {
            "a1": self.a1, "a2": self.a2, "b1": self.b1, "b2": self.b2, "r": self.r,
            "n": self.n, "grid_points": self.grid_points, "alphas": list(self.alphas),
            "runs": self.runs, "resampling": self.resampling.to_dict(),
        }


def _bridges(rng, grid: Grid, size) -> np.ndarray:
    t = grid.points
    steps = rng.standard_normal(tuple(size) + (grid.point_count - 1,)) * math.sqrt(grid.step)
    w = np.zeros(tuple(size) + (grid.point_count,))
    np.cumsum(steps, axis=-1, out=w[..., 1:])
    bridge = w - t * w[..., -1:]
    return bridge


def _correlated_bridges(rng, grid: Grid, r: float, n: int) -> np.ndarray:
    both = _bridges(rng, grid, (n, 2))
    out = np.empty_like(both)
    out[:, 0] = both[:, 0]
    out[:, 1] = r * both[:, 0] + math.sqrt(1.0 - r * r) * both[:, 1]
    return out


def simulate_bridge_pair(r: float, grid: Grid, rng) -> tuple[FunctionSample, FunctionSample]:
    """Two standard Brownian bridges on ``grid`` with correlation parameter ``r``."""
    r = _check_r(r)
    pair = _correlated_bridges(rng, grid, r, 1)[0]
    return FunctionSample(grid, pair[0]), FunctionSample(grid, pair[1])


def generate_sample(config: ScenarioConfig, rng) -> PairedSample:
    grid = Grid(config.grid_points)
    t = grid.points
    bridges = _correlated_bridges(rng, grid, config.r, config.n)
    drift = t * (1.0 - t)
    values = np.empty_like(bridges)
    values[:, 0] = config.a1 * bridges[:, 0] + config.b1 * drift
    values[:, 1] = config.a2 * bridges[:, 1] + config.b2 * drift
    return PairedSample(grid, values)


def _run_pvalues(config: ScenarioConfig, master: int, runs) -> np.ndarray:
    out = np.empty((len(runs), 2))
    for row, run in enumerate(runs):
        sample = generate_sample(config, np.random.default_rng(
            np.random.SeedSequence(master, spawn_key=(DATA_STREAM, run))))
        test_config = replace(config.resampling, seed=_derived_seed(master, TEST_SEED_STREAM, run))
        result = run_test(sample, test_config)
        out[row] = result.p_perm, result.p_boot
    return out


def simulate_pvalues(config: ScenarioConfig, seed: int | None = None, n_jobs: int = 1) -> np.ndarray:
    """Permutation and bootstrap p-values of every run, shape ``(runs, 2)``.

    Run ``k`` draws its data and test seed from streams keyed by ``(seed, k)``,
    so the output does not depend on ``n_jobs``.
    """
    master = config.resampling.seed if seed is None else int(seed)
    n_jobs = max(1, int(n_jobs))
    if n_jobs == 1:
        return _run_pvalues(config, master, range(config.runs))
    bounds = np.linspace(0, config.runs, min(config.runs, 4 * n_jobs) + 1).astype(int)
    parts = Parallel(n_jobs=n_jobs)(
        delayed(_run_pvalues)(config, master, range(lo, hi))
        for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo)
    return np.concatenate(parts)


@dataclass(frozen=True)
class ReportRow:
    scenario_id: int
    method: str
    alpha: float
    rate: float
    stderr: float
    runs: int


@dataclass
class StudyReport:
    """Rejection rates per scenario, method and level."""

    rows: list = field(default_factory=list)
    scenarios: dict = field(default_factory=dict)

    def rate(self, scenario_id, method, alpha):
        for row in self.rows:
            if row.scenario_id == scenario_id and row.method == method \
                    and math.isclose(row.alpha, alpha):
                return row.rate
        raise KeyError((scenario_id, method, alpha))

    def extend(self, other: "StudyReport"):
        self.rows.extend(other.rows)
        self.scenarios.update(other.scenarios)

    def to_csv(self, header_comment: str | None = None) -> str:
        buf = io.StringIO()
        if header_comment is not None:
            buf.write(f"# {header_comment}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in self.rows:
            writer.writerow([row.scenario_id, row.method, repr(row.alpha),
                             f"{row.rate:.6f}", f"{row.stderr:.6f}", row.runs])
        return buf.getvalue()


def rejection_report(pvalues: np.ndarray, config: ScenarioConfig, scenario_id: int = 1) -> StudyReport:
    runs = pvalues.shape[0]
    report = StudyReport(scenarios={scenario_id: config.to_dict()})
    for alpha in config.alphas:
        for col, method in enumerate(("perm", "boot")):
            rate = float(np.mean(pvalues[:, col] <= alpha))
            stderr = math.sqrt(rate * (1.0 - rate) / runs)
            report.rows.append(ReportRow(scenario_id, method, alpha, rate, stderr, runs))
    return report


def empirical_rejection_rate(config: ScenarioConfig, seed: int | None = None, n_jobs: int = 1,
                             scenario_id: int = 1) -> StudyReport:
    """Rejection rates of both tests at every level in ``config.alphas``."""
    return rejection_report(simulate_pvalues(config, seed, n_jobs), config, scenario_id)


def run_study(scenarios, seed: int = 0, n_jobs: int = 1) -> StudyReport:
    """Run scenarios in order; scenario ``i`` (1-based) gets master seed ``f(seed, i)``."""
    report = StudyReport()
    for sid, config in enumerate(scenarios, start=1):
        master = _derived_seed(seed, SCENARIO_SEED_STREAM, sid)
        report.extend(empirical_rejection_rate(config, master, n_jobs, scenario_id=sid))
    return report


def parse_scenarios(text: str, base: ScenarioConfig = ScenarioConfig()) -> list:
    """Parse a batch table with one ``a1 a2 b1 b2 r n alpha runs`` scenario per line.

    Blank lines and ``#`` comments are skipped. Errors name the line number.
    """
    scenarios = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 8:
            raise ConfigError(f"line {lineno}: expected 8 fields (a1 a2 b1 b2 r n alpha runs), "
                              f"got {len(fields)}")
        try:
            a1, a2, b1, b2, r = (float(v) for v in fields[:5])
            n, runs = int(fields[5]), int(fields[7])
            alpha = float(fields[6])
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        try:
            scenarios.append(replace(base, a1=a1, a2=a2, b1=b1, b2=b2, r=r, n=n,
                                     alphas=(alpha,), runs=runs))
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    if not scenarios:
        raise ConfigError("scenario file contains no scenarios")
    return scenarios


def preset_scenarios(name: str, base: ScenarioConfig = ScenarioConfig()) -> list:
    """Scenario grids of the published size and power tables and the sample-size curve.

    ``table1``: null settings (equal scales, or equal drifts), ``table2``:
    alternatives, ``growth``: ``n`` from 20 to 70 for two alternatives.
    """
    dependence = (0.0, 0.25, 0.5)
    levels = (0.05, 0.10)
    out = []
    if name == "table1":
        for a in (1.0, 1.5, 2.0, 2.5):
            out += [replace(base, a1=a, a2=a, b1=0.0, b2=0.0, r=r, alphas=levels) for r in dependence]
        for b in (0.5, 1.0, 1.5, 2.0):
            out += [replace(base, a1=1.0, a2=1.0, b1=b, b2=b, r=r, alphas=levels) for r in dependence]
    elif name == "table2":
        for a in (1.5, 2.0, 2.5):
            out += [replace(base, a1=1.0, a2=a, b1=0.0, b2=0.0, r=r, alphas=levels) for r in dependence]
        for b in (0.5, 1.0, 1.5, 2.0):
            out += [replace(base, a1=1.0, a2=1.0, b1=0.0, b2=b, r=r, alphas=levels) for r in dependence]
    elif name == "growth":
        for n in range(20, 71, 10):
            out.append(replace(base, a1=1.0, a2=1.5, r=0.25, n=n, alphas=(0.05,)))
        for n in range(20, 71, 10):
            out.append(replace(base, a1=1.0, a2=1.0, b1=0.0, b2=1.0, r=0.25, n=n, alphas=(0.05,)))
    else:
        raise ConfigError(f"unknown preset {name!r}; choose table1, table2 or growth")
    return out
