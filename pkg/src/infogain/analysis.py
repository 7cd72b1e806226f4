"""Sweeps over priors and sample sizes built on the closed-form gains.

Covers the fraction of negative differential gains (FoN) and its large-N
limit, the critical prior below which no negative gain occurs, spread of a
gain across all head counts, single-run trajectories and the Malus-law
consistency check.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import List

import numpy as np

from .errors import BracketError, DomainError
from .gains import (
    diff_gain,
    diff_gain_values,
    expected_gain,
    expected_gain_values,
    gain_report,
    rel_gain,
    rel_gain_values,
)
from .model import BetaPrior, Outcome, TossSummary

TABLE1_ALPHAS = (-0.7, -0.6, -0.5, -0.4, 0.0, 1.0, 3.0)


class Measure(enum.Enum):
    DIFF = "diff"
    REL = "rel"
    EXPECTED = "expected"


@dataclass(frozen=True)
class AlphaGrid:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.start, self.stop, self.step)):
            raise DomainError("alpha grid bounds must be finite")
        if self.start <= -1.0:
            raise DomainError(f"alpha-start must be > -1, got {self.start}")
        if self.stop < self.start:
            raise DomainError("alpha-stop must be >= alpha-start")
        if self.step <= 0.0:
            raise DomainError("alpha-step must be > 0")
        if (self.stop - self.start) / self.step > 1e6:
            raise DomainError("alpha grid has more than 1e6 steps")

    def values(self):
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        # rounding keeps grid points such as -0.5 exact in printed output
        return [round(self.start + k * self.step, 12) for k in range(count)]


@dataclass(frozen=True)
class FoNRow:
    alpha: float
    n: int
    negatives: int
    fon: float
    fon_asymptotic: float


@dataclass(frozen=True)
class RobustnessRow:
    alpha: float
    n: int
    mean_gain: float
    std_gain: float
    measure: Measure


@dataclass(frozen=True)
class TrajectoryRow:
    """Gains of toss ``step`` given the ``step - 1`` tosses before it.

    ``h_so_far`` counts heads including this toss; ``i_expected_next`` is the
    expected gain of this toss as forecast before it was made.
    """

    step: int
    outcome: Outcome
    h_so_far: int
    i_diff: float
    i_rel: float
    i_expected_next: float


def as_record(row):
    """Plain dict of a row with enums replaced by their string values."""
    return {k: (v.value if isinstance(v, enum.Enum) else v) for k, v in asdict(row).items()}


def _map(func, items, workers):
    if workers is None or workers <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def fon_asymptotic(prior: BetaPrior) -> float:
    """Large-N fraction of negative differential gains, (2a+1)/(4a+3) clamped to [0, 1].

    Zero for alpha <= -1/2, which also keeps the pole at alpha = -3/4 out of reach.
    """
    a = prior.alpha
    if a <= -0.5:
        return 0.0
    return min(1.0, max(0.0, (2.0 * a + 1.0) / (4.0 * a + 3.0)))


def count_negatives(alpha, n, outcome=Outcome.HEAD):
    values = diff_gain_values(alpha, n, np.arange(n + 1), outcome)
    return int(np.count_nonzero(values < 0.0))


def fon(prior: BetaPrior, n: int, outcome: Outcome = Outcome.HEAD) -> FoNRow:
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    negatives = count_negatives(prior.alpha, n, outcome)
    return FoNRow(prior.alpha, n, negatives, negatives / (n + 1), fon_asymptotic(prior))


def fon_sweep(grid: AlphaGrid, ns, outcome=Outcome.HEAD, workers=None) -> List[FoNRow]:
    points = [(a, n) for a in grid.values() for n in sorted(ns)]
    return _map(lambda an: fon(BetaPrior(an[0]), an[1], outcome), points, workers)


def critical_alpha(n: int, search: AlphaGrid, refine_tol: float = 1e-3, outcome=Outcome.HEAD) -> float:
    """Largest alpha with no negative differential gain at sample size ``n``.

    The grid is scanned for the first point with FoN > 0; the boundary is then
    bisected between it and the preceding zero-FoN point. Ties go to the zero
    side.
    """
    if refine_tol <= 0.0:
        raise DomainError("refine_tol must be > 0")
    alphas = search.values()
    if count_negatives(alphas[0], n, outcome) != 0:
        raise BracketError(f"FoN is already positive at alpha-start={search.start} for n={n}")
    lo = alphas[0]
    hi = None
    for a in alphas[1:]:
        if count_negatives(a, n, outcome) > 0:
            hi = a
            break
        lo = a
    if hi is None:
        raise BracketError(f"FoN stays zero up to alpha-stop={search.stop} for n={n}")
    while hi - lo > refine_tol:
        mid = 0.5 * (lo + hi)
        if count_negatives(mid, n, outcome) == 0:
            lo = mid
        else:
            hi = mid
    return lo


def measure_values(alpha, n, measure: Measure, outcome=Outcome.HEAD):
    """The chosen gain at every head count h = 0..n."""
    h = np.arange(n + 1)
    if measure is Measure.DIFF:
        return diff_gain_values(alpha, n, h, outcome)
    if measure is Measure.REL:
        return rel_gain_values(alpha, n, h, outcome)
    return expected_gain_values(alpha, n, h)


def robustness(prior: BetaPrior, n: int, measure: Measure, outcome: Outcome = Outcome.HEAD) -> RobustnessRow:
    """Mean and population standard deviation of a gain over all h in 0..n."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    values = measure_values(prior.alpha, n, measure, outcome)
    return RobustnessRow(prior.alpha, n, float(np.mean(values)), float(np.std(values)), measure)


def robustness_sweep(grid: AlphaGrid, ns, measure: Measure, outcome=Outcome.HEAD, workers=None):
    points = [(a, n) for a in grid.values() for n in sorted(ns)]
    return _map(lambda an: robustness(BetaPrior(an[0]), an[1], measure, outcome), points, workers)


def black_swan_report(prior: BetaPrior, n: int):
    """Gains of a head that follows ``n`` straight tails."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return gain_report(prior, TossSummary(n, 0), Outcome.HEAD)


def trajectory(prior: BetaPrior, true_p: float, steps: int, seed: int) -> List[TrajectoryRow]:
    """Simulate ``steps`` Bernoulli(true_p) tosses and report the gain of each.

    Draws come from numpy's PCG64 generator seeded with ``seed``; a toss is a
    head when the next double from ``Generator.random`` is below ``true_p``.
    PCG64 output is specified bit-for-bit, so runs are reproducible across
    platforms.
    """
    if not 0.0 < true_p < 1.0:
        raise DomainError(f"true_p must lie in (0, 1), got {true_p}")
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    rng = np.random.Generator(np.random.PCG64(seed))
    data = TossSummary(0, 0)
    rows = []
    for step in range(1, steps + 1):
        outcome = Outcome.HEAD if rng.random() < true_p else Outcome.TAIL
        forecast = expected_gain(prior, data)
        i_diff = diff_gain(prior, data, outcome)
        i_rel = rel_gain(prior, data, outcome)
        data = data.after(outcome)
        rows.append(TrajectoryRow(step, outcome, data.h, i_diff, i_rel, forecast))
    return rows


def malus_grid(grid_size: int):
    """Malus-law quantities on ``grid_size`` interior points of (0, pi).

    With p(theta) = cos^2(theta / 2) returns a dict of arrays: theta, p,
    ``scaled_spread`` = |d theta / d p| sqrt(p (1 - p)) (sqrt(N) times the
    large-N uncertainty of theta), ``transformed_density`` = density of p
    induced by a uniform theta, and ``jeffreys_density`` = 1 / (pi sqrt(p (1 - p))).
    """
    if grid_size < 3:
        raise DomainError(f"grid size must be >= 3, got {grid_size}")
    theta = np.linspace(0.0, math.pi, grid_size + 2)[1:-1]
    p = np.cos(theta / 2.0) ** 2
    dp_dtheta = -np.cos(theta / 2.0) * np.sin(theta / 2.0)
    dtheta_dp = 1.0 / np.abs(dp_dtheta)
    spread = np.sqrt(p * (1.0 - p))
    return {
        "theta": theta,
        "p": p,
        "scaled_spread": dtheta_dp * spread,
        "transformed_density": dtheta_dp / math.pi,
        "jeffreys_density": 1.0 / (math.pi * spread),
    }


def malus_mapping_check(theta_grid_size: int) -> float:
    """Largest deviation of the two Malus-law identities on the grid.

    Checks that sqrt(N) * delta-theta is the constant 1 and that a uniform
    theta maps to the Jeffreys density of p; returns the worse of the two
    maximum absolute deviations.
    """
    g = malus_grid(theta_grid_size)
    spread_dev = float(np.max(np.abs(g["scaled_spread"] - 1.0)))
    density_dev = float(np.max(np.abs(g["transformed_density"] - g["jeffreys_density"])))
    return max(spread_dev, density_dev)


@dataclass(frozen=True)
class Table1Row:
    alpha: float
    fon_numeric: float
    fon_asymptotic: float
    discrepancy: float


def table1(n: int = 1000, alphas=TABLE1_ALPHAS) -> List[Table1Row]:
    """FoN at sample size ``n`` next to its large-N limit for each alpha."""
    rows = []
    for a in alphas:
        row = fon(BetaPrior(a), n)
        rows.append(Table1Row(a, row.fon, row.fon_asymptotic, abs(row.fon - row.fon_asymptotic)))
    return rows
