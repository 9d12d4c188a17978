"""Monte Carlo harness: reproducible replicated growth and CLT diagnostics.

Replicate r always draws from the stream derived purely from (seed, r),
so reports are bit-identical across runs, worker counts, and kernel
engines. Aggregation keeps exact integer power sums of the collected
statistics; every division happens once, at report time.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, sqrt

import numpy as np
from scipy import stats as sstats

from . import _kernel
from .moments import cov_limit
from .oracle import BudgetExceeded
from .rng import stream_state

# raw bivariate (y0, y1) moments needed for the Mardia statistics
_Y_MOMENT_ORDERS = [(a, b) for a in range(5) for b in range(5) if 3 <= a + b <= 4]


@dataclass(frozen=True)
class SimConfig:
    """One reproducible simulation run."""

    m: int
    n: int
    replicates: int
    seed: int
    degree_nodes: tuple[int, ...] = ()
    track_colors: bool = True
    workers: int = 1
    max_total_draws: int | None = None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"circuit index m must be >= 1, got {self.m}")
        if self.n < 1:
            raise ValueError(f"time n must be >= 1, got {self.n}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        for j in self.degree_nodes:
            if not 0 <= j <= self.n:
                raise ValueError(f"degree node {j} not in circuit of age {self.n}")
        if not self.track_colors and not self.degree_nodes:
            raise ValueError("empty statistic set: enable colors or list degree nodes")

    @property
    def stat_names(self) -> tuple[str, ...]:
        names: list[str] = []
        if self.track_colors:
            names += ["y0", "y1"]
        names += [f"deg{j}" for j in self.degree_nodes]
        return tuple(names)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "replicates": self.replicates,
            "seed": self.seed,
            "degree_nodes": list(self.degree_nodes),
            "track_colors": self.track_colors,
            "workers": self.workers,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SimConfig":
        return cls(
            m=d["m"],
            n=d["n"],
            replicates=d["replicates"],
            seed=d["seed"],
            degree_nodes=tuple(d.get("degree_nodes", ())),
            track_colors=d.get("track_colors", True),
            workers=d.get("workers", 1),
        )


@dataclass(frozen=True)
class Aggregates:
    """Exact integer sufficient statistics of one batch of replicates.

    ``merge`` is associative and commutative, so partitioned aggregation
    equals single-pass aggregation exactly, whatever the partition.
    """

    count: int
    sums: tuple[int, ...]
    gram: tuple[tuple[int, ...], ...]
    pow3: tuple[int, ...]
    pow4: tuple[int, ...]
    y_mixed: dict[tuple[int, int], int] | None
    max_step_dy0: int
    max_step_db: int

    def merge(self, other: "Aggregates") -> "Aggregates":
        if len(self.sums) != len(other.sums):
            raise ValueError("cannot merge aggregates over different statistic sets")
        k = len(self.sums)
        mixed = None
        if self.y_mixed is not None and other.y_mixed is not None:
            mixed = {key: self.y_mixed[key] + other.y_mixed[key] for key in self.y_mixed}
        return Aggregates(
            count=self.count + other.count,
            sums=tuple(a + b for a, b in zip(self.sums, other.sums)),
            gram=tuple(
                tuple(self.gram[i][j] + other.gram[i][j] for j in range(k)) for i in range(k)
            ),
            pow3=tuple(a + b for a, b in zip(self.pow3, other.pow3)),
            pow4=tuple(a + b for a, b in zip(self.pow4, other.pow4)),
            y_mixed=mixed,
            max_step_dy0=max(self.max_step_dy0, other.max_step_dy0),
            max_step_db=max(self.max_step_db, other.max_step_db),
        )

    def to_json_dict(self) -> dict:
        return {
            "count": self.count,
            "sums": list(self.sums),
            "gram": [list(row) for row in self.gram],
            "pow3": list(self.pow3),
            "pow4": list(self.pow4),
            "y_mixed": None
            if self.y_mixed is None
            else {f"{a},{b}": v for (a, b), v in sorted(self.y_mixed.items())},
            "max_step_dy0": self.max_step_dy0,
            "max_step_db": self.max_step_db,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Aggregates":
        mixed = d.get("y_mixed")
        if mixed is not None:
            mixed = {
                tuple(int(x) for x in key.split(",")): value for key, value in mixed.items()
            }
        return cls(
            count=d["count"],
            sums=tuple(d["sums"]),
            gram=tuple(tuple(row) for row in d["gram"]),
            pow3=tuple(d["pow3"]),
            pow4=tuple(d["pow4"]),
            y_mixed=mixed,
            max_step_dy0=d["max_step_dy0"],
            max_step_db=d["max_step_db"],
        )


def aggregate_values(values: np.ndarray, steps: np.ndarray | None, track_colors: bool) -> Aggregates:
    """Exact integer aggregation of per-replicate statistic rows."""
    count, k = values.shape
    cols = [[int(x) for x in values[:, i]] for i in range(k)]
    sums = tuple(sum(col) for col in cols)
    gram = tuple(
        tuple(sum(a * b for a, b in zip(cols[i], cols[j])) for j in range(k)) for i in range(k)
    )
    pow3 = tuple(sum(x**3 for x in col) for col in cols)
    pow4 = tuple(sum(x**4 for x in col) for col in cols)
    mixed = None
    if track_colors:
        y0, y1 = cols[0], cols[1]
        mixed = {
            (a, b): sum(u**a * v**b for u, v in zip(y0, y1)) for a, b in _Y_MOMENT_ORDERS
        }
    if steps is None:
        max_dy0 = max_db = 0
    else:
        max_dy0 = int(steps[:, 0].max(initial=0))
        max_db = int(steps[:, 1].max(initial=0))
    return Aggregates(
        count=count,
        sums=sums,
        gram=gram,
        pow3=pow3,
        pow4=pow4,
        y_mixed=mixed,
        max_step_dy0=max_dy0,
        max_step_db=max_db,
    )


@dataclass(frozen=True)
class SimReport:
    """Aggregated outcome of a run, bit-identical for identical (config, seed).

    Floating summaries (means, covariance, standardized moments) are
    derived deterministically from the exact integer aggregates.
    ``values`` is only populated when the caller asked to keep the
    per-replicate rows; it never enters the JSON form.
    """

    config: SimConfig
    stat_names: tuple[str, ...]
    aggregates: Aggregates
    mean: tuple[float, ...]
    cov: tuple[tuple[float, ...], ...]
    stderr: tuple[float, ...]
    skewness: tuple[float | None, ...]
    excess_kurtosis: tuple[float | None, ...]
    mardia_skewness: float | None
    mardia_kurtosis: float | None
    values: np.ndarray | None = field(default=None, compare=False, repr=False)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "stat_names": list(self.stat_names),
            "aggregates": self.aggregates.to_json_dict(),
            "mean": list(self.mean),
            "cov": [list(row) for row in self.cov],
            "stderr": list(self.stderr),
            "skewness": list(self.skewness),
            "excess_kurtosis": list(self.excess_kurtosis),
            "mardia_skewness": self.mardia_skewness,
            "mardia_kurtosis": self.mardia_kurtosis,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, d: dict) -> "SimReport":
        return cls(
            config=SimConfig.from_json_dict(d["config"]),
            stat_names=tuple(d["stat_names"]),
            aggregates=Aggregates.from_json_dict(d["aggregates"]),
            mean=tuple(d["mean"]),
            cov=tuple(tuple(row) for row in d["cov"]),
            stderr=tuple(d["stderr"]),
            skewness=tuple(d["skewness"]),
            excess_kurtosis=tuple(d["excess_kurtosis"]),
            mardia_skewness=d["mardia_skewness"],
            mardia_kurtosis=d["mardia_kurtosis"],
        )


def build_report(config: SimConfig, agg: Aggregates, values: np.ndarray | None = None) -> SimReport:
    """Derive the float summaries of a report from its exact aggregates."""
    k = len(agg.sums)
    r = agg.count
    mean_exact = [Fraction(s, r) for s in agg.sums]
    if r > 1:
        cov_exact = [
            [
                Fraction(r * agg.gram[i][j] - agg.sums[i] * agg.sums[j], r * (r - 1))
                for j in range(k)
            ]
            for i in range(k)
        ]
    else:
        cov_exact = [[Fraction(0)] * k for _ in range(k)]

    skew: list[float | None] = []
    kurt: list[float | None] = []
    for i in range(k):
        mu = mean_exact[i]
        m2 = Fraction(agg.gram[i][i], r) - mu * mu
        if m2 == 0:
            skew.append(None)
            kurt.append(None)
            continue
        m3 = Fraction(agg.pow3[i], r) - 3 * mu * Fraction(agg.gram[i][i], r) + 2 * mu**3
        m4 = (
            Fraction(agg.pow4[i], r)
            - 4 * mu * Fraction(agg.pow3[i], r)
            + 6 * mu * mu * Fraction(agg.gram[i][i], r)
            - 3 * mu**4
        )
        skew.append(float(m3) / float(m2) ** 1.5)
        kurt.append(float(m4) / float(m2) ** 2 - 3.0)

    b1 = b2 = None
    if agg.y_mixed is not None and r > 1:
        b = _mardia_statistics(agg)
        if b is not None:
            b1, b2 = b

    return SimReport(
        config=config,
        stat_names=config.stat_names,
        aggregates=agg,
        mean=tuple(float(x) for x in mean_exact),
        cov=tuple(tuple(float(x) for x in row) for row in cov_exact),
        stderr=tuple(sqrt(float(cov_exact[i][i]) / r) for i in range(k)),
        skewness=tuple(skew),
        excess_kurtosis=tuple(kurt),
        mardia_skewness=b1,
        mardia_kurtosis=b2,
        values=values,
    )


def _central_y_moments(agg: Aggregates) -> dict[tuple[int, int], float]:
    """Exact central bivariate moments of (y0, y1) up to total order 4, as floats."""
    r = agg.count

    def raw(a: int, b: int) -> Fraction:
        if a + b == 0:
            return Fraction(1)
        if (a, b) == (1, 0):
            return Fraction(agg.sums[0], r)
        if (a, b) == (0, 1):
            return Fraction(agg.sums[1], r)
        if (a, b) == (2, 0):
            return Fraction(agg.gram[0][0], r)
        if (a, b) == (1, 1):
            return Fraction(agg.gram[0][1], r)
        if (a, b) == (0, 2):
            return Fraction(agg.gram[1][1], r)
        if (a, b) == (3, 0):
            return Fraction(agg.pow3[0], r)
        if (a, b) == (0, 3):
            return Fraction(agg.pow3[1], r)
        if (a, b) == (4, 0):
            return Fraction(agg.pow4[0], r)
        if (a, b) == (0, 4):
            return Fraction(agg.pow4[1], r)
        return Fraction(agg.y_mixed[(a, b)], r)

    mx = raw(1, 0)
    my = raw(0, 1)
    central: dict[tuple[int, int], float] = {}
    for a in range(5):
        for b in range(5):
            if not 2 <= a + b <= 4:
                continue
            acc = Fraction(0)
            for i in range(a + 1):
                for jj in range(b + 1):
                    acc += (
                        comb(a, i)
                        * comb(b, jj)
                        * (-mx) ** (a - i)
                        * (-my) ** (b - jj)
                        * raw(i, jj)
                    )
            central[(a, b)] = float(acc)
    return central


def _mardia_statistics(agg: Aggregates) -> tuple[float, float] | None:
    """Mardia's multivariate skewness b1 and kurtosis b2 of (y0, y1).

    Computed from the exact moment sums: with z the data standardized by
    the inverse square root of the (MLE) covariance, b1 is the mean of
    (z_i . z_j)^3 over all pairs and b2 the mean of |z_i|^4, both of
    which expand into the standardized central moments up to order 4.
    """
    mu = _central_y_moments(agg)
    a, b, c = mu[(2, 0)], mu[(1, 1)], mu[(0, 2)]
    det = a * c - b * b
    if det <= 0:
        return None
    # closed-form inverse square root of the 2x2 SPD covariance
    s = sqrt(det)
    t = sqrt(a + c + 2 * s)
    l11, l12, l22 = (c + s) / (s * t), -b / (s * t), (a + s) / (s * t)

    def zmom(p: int, q: int) -> float:
        # E[z1^p z2^q] with z1 = l11 x + l12 y, z2 = l12 x + l22 y (centered x, y)
        acc = 0.0
        for i in range(p + 1):
            for jj in range(q + 1):
                coeff = (
                    comb(p, i)
                    * comb(q, jj)
                    * l11**i
                    * l12 ** (p - i)
                    * l12**jj
                    * l22 ** (q - jj)
                )
                acc += coeff * mu[(i + jj, p - i + q - jj)]
        return acc

    b1 = sum(comb(3, kk) * zmom(kk, 3 - kk) ** 2 for kk in range(4))
    b2 = zmom(4, 0) + 2 * zmom(2, 2) + zmom(0, 4)
    return b1, b2


def run_sim(config: SimConfig, engine: str = "auto", keep_values: bool = False) -> SimReport:
    """Grow ``config.replicates`` independent circuits and aggregate their statistics.

    Deterministic given (config, seed): replicate r uses the stream
    derived from (seed, r), whatever the worker count or engine. Refuses
    up front (all-or-nothing) when the configured draw budget would be
    exceeded.
    """
    total_draws = config.replicates * config.n * config.m
    if config.max_total_draws is not None and total_draws > config.max_total_draws:
        raise BudgetExceeded(total_draws, config.max_total_draws, what="simulation")

    r = config.replicates
    n_stats = 2 + len(config.degree_nodes)
    states = np.empty(r, dtype=np.uint64)
    for i in range(r):
        states[i] = stream_state(config.seed, i)
    deg_nodes = np.asarray(config.degree_nodes, dtype=np.int64)
    vals = np.empty((r, n_stats), dtype=np.int64)
    steps = np.empty((r, 2), dtype=np.int64)

    workers = min(config.workers, r)
    use_threads = workers > 1 and _kernel.HAVE_NUMBA and engine in ("auto", "numba")
    if use_threads:
        bounds = [(i * r) // workers for i in range(workers + 1)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _kernel.grow_chunk,
                    config.m,
                    config.n,
                    states[lo:hi],
                    deg_nodes,
                    vals[lo:hi],
                    steps[lo:hi],
                    engine,
                )
                for lo, hi in zip(bounds, bounds[1:])
                if hi > lo
            ]
            for fut in futures:
                fut.result()
    else:
        _kernel.grow_chunk(config.m, config.n, states, deg_nodes, vals, steps, engine)

    if not config.track_colors:
        agg = aggregate_values(vals[:, 2:], steps, track_colors=False)
        kept = vals[:, 2:] if keep_values else None
    else:
        agg = aggregate_values(vals, steps, track_colors=True)
        kept = vals if keep_values else None
    return build_report(config, agg, values=kept)


@dataclass(frozen=True)
class CltCheck:
    """Comparison of a run against the bivariate Gaussian limit."""

    replicates: int
    n: int
    m: int
    scaled_cov: tuple[tuple[float, float], tuple[float, float]]
    target_cov: tuple[tuple[float, float], tuple[float, float]]
    cov_rel_err: float
    mardia_skewness: float | None
    mardia_skew_stat: float | None
    mardia_skew_p: float | None
    mardia_kurtosis: float | None
    mardia_kurt_z: float | None
    mardia_kurt_p: float | None
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "replicates": self.replicates,
            "n": self.n,
            "m": self.m,
            "scaled_cov": [list(row) for row in self.scaled_cov],
            "target_cov": [list(row) for row in self.target_cov],
            "cov_rel_err": self.cov_rel_err,
            "mardia_skewness": self.mardia_skewness,
            "mardia_skew_stat": self.mardia_skew_stat,
            "mardia_skew_p": self.mardia_skew_p,
            "mardia_kurtosis": self.mardia_kurtosis,
            "mardia_kurt_z": self.mardia_kurt_z,
            "mardia_kurt_p": self.mardia_kurt_p,
            "passed": self.passed,
        }


def clt_check(report: SimReport, cov_tol: float = 0.05, alpha: float = 0.01) -> CltCheck:
    """Check the n^{-1/2}-scaled (Y0, Y1) covariance and Gaussianity of a run.

    Passes when the sample covariance over n is entrywise within
    ``cov_tol`` relative of the limit matrix and both Mardia p-values are
    at least ``alpha``. Requires at least 1000 replicates and a report
    that tracked the color statistics.
    """
    if not report.config.track_colors:
        raise ValueError("report does not contain the (y0, y1) statistics")
    if report.aggregates.count < 1000:
        raise ValueError(
            f"need at least 1000 replicates for the distributional check, got {report.aggregates.count}"
        )
    m = report.config.m
    n = report.config.n
    target = cov_limit(m)
    tgt = (
        (float(target.var_y0), float(target.cov_y0_y1)),
        (float(target.cov_y0_y1), float(target.var_y1)),
    )
    scaled = tuple(tuple(report.cov[i][j] / n for j in range(2)) for i in range(2))
    rel_err = max(
        abs(scaled[i][j] - tgt[i][j]) / abs(tgt[i][j]) for i in range(2) for j in range(2)
    )

    b1 = report.mardia_skewness
    b2 = report.mardia_kurtosis
    r = report.aggregates.count
    if b1 is None or b2 is None:
        skew_stat = skew_p = kurt_z = kurt_p = None
        normal_ok = False
    else:
        # d = 2 coordinates: skewness ~ chi2 with d(d+1)(d+2)/6 = 4 dof,
        # kurtosis centered at d(d+2) = 8 with variance 8 d (d+2) / r
        skew_stat = r * b1 / 6.0
        skew_p = float(sstats.chi2.sf(skew_stat, 4))
        kurt_z = (b2 - 8.0) / sqrt(64.0 / r)
        kurt_p = float(2.0 * sstats.norm.sf(abs(kurt_z)))
        normal_ok = skew_p >= alpha and kurt_p >= alpha

    return CltCheck(
        replicates=r,
        n=n,
        m=m,
        scaled_cov=scaled,
        target_cov=tgt,
        cov_rel_err=rel_err,
        mardia_skewness=b1,
        mardia_skew_stat=skew_stat,
        mardia_skew_p=skew_p,
        mardia_kurtosis=b2,
        mardia_kurt_z=kurt_z,
        mardia_kurt_p=kurt_p,
        passed=rel_err <= cov_tol and normal_ok,
    )


def report_for_values(config: SimConfig, values: np.ndarray) -> SimReport:
    """Report built from externally supplied statistic rows (calibration aid)."""
    agg = aggregate_values(values, None, track_colors=config.track_colors)
    return build_report(config, agg, values=values)
