"""Exact degree-profile analytics: distribution, moments, and growth regimes.

The degree of a fixed node evolves through a chain of two-color urns with
identity replacement, one per later insertion, each "hiccup" between them
adding the new node's own external node to the opposite color. Everything
reduces to rising factorials, which keeps the whole section in exact
rational arithmetic; a log-gamma float path takes over for the very large
times where exact integers would be pointlessly expensive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .dist import DistTable

EXACT_MOMENT_THRESHOLD = 10_000


def rising(x: int | Fraction, s: int) -> Fraction:
    """Rising factorial x (x+1) ... (x+s-1), with the empty product equal to 1."""
    if s < 0:
        raise ValueError(f"length must be >= 0, got {s}")
    acc = Fraction(1)
    x = Fraction(x)
    for i in range(s):
        acc *= x + i
    return acc


def _rising_int(base: int, s: int) -> int:
    acc = 1
    for i in range(s):
        acc *= base + i
    return acc


def polya_eggenberger_pmf(white: int, blue: int, draws: int) -> DistTable:
    """Law of the number of blue picks in ``draws`` draws from an identity-replacement urn.

    Starting from ``white`` white and ``blue`` blue balls (at least one
    ball in total), each draw returns the ball plus one more of its
    color. Draw sequences are exchangeable, so the count is sufficient.
    """
    if white < 0 or blue < 0:
        raise ValueError("ball counts must be nonnegative")
    if white + blue == 0:
        raise ValueError("the urn must start nonempty")
    if draws < 0:
        raise ValueError(f"draws must be >= 0, got {draws}")
    denom = _rising_int(white + blue, draws)
    table = {
        k: Fraction(math.comb(draws, k) * _rising_int(white, draws - k) * _rising_int(blue, k), denom)
        for k in range(draws + 1)
    }
    return DistTable(table)


def degree_pmf(m: int, j: int, n: int) -> DistTable:
    """Exact law of the degree of node j in a circuit of index m at time n.

    Sums the joint law of per-insertion blue-pick counts (b_1, ..., b_{n-j})
    over all tuples with a fixed total. The summand depends on a prefix
    (b_1, ..., b_r) only through r and its sum, so a dynamic program over
    prefix sums replaces the exponential enumeration. The cap b_1 <= (m+1)j
    is automatic: a rising factorial with base 0 and positive length is 0.
    """
    _check_mjn(m, j, n)
    steps = n - j
    indeg = m if j > 0 else 0
    if steps == 0:
        return DistTable({indeg: Fraction(1)})

    binom = [math.comb(m, b) for b in range(m + 1)]
    weights: dict[int, int] = {0: 1}
    for r in range(1, steps + 1):
        new: dict[int, int] = {}
        for prefix, acc in weights.items():
            base = (m + 1) * j + prefix + r - 1
            for b in range(m + 1):
                term = binom[b] * _rising_int(base, b)
                if term:
                    new[prefix + b] = new.get(prefix + b, 0) + acc * term
        weights = new

    denom = 1
    for r in range(steps):
        denom *= _rising_int((m + 1) * (j + r) + 1, m)

    table = {
        m * steps - total + indeg: Fraction(math.factorial(m * steps - total) * acc, denom)
        for total, acc in weights.items()
    }
    return DistTable(table)


def port_root_pmf(n: int) -> DistTable:
    """Root-degree law of the m = 1 tree at time n, in its simplified product form.

    An independent cross-check for ``degree_pmf(1, 0, n)``.
    """
    if n < 0:
        raise ValueError(f"time n must be >= 0, got {n}")
    if n == 0:
        return DistTable({0: Fraction(1)})
    odd_double_factorial = math.factorial(2 * n) // (2**n * math.factorial(n))
    table = {
        d: Fraction(
            math.factorial(2 * n - d - 1) * d,
            math.factorial(n - d) * odd_double_factorial * 2 ** (n - d),
        )
        for d in range(1, n + 1)
    }
    return DistTable(table)


@dataclass(frozen=True)
class DegreeMomentReport:
    """Mean and variance of one node's degree; exact rationals below the size threshold."""

    m: int
    j: int
    n: int
    mean: Fraction | float
    variance: Fraction | float
    exact: bool

    @property
    def mean_decimal(self) -> str:
        return f"{float(self.mean):.12g}"

    @property
    def variance_decimal(self) -> str:
        return f"{float(self.variance):.12g}"

    def to_json_dict(self) -> dict:
        out: dict = {"m": self.m, "j": self.j, "n": self.n, "exact": self.exact}
        if self.exact:
            out["mean"] = f"{self.mean.numerator}/{self.mean.denominator}"
            out["variance"] = f"{self.variance.numerator}/{self.variance.denominator}"
        else:
            out["mean"] = float(self.mean)
            out["variance"] = float(self.variance)
        out["mean_decimal"] = self.mean_decimal
        out["variance_decimal"] = self.variance_decimal
        return out


def degree_moments(
    m: int, j: int, n: int, exact_threshold: int = EXACT_MOMENT_THRESHOLD
) -> DegreeMomentReport:
    """Exact mean and variance of the degree of node j at time n.

    The gamma ratios of the closed forms telescope to rising-factorial
    quotients of length n - j, evaluated exactly for n up to
    ``exact_threshold`` and through log-gamma floats beyond it.
    """
    _check_mjn(m, j, n)
    steps = n - j
    indeg = m if j > 0 else 0

    if n <= exact_threshold:
        ew = rising(j + 1, steps) / rising(Fraction(1, m + 1) + j, steps)
        eww1 = (
            Fraction(2 * ((m + 1) * n + 1), (m + 1) * j + 1)
            * rising(j + 1, steps)
            / rising(Fraction(2, m + 1) + j, steps)
        )
        variance = eww1 - ew - ew * ew
        return DegreeMomentReport(
            m=m, j=j, n=n, mean=ew - 1 + indeg, variance=variance, exact=True
        )

    inv = 1.0 / (m + 1)
    log_ratio = math.lgamma(n + 1) - math.lgamma(j + 1)
    ew = math.exp(log_ratio - math.lgamma(n + inv) + math.lgamma(j + inv))
    eww1 = (
        2.0
        * ((m + 1) * n + 1)
        / ((m + 1) * j + 1)
        * math.exp(log_ratio - math.lgamma(n + 2 * inv) + math.lgamma(j + 2 * inv))
    )
    variance = eww1 - ew - ew * ew
    return DegreeMomentReport(m=m, j=j, n=n, mean=ew - 1 + indeg, variance=variance, exact=False)


@dataclass(frozen=True)
class RegimeSpec:
    """How the watched node label j scales with the circuit age.

    ``fixed_j`` watches a constant label, ``slow_growth`` a label growing
    sublinearly (supply the sequence via ``j_of_n``), ``linear_theta`` a
    label with j / n -> theta in (0, 1].
    """

    kind: str
    j: int | None = None
    theta: float | None = None
    j_of_n: Callable[[int], int] | None = None

    def __post_init__(self):
        if self.kind == "fixed_j":
            if self.j is None or self.j < 0:
                raise ValueError("fixed_j regime needs a node label j >= 0")
        elif self.kind == "slow_growth":
            if self.j_of_n is None:
                raise ValueError("slow_growth regime needs an explicit j_of_n sequence")
        elif self.kind == "linear_theta":
            if self.theta is None or not 0 < self.theta <= 1:
                raise ValueError("linear_theta regime needs theta in (0, 1]")
        else:
            raise ValueError(f"unknown regime kind {self.kind!r}")


@dataclass(frozen=True)
class AsymptoticReport:
    """Leading-order degree growth for one regime.

    ``fixed_j``: mean ~ mean_coeff * n**mean_exponent and variance ~
    variance_coeff * n**variance_exponent. ``slow_growth``: mean ~
    (n / j_n)**(m/(m+1)). ``linear_theta``: the mean converges to
    ``mean_limit``; at theta = 1 that limit is m, the indegree alone —
    on average the latest arrivals recruit nobody.
    """

    m: int
    regime: RegimeSpec
    mean_exponent: float
    mean_coeff: float | None = None
    variance_exponent: float | None = None
    variance_coeff: float | None = None
    mean_limit: float | None = None

    def mean_at(self, n: int) -> float:
        if self.regime.kind == "fixed_j":
            return self.mean_coeff * n**self.mean_exponent
        if self.regime.kind == "slow_growth":
            return (n / self.regime.j_of_n(n)) ** self.mean_exponent
        return self.mean_limit

    def variance_at(self, n: int) -> float:
        if self.regime.kind != "fixed_j":
            raise ValueError("variance asymptotics are stated for the fixed_j regime only")
        return self.variance_coeff * n**self.variance_exponent

    def to_json_dict(self) -> dict:
        out: dict = {"m": self.m, "regime": self.regime.kind, "mean_exponent": self.mean_exponent}
        if self.regime.kind == "fixed_j":
            out["j"] = self.regime.j
            out["mean_coeff"] = self.mean_coeff
            out["variance_exponent"] = self.variance_exponent
            out["variance_coeff"] = self.variance_coeff
        elif self.regime.kind == "linear_theta":
            out["theta"] = self.regime.theta
            out["mean_limit"] = self.mean_limit
        return out


def degree_asymptotics(m: int, regime: RegimeSpec) -> AsymptoticReport:
    """Leading-order mean (and, for fixed j, variance) of the degree profile."""
    if m < 1:
        raise ValueError(f"circuit index m must be >= 1, got {m}")
    exponent = m / (m + 1)
    if regime.kind == "fixed_j":
        j = regime.j
        inv = 1.0 / (m + 1)
        mean_coeff = math.exp(math.lgamma(j + inv) - math.lgamma(j + 1))
        variance_coeff = (
            2.0
            * (m + 1)
            * math.exp(math.lgamma(j + 2 * inv) - math.lgamma(j + 1))
            / ((m + 1) * j + 1)
            - mean_coeff * mean_coeff
        )
        return AsymptoticReport(
            m=m,
            regime=regime,
            mean_exponent=exponent,
            mean_coeff=mean_coeff,
            variance_exponent=2 * exponent,
            variance_coeff=variance_coeff,
        )
    if regime.kind == "slow_growth":
        return AsymptoticReport(m=m, regime=regime, mean_exponent=exponent)
    return AsymptoticReport(
        m=m,
        regime=regime,
        mean_exponent=exponent,
        mean_limit=regime.theta ** (-exponent) - 1 + m,
    )


def _check_mjn(m: int, j: int, n: int) -> None:
    if m < 1:
        raise ValueError(f"circuit index m must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"time n must be >= 0, got {n}")
    if not 0 <= j <= n:
        raise ValueError(f"node {j} not in circuit of age {n}")
