"""Independent exact ground truth for the circuit statistics.

Two different routes compute the exact law of the white/blue external
node counts: a depth-first enumeration of every parent-choice history,
and a forward dynamic program on the (white, blue) state. They share no
aggregation code, so a bug in one cannot silently confirm the other.
A third DP gives the exact law of a single node's degree, and a fourth
routine enumerates the within-sample color process for conditional
moments. Everything is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .dist import DistTable

DEFAULT_HISTORY_BUDGET = 10_000_000


class BudgetExceeded(Exception):
    """Raised when a computation would exceed its configured budget."""

    def __init__(self, required: int, configured: int, what: str = "history enumeration"):
        self.required = required
        self.configured = configured
        super().__init__(
            f"{what} requires budget {required}, configured budget is {configured}"
        )


def external_total(m: int, n: int) -> int:
    """Gap-table size after n insertions: (m + 1) n + 1."""
    return (m + 1) * n + 1


def history_count(m: int, n: int) -> int:
    """Number of parent-choice histories enumerated for (m, n): (n!)**m."""
    count = 1
    for k in range(1, n + 1):
        count *= k**m
    return count


def enumerate_histories(m: int, n: int, budget: int = DEFAULT_HISTORY_BUDGET) -> DistTable:
    """Exact joint law of (white, blue) by full-history enumeration.

    Walks every sequence of parent choices, weighting each draw by
    (gap count of the chosen node) / (gap total), and tallies the color
    census of each final outdegree profile. Refuses up front when the
    history count exceeds ``budget``.
    """
    _check_mn(m, n)
    required = history_count(m, n)
    if required > budget:
        raise BudgetExceeded(required, budget)

    # Path weights are integers over the common denominator
    # prod of all gap totals seen, which is history-independent.
    denom = 1
    for k in range(1, n + 1):
        t0 = external_total(m, k - 1)
        for s in range(m):
            denom *= t0 + s

    acc: dict[tuple[int, int], int] = {}
    outdeg = [0]

    def census() -> tuple[int, int]:
        w = 0
        b = 0
        for d in outdeg:
            if d == 0:
                w += 1
            elif d == 1:
                b += 2
        return w, b

    def grow(k: int, weight: int) -> None:
        if k > n:
            key = census()
            acc[key] = acc.get(key, 0) + weight
            return

        def draw(s: int, weight: int) -> None:
            if s == m:
                outdeg.append(0)
                grow(k + 1, weight)
                outdeg.pop()
                return
            for v in range(k):
                gaps_v = outdeg[v] + 1
                outdeg[v] += 1
                draw(s + 1, weight * gaps_v)
                outdeg[v] -= 1

        draw(0, weight)

    grow(1, 1)
    return DistTable({key: Fraction(w, denom) for key, w in acc.items()})


def iter_dp_color_counts(m: int, n_max: int):
    """Yield (n, exact law of (white, blue)) for n = 0 .. n_max, one DP pass."""
    _check_mn(m, n_max)
    # All probabilities at a given step share the denominator
    # prod of gap totals so far; keep integer numerators only.
    table: dict[tuple[int, int], int] = {(1, 0): 1}
    denom = 1
    yield 0, DistTable({(1, 0): Fraction(1)})
    for k in range(1, n_max + 1):
        t0 = external_total(m, k - 1)
        for s in range(m):
            t = t0 + s
            denom *= t
            new: dict[tuple[int, int], int] = {}
            for (w, b), num in table.items():
                r = t - w - b
                if w:
                    key = (w - 1, b + 2)
                    new[key] = new.get(key, 0) + num * w
                if b:
                    key = (w, b - 2)
                    new[key] = new.get(key, 0) + num * b
                if r:
                    key = (w, b)
                    new[key] = new.get(key, 0) + num * r
            table = new
        table = {(w + 1, b): num for (w, b), num in table.items()}
        yield k, DistTable({key: Fraction(num, denom) for key, num in table.items()})


def dp_color_counts(m: int, n: int) -> DistTable:
    """Exact joint law of (white, blue) by dynamic programming.

    Within each insertion, m sub-steps move the state: picking white
    turns one white into two blues, picking blue turns two blues into
    three reds, picking red only grows red; the gap total rises by one
    per sub-step. The insertion ends with the hiccup: the new node
    brings one fresh white external node. Red counts are implicit
    (total minus white minus blue).
    """
    for _, table in iter_dp_color_counts(m, n):
        pass
    return table


def dp_degree(m: int, j: int, n: int) -> DistTable:
    """Exact law of the degree of node j at time n, by DP on its white-gap count.

    Node j starts with one gap of its own at time j. Each later insertion
    makes m draws; a draw lands on node j with probability w / t and then
    both w and t grow by one; the hiccup afterwards grows t only. The
    degree is w - 1 plus the indegree (m, or 0 for the originator).
    """
    _check_mn(m, n)
    if not 0 <= j <= n:
        raise ValueError(f"node {j} not in circuit of age {n}")
    table: dict[int, int] = {1: 1}
    denom = 1
    for k in range(j + 1, n + 1):
        t0 = external_total(m, k - 1)
        for s in range(m):
            t = t0 + s
            denom *= t
            new: dict[int, int] = {}
            for w, num in table.items():
                new[w + 1] = new.get(w + 1, 0) + num * w
                new[w] = new.get(w, 0) + num * (t - w)
            table = new
    indeg = m if j > 0 else 0
    return DistTable({w - 1 + indeg: Fraction(num, denom) for w, num in table.items()})


def enumerate_sample_step(m: int, n: int, white: int, blue: int) -> DistTable:
    """Exact law of the within-sample (white, blue) counts after the m draws
    of the n-th insertion, started from state (white, blue), before the hiccup.
    """
    _check_mn(m, n, n_min=1)
    tau = external_total(m, n - 1)
    if white < 0 or blue < 0 or blue % 2:
        raise ValueError(f"inconsistent color state ({white}, {blue})")
    if white + blue > tau:
        raise ValueError(
            f"inconsistent color state ({white}, {blue}): exceeds {tau} external nodes"
        )

    denom = 1
    for s in range(m):
        denom *= tau + s

    acc: dict[tuple[int, int], int] = {}

    def draw(s: int, w: int, b: int, weight: int) -> None:
        if s == m:
            key = (w, b)
            acc[key] = acc.get(key, 0) + weight
            return
        t = tau + s
        r = t - w - b
        if w:
            draw(s + 1, w - 1, b + 2, weight * w)
        if b:
            draw(s + 1, w, b - 2, weight * b)
        if r:
            draw(s + 1, w, b, weight * r)

    draw(0, white, blue, 1)
    return DistTable({key: Fraction(w, denom) for key, w in acc.items()})


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of (white, blue) at one time."""

    ew: Fraction
    eb: Fraction
    ew2: Fraction
    ewb: Fraction
    eb2: Fraction

    def cov_y(self) -> tuple[Fraction, Fraction, Fraction]:
        """(Var Y0, Cov(Y0, Y1), Var Y1) for the outdegree-0/1 node counts."""
        var_w = self.ew2 - self.ew * self.ew
        cov_wb = self.ewb - self.ew * self.eb
        var_b = self.eb2 - self.eb * self.eb
        return var_w, cov_wb / 2, var_b / 4


def recurrence_moments(m: int, n: int) -> MomentSet:
    """Exact moments of (white, blue) at time n by stepwise propagation.

    Pushes (E[w], E[b], E[w^2], E[wb], E[b^2]) through every sub-step
    draw and every hiccup, using only the one-draw transition (white
    picked with probability w/t, blue with b/t). Independent of any
    solved closed form, and free of their small-n domain holes, so it
    serves as the moment oracle at sizes where the full state DP is out
    of reach.
    """
    _check_mn(m, n)
    ew, eb, ew2, ewb, eb2 = (Fraction(1), Fraction(0), Fraction(1), Fraction(0), Fraction(0))
    for k in range(1, n + 1):
        t0 = external_total(m, k - 1)
        for s in range(m):
            t = t0 + s
            ew_n = ew - ew / t
            eb_n = eb + (2 * ew - 2 * eb) / t
            ew2_n = ew2 - 2 * ew2 / t + ew / t
            ewb_n = ewb - 3 * ewb / t + (2 * ew2 - 2 * ew) / t
            eb2_n = eb2 - 4 * eb2 / t + (4 * ew + 4 * eb + 4 * ewb) / t
            ew, eb, ew2, ewb, eb2 = ew_n, eb_n, ew2_n, ewb_n, eb2_n
        # hiccup: the new node adds one white external node
        ew2 = ew2 + 2 * ew + 1
        ewb = ewb + eb
        ew = ew + 1
    return MomentSet(ew=ew, eb=eb, ew2=ew2, ewb=ewb, eb2=eb2)


def _check_mn(m: int, n: int, n_min: int = 0) -> None:
    if m < 1:
        raise ValueError(f"circuit index m must be >= 1, got {m}")
    if n < n_min:
        raise ValueError(f"time n must be >= {n_min}, got {n}")
