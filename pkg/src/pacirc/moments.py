"""Closed-form moments for the counts of outdegree-0 and outdegree-1 nodes.

All quantities with rational structure are exact `Fraction`s. The
martingale transform matrices reduce to rationals as well (their gamma
ratios telescope into rising factorials whose base constants cancel);
only the limit covariance of the scaled martingale and the diagonal
scaling involve genuinely irrational values and are evaluated with
mpmath at >= 50 significant digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath

from .degrees import rising


class FormulaDomainError(ValueError):
    """A closed form was requested outside the domain where it is defined."""


@dataclass(frozen=True)
class MomentVector:
    """Exact expected counts of outdegree-0 and outdegree-1 nodes."""

    ey0: Fraction
    ey1: Fraction
    boundary: bool = False


def mean_y(m: int, n: int) -> MomentVector:
    """Exact E[Y0_n], E[Y1_n] for a circuit of index m at time n.

    n = 0 is returned as the boundary convention (1, 0): the lone
    originator is terminal. The m = 1 tree has its own expressions
    because its first insertion leaves an outdegree-1 root, unlike
    every m >= 2 circuit.
    """
    _check_m(m)
    if n < 0:
        raise ValueError(f"time n must be >= 0, got {n}")
    if n == 0:
        return MomentVector(ey0=Fraction(1), ey1=Fraction(0), boundary=True)
    if m == 1:
        return MomentVector(
            ey0=Fraction(2 * n + 1, 3),
            ey1=Fraction(n * n + 2, 3 * (2 * n - 1)),
        )
    ey0 = Fraction((m + 1) * n + m, 2 * m + 1)
    ey1 = Fraction(
        (m + 1) * (n - 1) * ((2 * m * m + 2 * m) * n + 2 * m * m + m + 1),
        2 * (3 * m + 1) * (2 * m + 1) * ((m + 1) * n - 1),
    )
    return MomentVector(ey0=ey0, ey1=ey1)


@dataclass(frozen=True)
class SecondMoments:
    """Exact second and mixed moments of the white/blue external-node counts."""

    ew2: Fraction
    ewb: Fraction
    eb2: Fraction


def second_moments(m: int, n: int) -> SecondMoments:
    """Exact E[W_n^2], E[W_n B_n], E[B_n^2] for m >= 2, n >= 1.

    The m = 1 tree has no closed second-moment forms here; use the exact
    oracle (``oracle.dp_color_counts`` or ``oracle.recurrence_moments``).
    The n-free coefficient of the E[B_n^2] polynomial is the exact
    solution of the underlying recurrence; the full expression is
    cross-checked against the state DP in the tests.
    """
    _check_m(m, m_min=2, hint="second moments for m=1 are served by the exact oracle only")
    if n < 1:
        raise ValueError(f"time n must be >= 1, got {n}")

    u = m * n + n  # (m + 1) n
    ew2 = Fraction((m + 1) ** 3 * n**3, (u - 1) * (2 * m + 1) ** 2) + Fraction(
        (8 * m * m - m - 1) * (m + 1) ** 2 * n * n
        + m * (m + 1) * (3 * m * m - 6 * m - 1) * n
        - m * (2 * m**3 + 6 * m * m + 3 * m + 1),
        (u - 1) * (2 * m + 1) ** 2 * (3 * m + 1),
    )

    ewb = Fraction(
        (n - 1)
        * (
            2 * m * (4 * m + 1) * (m + 1) ** 4 * n**3
            + (8 * m**3 - 16 * m * m + m + 1) * (m + 1) ** 3 * n * n
            - (22 * m**3 + 3 * m * m + 13 * m + 2) * (m + 1) ** 2 * n
            - 2 * m * (m + 1) * (6 * m**3 + 5 * m * m + 3 * m - 2)
        ),
        (4 * m + 1) * (3 * m + 1) * (2 * m + 1) ** 2 * (u - 2) * (u - 1),
    )

    if n == 1:
        eb2 = Fraction(0)
    else:
        quartic = Fraction(4 * m * m * (m + 1) ** 5 * n**4, (3 * m + 1) ** 2 * (2 * m + 1) ** 2)
        cubic_quadratic = Fraction(
            (m + 1) ** 3
            * (
                4 * (m + 1) * m * (116 * m**4 + 47 * m**3 + 39 * m * m + 13 * m + 1) * n**3
                + (304 * m**6 - 1772 * m**5 - 1836 * m**4 - 1043 * m**3 - 173 * m * m + 7 * m + 1)
                * n
                * n
            ),
            (5 * m + 1) * (4 * m + 1) * (3 * m + 1) ** 2 * (2 * m + 1) ** 2,
        )
        linear_const = Fraction(
            (m + 1)
            * (
                (m + 1)
                * (
                    528 * m**8
                    + 6100 * m**7
                    + 156 * m**6
                    + 261 * m**5
                    + 1731 * m**4
                    + 1594 * m**3
                    + 86 * m * m
                    - 83 * m
                    - 5
                )
                * n
                + 2
                * (
                    144 * m**9
                    - 300 * m**8
                    - 5128 * m**7
                    - 7839 * m**6
                    - 6918 * m**5
                    - 3483 * m**4
                    - 828 * m**3
                    + 99 * m * m
                    + 58 * m
                    + 3
                )
            ),
            (5 * m + 1) * (4 * m + 1) * (3 * m + 1) ** 2 * (3 * m - 1) * (2 * m + 1) ** 2,
        )
        eb2 = Fraction(n - 1, (u - 3) * (u - 2) * (u - 1)) * (
            quartic + cubic_quadratic - linear_const
        )

    return SecondMoments(ew2=ew2, ewb=ewb, eb2=eb2)


def sample_step_coefficients(m: int, n: int) -> tuple[int, int, int, int, int]:
    """The five state coefficients of the conditional within-sample E[b^2]."""
    a = (m + 1) * (n - 1) + 1  # gap total entering the n-th sample
    c1 = 4 * m * (m - 1) * (a - 2)
    c2 = 4 * m * (a - 3) * (a - 2)
    c3 = (a - 4) * (a - 3) * (a - 2)
    c4 = 4 * m * (
        m * m * n * n
        - m * m * n
        + 2 * m * n * n
        + m * m
        - 7 * m * n
        + n * n
        + m
        - 6 * n
        + 10
    )
    c5 = 2 * m * (a - 2) * (2 * m * n - m + 2 * n - 7)
    return c1, c2, c3, c4, c5


@dataclass(frozen=True)
class StepMoments:
    """Conditional moments of the within-sample (white, blue) counts after m draws."""

    ew: Fraction
    eb: Fraction
    ew2: Fraction
    ewb: Fraction
    eb2: Fraction


def cond_step_moments(m: int, n: int, white: int, blue: int) -> StepMoments:
    """Conditional within-sample moments given state (white, blue) before sample n.

    Defined for (m + 1) n > 4 only: at smaller sizes some denominators of
    the closed forms vanish, and the enumeration oracle
    (``oracle.enumerate_sample_step``) is the tool instead.
    """
    _check_m(m)
    if n < 1:
        raise ValueError(f"time n must be >= 1, got {n}")
    tau = (m + 1) * (n - 1) + 1
    if white < 0 or blue < 0 or blue % 2 or white + blue > tau:
        raise ValueError(f"inconsistent color state ({white}, {blue}) for tau = {tau}")
    if (m + 1) * n <= 4:
        raise FormulaDomainError(
            f"closed step-moment forms have vanishing denominators at (m, n) = ({m}, {n}); "
            "use oracle.enumerate_sample_step"
        )

    w = Fraction(white)
    b = Fraction(blue)
    u = m * n + n  # (m + 1) n
    lead = (m + 1) * (n - 1)

    ew = Fraction(lead, lead + m) * w

    if m == 1:
        eb = ((u - m - 2) * b + 2 * w) / (u - m)
    else:
        eb = Fraction(lead, (u - 2) * (u - 1)) * ((u - m - 2) * b + 2 * m * w)

    ew2 = Fraction(lead, (u - 2) * (u - 1)) * ((u - m - 2) * w + m) * w

    ewb = Fraction(lead * (u - m - 2), (u - 3) * (u - 2) * (u - 1)) * w * (
        (u - m - 3) * b + 2 * m * w - 2 * m
    )

    c1, c2, c3, c4, c5 = sample_step_coefficients(m, n)
    eb2 = Fraction(lead, (u - 4) * (u - 3) * (u - 2) * (u - 1)) * (
        c1 * w * w + c2 * w * b + c3 * b * b + c4 * w + c5 * b
    )

    return StepMoments(ew=ew, eb=eb, ew2=ew2, ewb=ewb, eb2=eb2)


@dataclass(frozen=True)
class CovMatrix:
    """Limit covariance matrix of the scaled (Y0, Y1) vector, exact entries."""

    var_y0: Fraction
    cov_y0_y1: Fraction
    var_y1: Fraction

    def entries(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.var_y0, self.cov_y0_y1), (self.cov_y0_y1, self.var_y1))

    def determinant(self) -> Fraction:
        return self.var_y0 * self.var_y1 - self.cov_y0_y1 * self.cov_y0_y1

    def is_positive_definite(self) -> bool:
        return self.var_y0 > 0 and self.determinant() > 0


def cov_limit(m: int) -> CovMatrix:
    """Limit of Cov(Y0_n, Y1_n) / n as n grows, for m >= 2.

    This matrix is also the covariance of the bivariate Gaussian limit of
    the centered, sqrt(n)-scaled (Y0, Y1) vector.
    """
    _check_m(m, m_min=2, hint="the covariance limit is stated for m >= 2")
    var_y0 = Fraction(2 * m * m * (m + 1), (3 * m + 1) * (2 * m + 1) ** 2)
    cov = Fraction(-4 * (m + 1) ** 2 * m * m, (4 * m + 1) * (3 * m + 1) * (2 * m + 1) ** 2)
    var_y1 = Fraction(
        2 * m * m * (m + 1) * (48 * m**3 + 59 * m * m + 27 * m + 4),
        (5 * m + 1) * (4 * m + 1) * (3 * m + 1) ** 2 * (2 * m + 1) ** 2,
    )
    return CovMatrix(var_y0=var_y0, cov_y0_y1=cov, var_y1=var_y1)


@dataclass(frozen=True)
class MartingaleMatrices:
    """The linear transform making (W_n, B_n) a martingale, with its scalings.

    ``p`` (2x2) and ``q`` (2-vector) are exact: their gamma-ratio entries
    collapse to rising factorials over (n-1)!, the base constants
    cancelling. M_n = p (W_n, B_n)^T + q satisfies E[M_n | state at n-1]
    = M_{n-1} and p_n = p_{n-1} a_n^{-1}, q_n = q_{n-1} - p_n e_1.
    ``k_diag`` and ``sigma`` (limit covariance of the k-scaled
    martingale) are mpmath floats at ``dps`` digits.
    """

    m: int
    n: int
    p: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    q: tuple[Fraction, Fraction]
    a: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    k_diag: tuple[mpmath.mpf, mpmath.mpf]
    sigma: tuple[tuple[mpmath.mpf, mpmath.mpf], tuple[mpmath.mpf, mpmath.mpf]]
    dps: int

    def m_value(self, white: int | Fraction, blue: int | Fraction) -> tuple[Fraction, Fraction]:
        """Exact M_n for a (possibly expected) state (white, blue)."""
        w = Fraction(white)
        b = Fraction(blue)
        return (
            self.p[0][0] * w + self.p[0][1] * b + self.q[0],
            self.p[1][0] * w + self.p[1][1] * b + self.q[1],
        )


def step_matrix(m: int, n: int) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Coefficient matrix a_n of E[(W_n, B_n) | state at n-1] = a_n (W, B)^T + (1, 0)^T."""
    u = m * n + n
    lead = (m + 1) * (n - 1)
    return (
        (Fraction(lead, u - 1), Fraction(0)),
        (
            Fraction(2 * m * lead, (u - 2) * (u - 1)),
            Fraction(lead * (u - m - 2), (u - 2) * (u - 1)),
        ),
    )


def martingale_matrices(m: int, n: int, dps: int = 60) -> MartingaleMatrices:
    """Transform matrices p_n, q_n, a_n plus scaling k_n and limit covariance sigma.

    Defined for m >= 2 and n >= 1 (n = 1 gives the identity/zero seed of
    the recursion).
    """
    _check_m(m, m_min=2, hint="the martingale construction is stated for m >= 2")
    if n < 1:
        raise ValueError(f"time n must be >= 1, got {n}")

    nf = factorial(n - 1)
    base_hi = Fraction(2 * m + 1, m + 1)  # offset for the top-row gamma ratios
    base_lo = Fraction(2 * m, m + 1)  # offset for the bottom-row gamma ratios
    p11 = rising(base_hi, n - 1) / nf
    p22 = Fraction(m * n + n - 1, m) * rising(base_lo, n - 1) / nf
    p21 = 2 * (p11 - p22)
    q1 = 1 - rising(base_hi + 1, n - 1) / nf
    q2 = (
        Fraction((m + 1) * (2 * m * n + m + 2 * n - 1), m * (3 * m + 1))
        * rising(base_lo, n)
        / nf
        - 2 * rising(base_hi + 1, n - 1) / nf
    )

    with mpmath.workdps(dps):
        g_lo = mpmath.gamma(mpmath.mpf(2 * m) / (m + 1))
        g_hi2 = mpmath.gamma(mpmath.mpf(3 * m + 2) / (m + 1))
        s11 = 2 * m * m / ((3 * m + 1) * (m + 1) * g_hi2**2)
        s12 = -12 * m * (m + 1) / ((3 * m + 1) * (4 * m + 1) * g_lo * g_hi2)
        s22 = (
            24 * (m + 1) ** 3 * (7 * m + 3)
            / ((3 * m + 1) ** 2 * (5 * m + 1) * (2 * m + 1) * g_lo**2)
        )
        nn = mpmath.mpf(n)
        k1 = nn ** (-mpmath.mpf(3 * m + 1) / (2 * (m + 1)))
        k2 = nn ** (-mpmath.mpf(5 * m + 1) / (2 * (m + 1)))

    return MartingaleMatrices(
        m=m,
        n=n,
        p=((p11, Fraction(0)), (p21, p22)),
        q=(q1, q2),
        a=step_matrix(m, n),
        k_diag=(k1, k2),
        sigma=((s11, s12), (s12, s22)),
        dps=dps,
    )


def _check_m(m: int, m_min: int = 1, hint: str | None = None) -> None:
    if m < m_min:
        msg = f"circuit index m must be >= {m_min}, got {m}"
        if hint:
            msg = f"{msg} ({hint})"
        raise ValueError(msg)
