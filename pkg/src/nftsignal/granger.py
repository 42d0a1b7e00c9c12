"""Bidirectional Granger causality via the SSR-based F-test.

For two series, direction A asks whether tweet activity helps predict price
and direction B asks the reverse.  Each test fits two ordinary least squares
models on the lagged data: a restricted one (intercept + own lags) and an
unrestricted one that adds the other series' lags.  With T' rows after
lagging and L lags,

    F = ((SSR_r - SSR_u) / L) / (SSR_u / (T' - 2L - 1))

and the p-value comes from the F(L, T' - 2L - 1) survival function, which is
computed here from the regularized incomplete beta function so the package
needs no statistics dependency at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .timeseries import TimeframeSeries, paired_series

ALPHA = 0.05

# series with variance below this are rejected up front instead of producing NaN
_VARIANCE_FLOOR = 1e-12


class GrangerError(ValueError):
    pass


class SingularDesignError(GrangerError):
    """Design matrix is rank-deficient (e.g. constant or duplicated columns)."""


class DegenerateFitError(GrangerError):
    """Unrestricted model fits exactly; the F statistic is undefined."""


class InsufficientDataError(GrangerError):
    """Too few observations for the requested number of lags."""


class Direction(str, Enum):
    TWEETS_TO_PRICE = "A"  # null: tweet counts do not Granger-cause price
    PRICE_TO_TWEETS = "B"  # null: price does not Granger-cause tweet counts


@dataclass(frozen=True)
class LagSpec:
    lags: int

    def __post_init__(self):
        if self.lags < 1:
            raise GrangerError("lags must be >= 1")


DEFAULT_LAGS = (LagSpec(1), LagSpec(2), LagSpec(3))


@dataclass(frozen=True)
class GrangerResult:
    direction: Direction
    lags: int
    f_stat: float
    p_value: float
    df_num: int
    df_den: int
    rejected_at_0_05: bool


@dataclass(frozen=True)
class GrangerCell:
    """One (direction, lags) slot; ``result`` is None when data was insufficient."""

    direction: Direction
    lags: int
    result: GrangerResult | None

    @property
    def available(self) -> bool:
        return self.result is not None


def min_length_for(lags: int) -> int:
    """Smallest series length leaving the F denominator at least one dof."""
    return 3 * lags + 2


def build_lag_matrix(y, x, lags: int):
    """Lagged design matrices for the nested regressions.

    Returns (restricted, unrestricted, target): target is y_t for
    t in [lags, T); restricted columns are [1, y_{t-1}..y_{t-lags}];
    unrestricted appends x_{t-1}..x_{t-lags}.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.ndim != 1 or x.ndim != 1 or y.shape != x.shape:
        raise GrangerError("y and x must be 1-D series of equal length")
    if lags < 1:
        raise GrangerError("lags must be >= 1")
    t = y.shape[0]
    if t < 2 * lags + 2:
        raise GrangerError(f"need at least {2 * lags + 2} observations for {lags} lags, got {t}")
    rows = t - lags
    target = y[lags:]
    own = np.column_stack([y[lags - k : t - k] for k in range(1, lags + 1)])
    cross = np.column_stack([x[lags - k : t - k] for k in range(1, lags + 1)])
    const = np.ones((rows, 1))
    restricted = np.hstack([const, own])
    unrestricted = np.hstack([const, own, cross])
    return restricted, unrestricted, target


def ols_ssr(design, target):
    """Least squares via QR; returns (coefficients, sum of squared residuals)."""
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float)
    if design.ndim != 2 or target.ndim != 1 or design.shape[0] != target.shape[0]:
        raise GrangerError("design must be 2-D with one target row per design row")
    rows, cols = design.shape
    if rows <= cols:
        raise GrangerError(f"underdetermined system: {rows} rows, {cols} columns")
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(target))):
        raise GrangerError("design and target must be finite")
    q, r = np.linalg.qr(design)
    diag = np.abs(np.diag(r))
    tol = max(rows, cols) * np.finfo(float).eps * (diag.max() if diag.size else 0.0)
    if diag.size == 0 or diag.min() <= tol:
        raise SingularDesignError("design matrix is rank-deficient")
    coef = np.linalg.solve(r, q.T @ target)
    resid = target - design @ coef
    return coef, float(resid @ resid)


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    max_iter, eps, fpmin = 300, 3e-15, 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def f_survival(f: float, df_num: int, df_den: int) -> float:
    """P(F >= f) for the F distribution with (df_num, df_den) dof."""
    if df_num < 1 or df_den < 1:
        raise ValueError("degrees of freedom must be positive")
    if f <= 0.0:
        return 1.0
    x = df_den / (df_den + df_num * f)
    return betainc(df_den / 2.0, df_num / 2.0, x)


def ssr_f_test(y, x, lags: int, direction: Direction = Direction.TWEETS_TO_PRICE) -> GrangerResult:
    """Test the null "x does not Granger-cause y" at the given lag order."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.ndim != 1 or x.ndim != 1 or y.shape != x.shape:
        raise GrangerError("y and x must be 1-D series of equal length")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(x))):
        raise GrangerError("series must be finite")
    for name, s in (("y", y), ("x", x)):
        if float(np.var(s)) < _VARIANCE_FLOOR:
            raise GrangerError(f"series {name} is constant or nearly constant; test undefined")
    t = y.shape[0]
    df_den = t - 3 * lags - 1  # rows after lagging minus (2*lags + 1) parameters
    if df_den < 1:
        raise InsufficientDataError(
            f"need at least {min_length_for(lags)} observations for {lags} lags, got {t}"
        )
    restricted, unrestricted, target = build_lag_matrix(y, x, lags)
    _, ssr_r = ols_ssr(restricted, target)
    _, ssr_u = ols_ssr(unrestricted, target)
    # SSR at the level of squared rounding error counts as an exact fit
    if ssr_u <= 1e-26 * float(target @ target):
        raise DegenerateFitError("unrestricted model fits (numerically) exactly; SSR is zero")
    f_stat = max(0.0, ((ssr_r - ssr_u) / lags) / (ssr_u / df_den))
    p = f_survival(f_stat, lags, df_den)
    return GrangerResult(
        direction=direction,
        lags=lags,
        f_stat=f_stat,
        p_value=p,
        df_num=lags,
        df_den=df_den,
        rejected_at_0_05=p < ALPHA,
    )


def bidirectional_tests(tweets, prices, lag_specs=DEFAULT_LAGS, first_difference=False) -> list[GrangerCell]:
    """Both directions at every lag order; short data yields absent cells.

    ``first_difference`` applies a one-step difference to both series before
    testing.  Off by default: raw counts and averages are tested as-is, with
    the usual stationarity caveat.
    """
    tweets = np.asarray(tweets, dtype=float)
    prices = np.asarray(prices, dtype=float)
    if first_difference:
        tweets = np.diff(tweets)
        prices = np.diff(prices)
    cells = []
    for direction in (Direction.TWEETS_TO_PRICE, Direction.PRICE_TO_TWEETS):
        y, x = (prices, tweets) if direction is Direction.TWEETS_TO_PRICE else (tweets, prices)
        for spec in lag_specs:
            if len(y) < min_length_for(spec.lags):
                cells.append(GrangerCell(direction, spec.lags, None))
                continue
            cells.append(GrangerCell(direction, spec.lags, ssr_f_test(y, x, spec.lags, direction)))
    return cells


def run_bidirectional(series: TimeframeSeries, lag_specs=DEFAULT_LAGS, first_difference=False) -> list[GrangerCell]:
    """Run both hypotheses on a bucketed series.

    Frames without sales are dropped pairwise first: an undefined average
    price cannot enter the regression.
    """
    counts, prices = paired_series(series)
    return bidirectional_tests(counts, prices, lag_specs, first_difference=first_difference)
