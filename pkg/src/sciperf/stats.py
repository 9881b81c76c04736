"""Statistical kernels: point-biserial correlation, odds ratios, homogeneity.

Everything here is a pure function over plain numbers, shared by the analysis
layer.  Chi-square tail probabilities come from an in-package regularized
incomplete gamma implementation rather than lookup tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

Z_95 = 1.959963984540054  # two-sided 95% normal quantile


class UndefinedCorrelationError(Exception):
    """Correlation is undefined: one dummy class is empty or variance is zero."""


class DegenerateStratumError(Exception):
    """A contingency table has an empty case or control margin."""


def point_biserial(values: Sequence[float], dummies: Sequence[int]) -> float:
    """Correlation between a continuous variable and a 0/1 dummy.

    r = (mean1 - mean0) / sd * sqrt(p * q) with p, q the class proportions and
    sd the population standard deviation of all values.  Under that reading
    the result equals the Pearson correlation of (values, dummies).
    """
    if len(values) != len(dummies):
        raise ValueError("values and dummies differ in length")
    n = len(values)
    if n < 2:
        raise ValueError("need at least two observations")
    ones = [v for v, d in zip(values, dummies) if d == 1]
    zeros = [v for v, d in zip(values, dummies) if d == 0]
    if len(ones) + len(zeros) != n:
        raise ValueError("dummies must be 0 or 1")
    if not ones or not zeros:
        raise UndefinedCorrelationError("both dummy classes must be present")
    mean = sum(values) / n
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / n)
    if sd == 0.0:
        raise UndefinedCorrelationError("zero variance in values")
    p = len(ones) / n
    q = len(zeros) / n
    return (sum(ones) / len(ones) - sum(zeros) / len(zeros)) / sd * math.sqrt(p * q)


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 case/control table: a, c are exposed (TS); a, b are cases (HCA authors)."""

    a: int  # exposed cases
    b: int  # unexposed cases
    c: int  # exposed controls
    d: int  # unexposed controls

    def __post_init__(self):
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("cells must be non-negative")
        if self.a + self.b + self.c + self.d == 0:
            raise ValueError("empty table")

    @property
    def has_zero_cell(self) -> bool:
        return min(self.a, self.b, self.c, self.d) == 0


@dataclass(frozen=True)
class OddsRatioResult:
    or_value: float
    ci_low: float
    ci_high: float
    method: str  # "log" or "log+haldane"


@dataclass(frozen=True)
class HomogeneityResult:
    chi_square: float
    degrees_of_freedom: int
    p_value: float


def _corrected_cells(table: ContingencyTable) -> tuple[float, float, float, float, bool]:
    if table.has_zero_cell:
        return table.a + 0.5, table.b + 0.5, table.c + 0.5, table.d + 0.5, True
    return float(table.a), float(table.b), float(table.c), float(table.d), False


def odds_ratio(table: ContingencyTable) -> OddsRatioResult:
    """Odds ratio (a/b)/(c/d) with a 95% log-method confidence interval.

    Any zero cell triggers the Haldane-Anscombe +0.5 correction to all four
    cells, recorded in the method tag.
    """
    if table.a + table.b == 0 or table.c + table.d == 0:
        raise DegenerateStratumError("a case or control margin is empty")
    a, b, c, d, corrected = _corrected_cells(table)
    or_value = (a * d) / (b * c)
    se = math.sqrt(1 / a + 1 / b + 1 / c + 1 / d)
    log_or = math.log(or_value)
    return OddsRatioResult(
        or_value=or_value,
        ci_low=math.exp(log_or - Z_95 * se),
        ci_high=math.exp(log_or + Z_95 * se),
        method="log+haldane" if corrected else "log",
    )


def homogeneity_test(strata: Sequence[ContingencyTable]) -> HomogeneityResult:
    """Woolf chi-square test of equal odds ratios across strata.

    Each stratum contributes its log odds ratio weighted by inverse variance;
    the statistic is the weighted sum of squared deviations from the pooled
    mean, chi-square distributed with (strata - 1) degrees of freedom under
    homogeneity.
    """
    if len(strata) < 2:
        raise ValueError("need at least two strata")
    log_ors = []
    weights = []
    for table in strata:
        if table.a + table.b == 0 or table.c + table.d == 0:
            raise DegenerateStratumError("a case or control margin is empty")
        a, b, c, d, _ = _corrected_cells(table)
        log_ors.append(math.log((a * d) / (b * c)))
        weights.append(1.0 / (1 / a + 1 / b + 1 / c + 1 / d))
    pooled = sum(w * x for w, x in zip(weights, log_ors)) / sum(weights)
    chi_square = sum(w * (x - pooled) ** 2 for w, x in zip(weights, log_ors))
    df = len(strata) - 1
    return HomogeneityResult(chi_square, df, chi_square_sf(chi_square, df))


def bin_by_percentile(percentiles: Mapping[str, float], k: int) -> dict[str, int]:
    """Assign each key to a bin 1..k by its percentile, bottom-up.

    Bin j covers ((j-1)*100/k, j*100/k], with bin 1 closed at 0.  Typical
    choices are quartiles (k=4) and deciles (k=10).
    """
    if k < 2:
        raise ValueError("need at least two bins")
    bins: dict[str, int] = {}
    for key, pct in percentiles.items():
        if not 0.0 <= pct <= 100.0:
            raise ValueError(f"percentile {pct} outside [0, 100]")
        # Small slack keeps values that are exactly on a bin edge (up to float
        # rounding) in the lower bin, matching the half-open intervals.
        b = math.ceil(pct * k / 100.0 - 1e-9)
        bins[key] = min(max(b, 1), k)
    return bins


# --- chi-square tail probability -------------------------------------------


def chi_square_sf(x: float, df: int) -> float:
    """Upper tail P(X >= x) of the chi-square distribution with ``df`` dof."""
    if df < 1:
        raise ValueError("degrees of freedom must be >= 1")
    if x < 0:
        return 1.0
    return regularized_gamma_q(df / 2.0, x / 2.0)


def regularized_gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).

    Series expansion for x < a + 1, Lentz continued fraction otherwise;
    both converge to near machine precision (relative error well below 1e-10
    over the chi-square ranges used here).
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_cf(a, x)


_EPS = 1e-16
_MAX_ITER = 1000


def _gamma_p_series(a: float, x: float) -> float:
    # P(a, x) = x^a e^-x / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k))
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_cf(a: float, x: float) -> float:
    # Modified Lentz evaluation of the continued fraction for Q(a, x).
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
