"""Correlation and proportion-test statistics for comparing indicator outputs."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

__all__ = [
    "CorrelationResult",
    "ZTestResult",
    "pearson_r",
    "spearman_rho",
    "ztest_proportions",
    "normal_cdf",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CorrelationResult:
    coefficient: float
    n: int


@dataclass(frozen=True)
class ZTestResult:
    z: float
    p_two_sided: float
    pooled_proportion: float

    @property
    def p_one_sided(self) -> float:
        """p for the directional alternative matching the observed sign of z."""
        return self.p_two_sided / 2.0


def _validate_pair(x: Sequence[float], y: Sequence[float]) -> None:
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least 2 observations")


def pearson_r(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Product-moment correlation of two equal-length vectors.

    Raises ``ValueError`` on a length mismatch or when either vector is
    constant (zero variance).
    """
    _validate_pair(x, y)
    n = len(x)
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    sxx = math.fsum(a * a for a in dx)
    syy = math.fsum(b * b for b in dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance")
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    product = sxx * syy
    if product == 0.0 or not math.isfinite(product):
        # the direct product under-/overflowed; split the roots
        denominator = math.sqrt(sxx) * math.sqrt(syy)
    else:
        denominator = math.sqrt(product)
    return CorrelationResult(sxy / denominator, n)


def _average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; ties share the mean of their positional ranks."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j + 2) / 2.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Rank correlation: Pearson coefficient of the average-rank vectors."""
    _validate_pair(x, y)
    result = pearson_r(_average_ranks(x), _average_ranks(y))
    return CorrelationResult(result.coefficient, len(x))


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def ztest_proportions(k1: int, n1: int, k2: int, n2: int) -> ZTestResult:
    """Two-sample z-test for independent proportions (pooled variance).

    Args:
        k1, n1: Successes and trials of the first sample.
        k2, n2: Successes and trials of the second sample.

    Returns:
        :class:`ZTestResult` with the statistic, its two-sided p-value
        from the standard normal, and the pooled proportion. Swapping the
        samples negates ``z`` exactly.
    """
    if n1 <= 0 or n2 <= 0:
        raise ValueError("trial counts must be positive")
    if not 0 <= k1 <= n1 or not 0 <= k2 <= n2:
        raise ValueError("successes must lie in [0, trials]")
    pooled = (k1 + k2) / (n1 + n2)
    if pooled == 0.0 or pooled == 1.0:
        raise ValueError("degenerate proportions: pooled variance is zero")
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    z = (k1 / n1 - k2 / n2) / se
    p = 2.0 * normal_cdf(-abs(z))
    return ZTestResult(z, p, pooled)
