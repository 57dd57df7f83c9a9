"""Poisson tails, the core emergence threshold c_k, the core-size bound gamma
and maximum-likelihood fits of truncated Poisson degree laws."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import brentq

DELTA = 1e-3
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# Truncated-Poisson masses are carried up to degree k + _FIT_SPAN.
_FIT_SPAN = 200


class UnimodalityError(RuntimeError):
    """The objective of the c_k minimisation is not unimodal on its bracket."""


def _log_pmf(lam: float, i: int) -> float:
    return i * math.log(lam) - lam - math.lgamma(i + 1)


def poisson_tail(lam: float, j: int) -> float:
    """P(Poisson(lam) >= j).

    Summed directly over the upper tail when ``j > lam`` (tiny tails keep
    full relative precision), else as one minus the lower sum.  Terms come
    from a log-gamma start and a ratio recurrence.
    """
    if lam < 0 or math.isnan(lam):
        raise ValueError(f"Poisson mean must be non-negative, got {lam}")
    if j <= 0:
        return 1.0
    if lam == 0:
        return 0.0
    if j > lam:
        term = math.exp(_log_pmf(lam, j))
        total, i = 0.0, j
        while True:
            total += term
            i += 1
            term *= lam / i
            if term <= total * 1e-17:
                return total
    # Lower sum sum_{i<j} pmf(i), accumulated from the largest term downward.
    i = j - 1
    term = math.exp(_log_pmf(lam, i))
    lower = 0.0
    while i >= 0:
        lower += term
        if term < lower * 1e-17:
            break
        term *= i / lam
        i -= 1
    return max(0.0, 1.0 - lower)


def poisson_cdf(lam: float, j: int) -> float:
    """P(Poisson(lam) <= j)."""
    return 1.0 - poisson_tail(lam, j + 1)


def _ck_objective(lam: float, k: int) -> float:
    return lam / poisson_tail(lam, k - 1)


@dataclass(frozen=True)
class ThresholdResult:
    k: int
    c_k: float
    lambda_star: float
    tolerance: float

    def as_dict(self) -> dict:
        return {"k": self.k, "c_k": self.c_k, "lambda_star": self.lambda_star}


def compute_ck(k: int, tol: float = 1e-9) -> ThresholdResult:
    """c_k = inf over lam > 0 of lam / P(Poisson(lam) >= k - 1).

    Golden-section search on ``[k - 2, 4k]`` once a 64-point grid confirms
    the objective falls then rises exactly once.
    """
    if k < 3:
        raise ValueError("c_k is defined here for k >= 3")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = max(k - 2.0, 1e-6), 4.0 * k
    grid = np.linspace(a, b, 64)
    values = np.array([_ck_objective(x, k) for x in grid])
    steps = np.sign(np.diff(values))
    steps = steps[steps != 0]
    if len(steps) and np.count_nonzero(np.diff(steps) != 0) > 1:
        raise UnimodalityError(f"objective for k={k} changes monotonicity more than once on [{a}, {b}]")
    # The objective is flat near its minimum, so bracket the argmin to tol in
    # lam; the value is then accurate to far better than tol.
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = _ck_objective(x1, k), _ck_objective(x2, k)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = _ck_objective(x1, k)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = _ck_objective(x2, k)
    lam = (a + b) / 2
    return ThresholdResult(k=k, c_k=_ck_objective(lam, k), lambda_star=lam, tolerance=tol)


@dataclass(frozen=True)
class GammaBound:
    value: float
    log_value: float
    within_hypothesis: bool


def gamma_bound(k: int, lam: float) -> GammaBound:
    """(1 + d) e^k (lam / (k - 1))^(k - 1) e^(-(1 - d) lam) with d = 1e-3.

    Evaluated in log space.  The bound is only claimed for
    ``lam >= (7k - 1) / 3``; smaller ``lam`` is evaluated but flagged.
    """
    if k < 2 or lam <= 0:
        raise ValueError("need k >= 2 and lam > 0")
    log_value = math.log1p(DELTA) + k + (k - 1) * math.log(lam / (k - 1)) - (1 - DELTA) * lam
    return GammaBound(value=math.exp(log_value), log_value=log_value,
                      within_hypothesis=lam >= (7 * k - 1) / 3)


# ---------------------------------------------------------------------------
# Truncated Poisson fits
# ---------------------------------------------------------------------------

def truncated_poisson_pmf(mu: float, k: int, upto: int | None = None) -> np.ndarray:
    """Masses of Poisson(mu) conditioned on >= k, for degrees ``k .. upto``."""
    upto = k + _FIT_SPAN if upto is None else upto
    degrees = np.arange(k, upto + 1)
    if mu <= 0:
        out = np.zeros(len(degrees))
        out[0] = 1.0
        return out
    logs = degrees * math.log(mu) - mu - np.array([math.lgamma(d + 1) for d in degrees])
    tail = poisson_tail(mu, k)
    if tail > 0:
        return np.exp(logs) / tail
    # tail underflowed: mass sits at the low end, normalise in log space
    w = np.exp(logs - logs.max())
    return w / w.sum()


def truncated_poisson_mean(mu: float, k: int) -> float:
    """E[X | X >= k] for X ~ Poisson(mu); equals k in the limit mu -> 0."""
    tail = poisson_tail(mu, k) if mu > 0 else 0.0
    if tail == 0:
        return float(k)
    return mu * poisson_tail(mu, k - 1) / tail


@dataclass
class DegreeFit:
    k: int
    mu_hat: float
    histogram: dict[int, int]
    tv_distance: float
    degenerate: bool = False
    fitted: np.ndarray = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {"k": self.k, "mu_hat": self.mu_hat, "tv_distance": self.tv_distance,
                "degenerate": self.degenerate}


def _as_histogram(histogram) -> dict[int, int]:
    if isinstance(histogram, Mapping):
        items = histogram.items()
    else:
        items = enumerate(histogram)
    return {int(d): int(c) for d, c in items if c}


def fit_truncated_poisson(histogram: Mapping[int, int] | Sequence[int], k: int) -> DegreeFit:
    """Maximum-likelihood Poisson(mu) conditioned on >= k for a degree histogram.

    The likelihood equation reduces to matching the conditional mean to the
    sample mean, which is increasing in mu, so a bracketing root finder
    suffices.  A sample mean of exactly k puts the estimate on the boundary
    mu = 0 and is reported as degenerate.
    """
    hist = _as_histogram(histogram)
    total = sum(hist.values())
    if total == 0:
        raise ValueError("empty histogram")
    if min(hist) < k:
        raise ValueError(f"histogram has mass below k={k}")
    mean = sum(d * c for d, c in hist.items()) / total
    upto = max(k + _FIT_SPAN, max(hist))
    degenerate = mean <= k
    if degenerate:
        mu = 0.0
    else:
        hi = max(1.0, mean)
        while truncated_poisson_mean(hi, k) < mean:
            hi *= 2
        lo = 1e-12
        mu = brentq(lambda x: truncated_poisson_mean(x, k) - mean, lo, hi, xtol=1e-12, rtol=1e-14)
    fitted = truncated_poisson_pmf(mu, k, upto)
    empirical = np.zeros(len(fitted))
    for d, c in hist.items():
        empirical[d - k] = c / total
    tv = 0.5 * float(np.abs(empirical - fitted).sum())
    return DegreeFit(k=k, mu_hat=mu, histogram=hist, tv_distance=min(1.0, tv),
                     degenerate=degenerate, fitted=fitted)
