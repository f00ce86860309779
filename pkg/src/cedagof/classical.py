"""Baseline goodness-of-fit procedures against a fitted Normal.

Shapiro-Wilk uses Royston's (1995, AS R94) polynomial approximations for
both the coefficients and the p-value. The exact definition of the weights
is ``a = m^T V^-1 / ||V^-1 m||`` with ``m`` the expected standard normal
order statistics and ``V`` their covariance matrix; Royston's formulas
approximate that vector without ever forming ``V``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special, stats

from .ingest import Sample, summarize
from .mimicry import row_generator


@dataclass(frozen=True)
class TestResult:
    name: str
    statistic: float
    p_value: float
    aux: float | None = None
    warnings: tuple[str, ...] = field(default=())

    __test__ = False  # not a pytest class

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "aux": self.aux,
            "warnings": list(self.warnings),
        }


def _fit(s: Sample, mean: float | None, sd: float | None) -> tuple[float, float]:
    st = summarize(s)
    mean = st.mean if mean is None else mean
    sd = st.sd if sd is None else sd
    if not sd > 0:
        raise ValueError("zero variance: the fitted Normal is degenerate")
    return mean, sd


# ---------------------------------------------------------------- Shapiro-Wilk

_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)


def _poly(c, x):
    return sum(ci * x**i for i, ci in enumerate(c))


def shapiro_wilk_coefficients(n: int) -> np.ndarray:
    """Antisymmetric weights a_1..a_n (a_1 < 0) with unit Euclidean norm."""
    if n < 3:
        raise ValueError("Shapiro-Wilk needs n >= 3")
    if n == 3:
        a = np.array([-math.sqrt(0.5), 0.0, math.sqrt(0.5)])
        return a
    i = np.arange(1, n + 1)
    m = special.ndtri((i - 0.375) / (n + 0.25))
    summ2 = float(np.sum(m * m))
    ssumm2 = math.sqrt(summ2)
    rsn = 1.0 / math.sqrt(n)
    an = m[-1] / ssumm2 + _poly(_C1, rsn)
    if n > 5:
        an1 = m[-2] / ssumm2 + _poly(_C2, rsn)
        phi = (summ2 - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        a = m / math.sqrt(phi)
        a[-1], a[0] = an, -an
        a[-2], a[1] = an1, -an1
    else:
        phi = (summ2 - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        a = m / math.sqrt(phi)
        a[-1], a[0] = an, -an
    return a


def shapiro_wilk(s: Sample) -> TestResult:
    """Shapiro-Wilk W and its Royston p-value; supports 3 <= n <= 5000."""
    n = s.n
    if not 3 <= n <= 5000:
        raise ValueError(f"Shapiro-Wilk supports 3 <= n <= 5000, got {n}")
    x = s.values
    xc = x - x.mean()
    ssq = float(np.dot(xc, xc))
    if ssq == 0.0 or x[0] == x[-1]:
        raise ValueError("zero variance")
    a = shapiro_wilk_coefficients(n)
    ac = a - a.mean()
    # squared correlation form; equal to (sum a_i x_(i))^2 / SSQ for unit-norm a
    num = float(np.dot(ac, xc)) ** 2
    w = min(num / (float(np.dot(ac, ac)) * ssq), 1.0)
    return TestResult("shapiro-wilk", w, _sw_pvalue(w, n))


def _sw_pvalue(w: float, n: int) -> float:
    if n == 3:
        p = 6.0 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        return min(max(p, 0.0), 1.0)
    w1 = 1.0 - w
    if w1 <= 0.0:
        return 1.0
    y = math.log(w1)
    if n <= 11:
        gamma = _poly(_G, n)
        if y >= gamma:
            return 1e-99
        y = -math.log(gamma - y)
        mu = _poly(_C3, n)
        sigma = math.exp(_poly(_C4, n))
    else:
        ln = math.log(n)
        mu = _poly(_C5, ln)
        sigma = math.exp(_poly(_C6, ln))
    return float(special.ndtr(-(y - mu) / sigma))


# ------------------------------------------------------------ Pearson chi-square

def moore_bins(n: int) -> int:
    """ceiling(2 n^(2/5))."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.ceil(2 * n ** 0.4)


def pearson_chisq(
    s: Sample,
    K: int | None = None,
    mean: float | None = None,
    sd: float | None = None,
    df_correction: bool = False,
) -> TestResult:
    """Pearson chi-squared over K equal-probability bins of the fitted Normal.

    ``aux`` carries the degrees of freedom: K - 1, or K - 3 with
    ``df_correction`` to account for the two estimated parameters.
    """
    n = s.n
    K = moore_bins(n) if K is None else K
    if K < 2:
        raise ValueError("K must be at least 2")
    expected = n / K
    if expected < 1:
        raise ValueError(f"expected count {expected:.3g} < 1 per bin; use K <= {n}")
    mean, sd = _fit(s, mean, sd)
    u = special.ndtr((s.values - mean) / sd)
    idx = np.minimum(np.floor(K * u).astype(np.int64), K - 1)
    observed = np.bincount(idx, minlength=K)
    stat = float(np.sum((observed - expected) ** 2) / expected)
    df = K - 3 if df_correction else K - 1
    if df < 1:
        raise ValueError(f"K={K} leaves no degrees of freedom")
    p = float(stats.chi2.sf(stat, df))
    return TestResult("pearson-chisq", stat, p, aux=float(df))


# ----------------------------------------------------------- Kolmogorov-Smirnov

def ks_statistic(x: np.ndarray, cdf_values: np.ndarray) -> float:
    n = x.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - cdf_values), np.max(cdf_values - (i - 1) / n)))


def kolmogorov_sf(lam: float) -> float:
    """P(K > lam) for the limiting Kolmogorov distribution."""
    if lam <= 0:
        return 1.0
    if lam < 1.18:
        # theta-function form converges fast for small arguments
        z = -(math.pi**2) / (8 * lam * lam)
        w = math.sqrt(2 * math.pi) / lam
        cdf = w * sum(math.exp((2 * k - 1) ** 2 * z) for k in range(1, 8))
        return min(max(1.0 - cdf, 0.0), 1.0)
    total = 0.0
    for k in range(1, 101):
        term = math.exp(-2 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-17:
            break
    return min(max(2 * total, 0.0), 1.0)


def ks_test(
    s: Sample,
    mean: float | None = None,
    sd: float | None = None,
    method: str = "asymptotic",
    n_sims: int = 2000,
    seed: int = 0,
) -> TestResult:
    """One-sample K-S test against a Normal (fitted unless given).

    ``method="montecarlo"`` replaces the asymptotic series with the share of
    ``n_sims`` seeded null samples whose D is at least as large. ``aux``
    holds the Stephens-scaled statistic.
    """
    mean, sd = _fit(s, mean, sd)
    x = s.values
    d = ks_statistic(x, special.ndtr((x - mean) / sd))
    warn = ("ties should not be present",) if np.any(np.diff(x) == 0) else ()
    n = s.n
    if method == "asymptotic":
        p = kolmogorov_sf(math.sqrt(n) * d)
    elif method == "montecarlo":
        hits = 0
        for r in range(n_sims):
            u = np.sort(row_generator(seed, r + 1).random(n))
            if ks_statistic(u, u) >= d:
                hits += 1
        p = (hits + 1) / (n_sims + 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TestResult("kolmogorov-smirnov", d, p, aux=stephens_dstar(d, n), warnings=warn)


def stephens_dstar(D: float, n: int) -> float:
    """D * (sqrt(n) - 0.01 + 0.85 sqrt(n)).

    This is the form we were given; the commonly quoted modification is
    D * (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
    """
    if D < 0 or n < 1:
        raise ValueError("need D >= 0 and n >= 1")
    r = math.sqrt(n)
    return D * (r - 0.01 + 0.85 * r)


# --------------------------------------------------------------------- Q-Q data

@dataclass(frozen=True, eq=False)
class QQData:
    theoretical: np.ndarray
    sample: np.ndarray
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.theoretical.tolist(), self.sample.tolist()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("position,theoretical,sample,lo,hi\n")
        for i, (t, v) in enumerate(self.points, start=1):
            lo = "" if self.lo is None else repr(float(self.lo[i - 1]))
            hi = "" if self.hi is None else repr(float(self.hi[i - 1]))
            buf.write(f"{i},{t!r},{v!r},{lo},{hi}\n")
        return buf.getvalue()


def qq_data(
    s: Sample,
    mean: float | None = None,
    sd: float | None = None,
    envelope_sims: int = 0,
    seed: int = 0,
    level: float = 0.95,
) -> QQData:
    """Normal Q-Q coordinates at plotting positions (i - 0.5) / n.

    With ``envelope_sims > 0`` a pointwise band is added from the sorted
    order statistics of that many seeded samples from the fitted Normal.
    """
    mean, sd = _fit(s, mean, sd)
    n = s.n
    q = mean + sd * special.ndtri((np.arange(1, n + 1) - 0.5) / n)
    lo = hi = None
    if envelope_sims > 0:
        sims = np.empty((envelope_sims, n))
        for r in range(envelope_sims):
            sims[r] = np.sort(mean + sd * row_generator(seed, r + 1).standard_normal(n))
        alpha = (1 - level) / 2
        lo = np.quantile(sims, alpha, axis=0)
        hi = np.quantile(sims, 1 - alpha, axis=0)
    return QQData(q, s.values.copy(), lo, hi)
