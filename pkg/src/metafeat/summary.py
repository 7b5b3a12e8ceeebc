"""
Statistical summarization: a variable-length distribution -> 63 fixed statistics.

Conventions (kept stable so feature columns mean the same thing across runs):
  * quantiles use linear interpolation between order statistics (numpy "linear");
  * stdev / variance / moments are population (biased) moments, except the
    "unbiased" kurtosis variants which use the sample-size corrected estimator;
  * geometric and harmonic means are taken on values shifted by (1 - min) when min <= 0;
  * entropy shifts negative distributions by -min, normalizes to sum 1, uses log2
    and 0 log 0 = 0; normalized entropy is H / log2|x| and 1.0 when |x| = 1;
  * ratios whose denominator vanishes (zero variance, zero mean, Q1 + Q3 = 0) are 0;
  * the mode is taken after rounding to 8 significant digits, ties -> smallest value;
  * a vector whose min and max agree to a relative CONSTANT_RTOL is treated as constant.
    The slack covers summation-order roundoff such as pagerank on a regular graph;
    any wider spread keeps its shape statistics.
The input is sorted first, so every statistic is independent of element order.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# relative min/max gap below which a distribution is treated as constant
CONSTANT_RTOL = 1e-12
_IQR_ALPHAS = (1.5, 3.0)
_STD_ALPHAS = (1.0, 2.0, 3.0)
_SIDES = ("lb", "ub", "both")


def _alpha_tag(alpha: float) -> str:
    return f"{alpha:g}".replace(".", "_")


def _canonical_names() -> Tuple[str, ...]:
    names = [
        "min", "max", "median", "geometric_mean", "harmonic_mean", "mean", "stdev", "variance",
        "skewness", "pearson_kurtosis", "pearson_kurtosis_unbiased", "fisher_kurtosis",
        "fisher_kurtosis_unbiased", "quartile_dispersion", "median_abs_deviation", "avg_abs_deviation",
        "coeff_variation", "efficiency_ratio", "variance_to_mean", "snr", "entropy", "normalized_entropy",
        "gini", "q1", "q3", "iqr",
    ]
    names += [f"outlier_lb_{_alpha_tag(a)}" for a in _IQR_ALPHAS]
    names += [f"outlier_ub_{_alpha_tag(a)}" for a in _IQR_ALPHAS]
    names += [f"outlier_count_{_alpha_tag(a)}_{s}" for a in _IQR_ALPHAS for s in _SIDES]
    names += [f"outlier_frac_{_alpha_tag(a)}_{s}" for a in _IQR_ALPHAS for s in _SIDES]
    names += [f"std_outlier_count_{_alpha_tag(a)}_{s}" for a in _STD_ALPHAS for s in _SIDES]
    names += [f"std_outlier_frac_{_alpha_tag(a)}_{s}" for a in _STD_ALPHAS for s in _SIDES]
    names += ["mode", "mode_count", "mode_fraction"]
    return tuple(names)


@dataclass(frozen=True)
class SummaryFunctionSet:
    """Ordered list of named statistics applied to each distribution."""

    names: Tuple[str, ...]

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


SIGMA = SummaryFunctionSet(_canonical_names())
assert len(SIGMA) == 63


def round_significant(values: np.ndarray, digits: int = 8) -> np.ndarray:
    fmt = f"{{:.{digits - 1}e}}"
    return np.array([float(fmt.format(v)) for v in values.tolist()], dtype=np.float64)


def _safe_div(num: float, den: float) -> float:
    return num / den if den != 0 else 0.0


def compute_statistics(values: Sequence[float]) -> Dict[str, float]:
    """All 63 statistics of a non-empty vector, keyed by canonical name."""
    x = np.sort(np.asarray(values, dtype=np.float64))
    n = x.size
    if n == 0:
        raise ValueError("cannot summarize an empty distribution")
    stats: Dict[str, float] = {}

    lo, hi = float(x[0]), float(x[-1])
    constant = bool(np.isclose(lo, hi, rtol=CONSTANT_RTOL, atol=0.0))
    if constant:
        x = np.full(n, lo)
        hi = lo
    median = float(np.median(x))
    stats["min"], stats["max"], stats["median"] = lo, hi, median

    y = x + (1.0 - lo) if lo <= 0 else x
    stats["geometric_mean"] = float(np.exp(np.mean(np.log(y))))
    stats["harmonic_mean"] = float(n / np.sum(1.0 / y))

    mean = lo if constant else float(np.mean(x))
    dev = np.zeros_like(x) if constant else x - mean
    var = float(np.mean(dev ** 2))
    std = float(np.sqrt(var))
    m3 = float(np.mean(dev ** 3))
    m4 = float(np.mean(dev ** 4))
    stats["mean"], stats["stdev"], stats["variance"] = mean, std, var

    if var > 0:
        skew = m3 / var ** 1.5
        pearson = m4 / var ** 2
        fisher = pearson - 3.0
    else:
        skew = pearson = fisher = 0.0
    if var > 0 and n > 3:
        fisher_u = ((n + 1) * fisher + 6.0) * (n - 1) / ((n - 2) * (n - 3))
        pearson_u = fisher_u + 3.0
    else:
        fisher_u = pearson_u = 0.0
    stats["skewness"] = skew
    stats["pearson_kurtosis"], stats["pearson_kurtosis_unbiased"] = pearson, pearson_u
    stats["fisher_kurtosis"], stats["fisher_kurtosis_unbiased"] = fisher, fisher_u

    q1, q3 = (float(q) for q in np.quantile(x, [0.25, 0.75]))
    iqr = q3 - q1
    stats["quartile_dispersion"] = _safe_div(iqr, q3 + q1)
    stats["median_abs_deviation"] = float(np.median(np.abs(x - median)))
    stats["avg_abs_deviation"] = float(np.mean(np.abs(dev)))
    stats["coeff_variation"] = _safe_div(std, mean)
    stats["efficiency_ratio"] = _safe_div(var, mean ** 2)
    stats["variance_to_mean"] = _safe_div(var, mean)
    stats["snr"] = _safe_div(mean ** 2, var)

    p = x - lo if lo < 0 else x
    total = float(np.sum(p))
    if total > 0:
        p = p / total
        nz = p[p > 0]
        entropy = float(-np.sum(nz * np.log2(nz)))
    else:
        entropy = 0.0
    stats["entropy"] = entropy
    stats["normalized_entropy"] = entropy / np.log2(n) if n > 1 else 1.0

    ranks = np.arange(1, n + 1, dtype=np.float64)
    stats["gini"] = _safe_div(float(np.sum((2 * ranks - n - 1) * x)), n * float(np.sum(x)))

    stats["q1"], stats["q3"], stats["iqr"] = q1, q3, iqr
    for a in _IQR_ALPHAS:
        stats[f"outlier_lb_{_alpha_tag(a)}"] = q1 - a * iqr
    for a in _IQR_ALPHAS:
        stats[f"outlier_ub_{_alpha_tag(a)}"] = q3 + a * iqr
    _outlier_block(stats, x, "outlier", [(a, q1 - a * iqr, q3 + a * iqr) for a in _IQR_ALPHAS])
    _outlier_block(stats, x, "std_outlier", [(a, mean - a * std, mean + a * std) for a in _STD_ALPHAS])

    rounded = round_significant(x)
    uniq, counts = np.unique(rounded, return_counts=True)
    best = int(np.argmax(counts))
    stats["mode"] = float(uniq[best])
    stats["mode_count"] = float(counts[best])
    stats["mode_fraction"] = float(counts[best]) / n
    return stats


def _outlier_block(stats: Dict[str, float], x: np.ndarray, prefix: str, bounds) -> None:
    n = x.size
    counts = {}
    for a, lb, ub in bounds:
        below = float(np.sum(x < lb))
        above = float(np.sum(x > ub))
        counts[a] = (below, above, below + above)
    for a, _, _ in bounds:
        for side, c in zip(_SIDES, counts[a]):
            stats[f"{prefix}_count_{_alpha_tag(a)}_{side}"] = c
    for a, _, _ in bounds:
        for side, c in zip(_SIDES, counts[a]):
            stats[f"{prefix}_frac_{_alpha_tag(a)}_{side}"] = c / n


def summarize(values: Sequence[float], sigma: SummaryFunctionSet = SIGMA,
              log: Optional[List[str]] = None, label: str = "") -> np.ndarray:
    """
    Apply `sigma` to a distribution. Non-finite results are replaced by 0 and
    the replaced statistic names are appended to `log`.
    """
    stats = compute_statistics(values)
    out = np.array([stats[name] for name in sigma.names], dtype=np.float64)
    bad = ~np.isfinite(out)
    if bad.any():
        replaced = [sigma.names[i] for i in np.flatnonzero(bad)]
        logger.warning(f"{label or 'distribution'}: non-finite {replaced} replaced by 0")
        if log is not None:
            log.extend(f"{label}.{name}" if label else name for name in replaced)
        out[bad] = 0.0
    return out
