"""Confusion-matrix metrics and the two-sample t-test for run comparisons.

Positive class is SERIOUS_INCIDENT throughout. Zero-denominator
conventions: precision, recall, and F1 return 0 when undefined; MCC
returns 0 when any marginal factor is 0. p-values come from the
regularized incomplete beta function, computed here (no stats library).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .dataset import Label
from .errors import DataError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise DataError("confusion matrix counts must be non-negative")
        if self.total == 0:
            raise DataError("confusion matrix must count at least one pair")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricSample:
    accuracy: float
    f1: float
    mcc: float


@dataclass(frozen=True)
class TTestResult:
    t: float
    p: float
    df: float


def confusion(truth: Sequence[Label], pred: Sequence[Label]) -> ConfusionMatrix:
    if len(truth) != len(pred):
        raise DataError(
            f"length mismatch: {len(truth)} truth labels vs {len(pred)} predictions"
        )
    if not truth:
        raise DataError("cannot build a confusion matrix from empty lists")
    tp = fp = tn = fn = 0
    for t, p in zip(truth, pred):
        if p is Label.SERIOUS_INCIDENT:
            if t is Label.SERIOUS_INCIDENT:
                tp += 1
            else:
                fp += 1
        else:
            if t is Label.SERIOUS_INCIDENT:
                fn += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


def accuracy(cm: ConfusionMatrix) -> float:
    return (cm.tp + cm.tn) / cm.total


def precision(cm: ConfusionMatrix) -> float:
    denom = cm.tp + cm.fp
    return cm.tp / denom if denom else 0.0


def recall(cm: ConfusionMatrix) -> float:
    denom = cm.tp + cm.fn
    return cm.tp / denom if denom else 0.0


def f1(cm: ConfusionMatrix) -> float:
    denom = cm.tp + 0.5 * (cm.fp + cm.fn)
    return cm.tp / denom if denom else 0.0


def mcc(cm: ConfusionMatrix) -> float:
    """Matthews correlation coefficient in [-1, 1].

    The product under the radical is formed in exact integer arithmetic
    before the square root.
    """
    prod = (cm.tp + cm.fp) * (cm.tp + cm.fn) * (cm.tn + cm.fp) * (cm.tn + cm.fn)
    if prod == 0:
        return 0.0
    return (cm.tp * cm.tn - cm.fp * cm.fn) / math.sqrt(prod)


def metric_sample(cm: ConfusionMatrix) -> MetricSample:
    return MetricSample(accuracy=accuracy(cm), f1=f1(cm), mcc=mcc(cm))


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-sided unpaired Welch t-test.

    Degrees of freedom by Welch-Satterthwaite; the p-value is
    I_x(df/2, 1/2) with x = df / (df + t^2).

    Raises:
        DataError: fewer than 2 values on a side, or zero variance pooled
            across both sides.
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise DataError(f"need >= 2 values per side, got {na} and {nb}")
    ma = sum(a) / na
    mb = sum(b) / nb
    va = sum((x - ma) ** 2 for x in a) / (na - 1)
    vb = sum((x - mb) ** 2 for x in b) / (nb - 1)
    if va + vb == 0.0:
        raise DataError("zero variance: all pooled values identical")
    sa, sb = va / na, vb / nb
    se = math.sqrt(sa + sb)
    t = (ma - mb) / se
    df = (sa + sb) ** 2 / (
        (sa * sa / (na - 1) if na > 1 else 0.0)
        + (sb * sb / (nb - 1) if nb > 1 else 0.0)
    )
    return TTestResult(t=t, p=_student_t_two_sided_p(t, df), df=df)


def paired_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Two-sided paired t-test on per-index differences (sensitivity mode)."""
    if len(a) != len(b):
        raise DataError(f"paired test needs equal lengths, got {len(a)}, {len(b)}")
    n = len(a)
    if n < 2:
        raise DataError(f"need >= 2 pairs, got {n}")
    diffs = [x - y for x, y in zip(a, b)]
    md = sum(diffs) / n
    vd = sum((d - md) ** 2 for d in diffs) / (n - 1)
    if vd == 0.0:
        if md == 0.0:
            raise DataError("zero variance: all pooled values identical")
        return TTestResult(t=math.inf if md > 0 else -math.inf, p=0.0, df=n - 1)
    t = md / math.sqrt(vd / n)
    df = float(n - 1)
    return TTestResult(t=t, p=_student_t_two_sided_p(t, df), df=df)


def _student_t_two_sided_p(t: float, df: float) -> float:
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the continued fraction (modified Lentz method).

    Standard symmetry trick: the continued fraction converges fast for
    x < (a + 1) / (a + b + 2); otherwise evaluate 1 - I_{1-x}(b, a).
    """
    if not (a > 0 and b > 0):
        raise DataError(f"incomplete beta needs a, b > 0, got a={a}, b={b}")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _beta_cf(a: float, b: float, x: float, max_iter: int = 300) -> float:
    tiny = 1e-300
    eps = 1e-15
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise DataError(f"incomplete beta did not converge for a={a}, b={b}, x={x}")
