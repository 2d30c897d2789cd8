"""Confusion counts, precision/recall and F-beta scores."""

from __future__ import annotations

import dataclasses
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable


def round_half_up(x: float, ndigits: int = 1) -> float:
    """Round the shortest decimal form of ``x``, ties away from zero."""
    q = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def f_measure(p: float, r: float, beta: float = 1.0) -> float:
    """Weighted harmonic mean (1+b^2)pr / (b^2 p + r); 0 when the denominator is 0."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    b2 = beta * beta
    denom = b2 * p + r
    if denom == 0:
        return 0.0
    return (1 + b2) * p * r / denom


@dataclasses.dataclass(frozen=True)
class EvalMetrics:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    # proportions in [0, 1]
    @property
    def p_accuracy(self) -> float:
        return (self.tp + self.tn) / self.total

    @property
    def p_precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def p_recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    # percentages, unrounded
    @property
    def accuracy(self) -> float:
        return 100 * self.p_accuracy

    @property
    def precision(self) -> float:
        return 100 * self.p_precision

    @property
    def recall(self) -> float:
        return 100 * self.p_recall

    @property
    def f1(self) -> float:
        return 100 * f_measure(self.p_precision, self.p_recall, 1.0)

    @property
    def f_half(self) -> float:
        return 100 * f_measure(self.p_precision, self.p_recall, 0.5)

    @property
    def f2(self) -> float:
        return 100 * f_measure(self.p_precision, self.p_recall, 2.0)

    def scores(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def to_dict(self) -> dict:
        out: dict = {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn}
        out.update({k: round_half_up(v) for k, v in self.scores().items()})
        return out


METRIC_NAMES = ("accuracy", "precision", "recall", "f1", "f_half", "f2")


def confusion_metrics(tp: int, fp: int, tn: int, fn: int) -> EvalMetrics:
    if min(tp, fp, tn, fn) < 0:
        raise ValueError("confusion counts must be non-negative")
    if tp + fp + tn + fn == 0:
        raise ValueError("no predictions to score")
    return EvalMetrics(tp, fp, tn, fn)


def confusion_from_labels(gold: Iterable[bool], predicted: Iterable[bool]) -> EvalMetrics:
    tp = fp = tn = fn = 0
    for g, p in zip(gold, predicted, strict=True):
        if g and p:
            tp += 1
        elif p:
            fp += 1
        elif g:
            fn += 1
        else:
            tn += 1
    return confusion_metrics(tp, fp, tn, fn)


def macro_average(values: Iterable[float]) -> float:
    """Unweighted mean, reported to one decimal."""
    values = list(values)
    if not values:
        raise ValueError("nothing to average")
    return round_half_up(sum(values) / len(values))
