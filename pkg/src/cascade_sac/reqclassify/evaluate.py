"""Training pipeline and cross-project (leave-one-project-out) evaluation."""

from __future__ import annotations

import dataclasses
import json
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .data import Label, RequirementRecord, check_unique
from .forest import ForestModel, ForestParams, train_forest
from .metrics import METRIC_NAMES, EvalMetrics, confusion_from_labels, macro_average
from .smote import DEFAULT_K, smote
from .text import DEFAULT_MAX_TERMS, FeatureSpace, fit_feature_space, transform


@dataclasses.dataclass(frozen=True)
class PipelineConfig:
    params: ForestParams = ForestParams()
    max_terms: int = DEFAULT_MAX_TERMS
    k: int = DEFAULT_K
    threshold: float = 0.5
    n_jobs: int = 1


def _labeled(records: Iterable[RequirementRecord]) -> list[RequirementRecord]:
    records = list(records)
    unlabeled = [r for r in records if r.label is Label.UNLABELED]
    if unlabeled:
        r = unlabeled[0]
        raise ValueError(f"{len(unlabeled)} unlabeled record(s), first {r.project}/{r.req_id}")
    return records


def train_pipeline(records: Iterable[RequirementRecord], config: PipelineConfig = PipelineConfig()):
    """Fit TF-IDF features, balance with SMOTE and grow the forest.

    Returns ``(model, feature_space)``.
    """
    train = _labeled(records)
    y = np.array([r.is_sec for r in train], dtype=np.int64)
    if len(set(y.tolist())) != 2:
        raise ValueError("training data must contain both sec and nonsec requirements")
    fs = fit_feature_space([r.text for r in train], config.max_terms)
    X = transform(fs, [r.text for r in train])
    Xb, yb = smote(X, y, config.k, config.params.seed)
    model = train_forest(Xb, yb, config.params, n_jobs=config.n_jobs)
    return model, fs


def predict_records(model: ForestModel, fs: FeatureSpace, records: Sequence[RequirementRecord], threshold: float = 0.5):
    """Scores and sec/nonsec booleans for each record."""
    X = transform(fs, [r.text for r in records])
    scores = model.scores(X)
    return scores, scores >= threshold


def _is_sec(label) -> bool:
    if isinstance(label, Label):
        return label is Label.SEC
    if isinstance(label, str):
        return label == Label.SEC.value
    return bool(label)


def section_eval(gold: Sequence[RequirementRecord], predicted: Sequence) -> EvalMetrics:
    """Confusion over (project, section) groups: a section is positive if any requirement is sec."""
    if len(gold) != len(predicted):
        raise ValueError("one prediction per gold record required")
    gold_pos: dict[tuple[str, str], bool] = {}
    pred_pos: dict[tuple[str, str], bool] = {}
    for r, p in zip(gold, predicted):
        key = (r.project, r.section)
        gold_pos[key] = gold_pos.get(key, False) or r.is_sec
        pred_pos[key] = pred_pos.get(key, False) or _is_sec(p)
    keys = sorted(gold_pos)
    return confusion_from_labels([gold_pos[k] for k in keys], [pred_pos[k] for k in keys])


def lopo_folds(records: Sequence[RequirementRecord]) -> Iterator[tuple[str, list, list]]:
    projects = sorted({r.project for r in records})
    for p in projects:
        yield p, [r for r in records if r.project != p], [r for r in records if r.project == p]


@dataclasses.dataclass(frozen=True)
class FoldResult:
    project: str
    metrics: EvalMetrics
    predicted: tuple[bool, ...]
    scores: tuple[float, ...]
    train_projects: tuple[str, ...]
    vocab: tuple[str, ...]
    section_metrics: Optional[EvalMetrics] = None


@dataclasses.dataclass(frozen=True)
class LopoReport:
    folds: tuple[FoldResult, ...]
    config: PipelineConfig
    sections: bool = False

    def macro(self) -> dict[str, float]:
        return {m: macro_average(getattr(f.metrics, m) for f in self.folds) for m in METRIC_NAMES}

    def section_macro(self) -> dict[str, float]:
        return {m: macro_average(getattr(f.section_metrics, m) for f in self.folds) for m in METRIC_NAMES}

    def to_dict(self) -> dict:
        p = self.config.params
        out: dict = {
            "config": {
                "seed": p.seed,
                "n_trees": p.n_trees,
                "max_depth": p.max_depth,
                "min_samples_leaf": p.min_samples_leaf,
                "max_terms": self.config.max_terms,
                "k": self.config.k,
                "threshold": self.config.threshold,
            },
            "projects": [{"project": f.project, "n": f.metrics.total, **f.metrics.to_dict()} for f in self.folds],
            "macro": self.macro(),
        }
        if self.sections:
            out["sections"] = {
                "projects": [
                    {"project": f.project, "n": f.section_metrics.total, **f.section_metrics.to_dict()}
                    for f in self.folds
                ],
                "macro": self.section_macro(),
            }
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def rows(self, level: str = "requirements") -> list[list]:
        """Delimited-table rows (header first) for one level."""
        header = ["project", "n", "tp", "fp", "tn", "fn", *METRIC_NAMES]
        rows = [header]
        attr = "metrics" if level == "requirements" else "section_metrics"
        for f in self.folds:
            d = getattr(f, attr).to_dict()
            rows.append([f.project, getattr(f, attr).total, d["tp"], d["fp"], d["tn"], d["fn"],
                         *(d[m] for m in METRIC_NAMES)])
        macro = self.macro() if level == "requirements" else self.section_macro()
        rows.append(["macro", "", "", "", "", "", *(macro[m] for m in METRIC_NAMES)])
        return rows

    def to_text(self) -> str:
        p = self.config.params
        lines = [
            f"leave-one-project-out: {len(self.folds)} projects, seed {p.seed}, "
            f"{p.n_trees} trees, k={self.config.k}, threshold {self.config.threshold}"
        ]
        levels = ["requirements"] + (["sections"] if self.sections else [])
        for level in levels:
            lines.append("")
            lines.append(f"[{level}]")
            for row in self.rows(level):
                cells = [f"{row[0]:<12}"] + [f"{c!s:>10}" for c in row[1:]]
                lines.append("".join(cells).rstrip())
        return "\n".join(lines) + "\n"


def lopo_eval(
    records: Iterable[RequirementRecord],
    config: PipelineConfig = PipelineConfig(),
    sections: bool = False,
) -> LopoReport:
    """Train on all projects but one, test on the held-out one, for every project.

    Features and SMOTE neighbours come from the training fold only.
    """
    records = _labeled(records)
    check_unique(records)
    if len({r.project for r in records}) < 2:
        raise ValueError("leave-one-project-out needs at least two projects")
    folds = []
    for project, train, test in lopo_folds(records):
        if len({r.is_sec for r in train}) != 2:
            raise ValueError(f"fold holding out {project}: training set has a single class")
        model, fs = train_pipeline(train, config)
        scores, predicted = predict_records(model, fs, test, config.threshold)
        metrics = confusion_from_labels([r.is_sec for r in test], predicted.tolist())
        folds.append(
            FoldResult(
                project=project,
                metrics=metrics,
                predicted=tuple(bool(p) for p in predicted),
                scores=tuple(float(s) for s in scores),
                train_projects=tuple(sorted({r.project for r in train})),
                vocab=fs.vocab,
                section_metrics=section_eval(test, predicted.tolist()) if sections else None,
            )
        )
    return LopoReport(tuple(folds), config, sections)
