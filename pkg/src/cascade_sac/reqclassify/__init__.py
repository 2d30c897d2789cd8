"""Security-requirement classifier: TF-IDF features, SMOTE, random forest, cross-project evaluation."""

from .data import Label, RequirementRecord, load_dataset
from .evaluate import LopoReport, PipelineConfig, lopo_eval, section_eval, train_pipeline
from .forest import ForestModel, ForestParams, model_from_json, model_to_json, predict, train_forest
from .metrics import EvalMetrics, confusion_metrics, f_measure, macro_average, round_half_up
from .smote import smote
from .text import FeatureSpace, fit_feature_space, tokenize, transform, vectorize
