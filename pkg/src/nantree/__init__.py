"""Decision trees that treat missing values as a first-class concern.

Five strategies for handling missing feature values at split time and
prediction time, plus the instrumentation to compare them: censoring
mechanisms for benchmark construction, a cross-validated sweep harness,
and a Monte Carlo bias demonstration on a single fixed split.
"""

from .bench import (
    AGGREGATE_FOLD,
    ALL_STRATEGIES,
    CSV_HEADER,
    ExperimentConfig,
    ExperimentRecord,
    aggregate_records,
    default_q_grid,
    emit_csv,
    mean_excess_by_strategy,
    read_records,
    run_experiment,
    tune_depth,
)
from .bias import BiasScenario, StrategyBias, run_bias, simulate, theoretical_bound
from .censor import CensorSpec, apply_scenario, censor_im, censor_mcar
from .data import (
    Dataset,
    FeatureColumn,
    NantreeError,
    ParseError,
    ResponseColumn,
    Schema,
    SchemaError,
    ValidationError,
    load_csv,
    read_schema_file,
    save_csv,
    schema_for,
    stratified_kfold,
)
from .datasets import step_data, tree_structured_data
from .loss import LossKind, eval_loss, fit_leaf, loss_for
from .split import (
    MissingRoute,
    Partition,
    ScoredSplit,
    SplitConfig,
    Strategy,
    best_split,
    enumerate_candidates,
    score_binary,
    score_fractional,
    score_trinary,
)
from .tree import (
    Branch,
    Leaf,
    TrainConfig,
    Tree,
    TreeFormatError,
    deserialize,
    evaluate,
    predict,
    predict_row,
    render,
    serialize,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "AGGREGATE_FOLD",
    "ALL_STRATEGIES",
    "CSV_HEADER",
    "BiasScenario",
    "Branch",
    "CensorSpec",
    "Dataset",
    "ExperimentConfig",
    "ExperimentRecord",
    "FeatureColumn",
    "Leaf",
    "MissingRoute",
    "LossKind",
    "NantreeError",
    "ParseError",
    "Partition",
    "ResponseColumn",
    "Schema",
    "SchemaError",
    "ScoredSplit",
    "SplitConfig",
    "Strategy",
    "StrategyBias",
    "TrainConfig",
    "Tree",
    "TreeFormatError",
    "ValidationError",
    "aggregate_records",
    "apply_scenario",
    "best_split",
    "censor_im",
    "censor_mcar",
    "default_q_grid",
    "deserialize",
    "emit_csv",
    "enumerate_candidates",
    "eval_loss",
    "evaluate",
    "fit_leaf",
    "load_csv",
    "loss_for",
    "mean_excess_by_strategy",
    "predict",
    "predict_row",
    "read_records",
    "read_schema_file",
    "render",
    "run_bias",
    "run_experiment",
    "save_csv",
    "schema_for",
    "score_binary",
    "score_fractional",
    "score_trinary",
    "serialize",
    "simulate",
    "step_data",
    "stratified_kfold",
    "theoretical_bound",
    "train",
    "tree_structured_data",
    "tune_depth",
    "__version__",
]
