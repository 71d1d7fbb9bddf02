"""Variable-precision rough set toolkit for driving-risk classification.

The pipeline: simulate raw near-crash events, quantize them into discrete
attribute levels, reduce the attribute set under a precision threshold
beta, weight the surviving attributes by information gain, extract belief
rules, and classify new events against a kinematic TTC baseline.
"""

from .datagen import SimConfig, generate, load_sim_config, trigger_filter
from .decision_table import DecisionTable, Partition, inclusion_degree, partition
from .errors import (
    CapacityError,
    ConfigError,
    DegenerateDataError,
    ModelFormatError,
    SchemaMismatchError,
)
from .evaluation import (
    ComparisonReport,
    ConfusionCounts,
    MethodEval,
    MethodRow,
    Rates,
    RocCurve,
    compare_models,
    confusion,
    level_matrix,
    rates,
    render_report_csv,
    render_report_text,
    render_roc_csv,
    roc_auc,
)
from .kinematics import (
    NOT_CLOSING,
    CarFollowState,
    VehicleFootprint,
    safety_distance,
    ttc,
    ttc_baseline_classify,
    zone_overlap,
)
from .quantize import (
    QuantizedRecord,
    RawEvent,
    RiskLevel,
    quantize_event,
    read_raw_csv,
    read_quantized_csv,
    records_to_table,
    risk_label,
    write_raw_csv,
    write_quantized_csv,
)
from .reduct import find_all_reducts, find_reduct_greedy, is_beta_reduct
from .rules import (
    Prediction,
    Rule,
    VprsModel,
    classify,
    classify_batch,
    extract_rules,
    load_model,
    save_model,
    train_model,
)
from .vprs import (
    VprsParams,
    beta_bound,
    classification_quality,
    lower_approx,
    upper_approx,
)
from .weights import attribute_weights, conditional_entropy, entropy, significance

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CarFollowState",
    "ComparisonReport",
    "ConfigError",
    "ConfusionCounts",
    "DecisionTable",
    "DegenerateDataError",
    "MethodEval",
    "MethodRow",
    "ModelFormatError",
    "NOT_CLOSING",
    "Partition",
    "Prediction",
    "QuantizedRecord",
    "Rates",
    "RawEvent",
    "RiskLevel",
    "RocCurve",
    "Rule",
    "SchemaMismatchError",
    "SimConfig",
    "VehicleFootprint",
    "VprsModel",
    "VprsParams",
    "attribute_weights",
    "beta_bound",
    "classification_quality",
    "classify",
    "classify_batch",
    "compare_models",
    "conditional_entropy",
    "confusion",
    "entropy",
    "extract_rules",
    "find_all_reducts",
    "find_reduct_greedy",
    "generate",
    "inclusion_degree",
    "is_beta_reduct",
    "level_matrix",
    "load_model",
    "load_sim_config",
    "lower_approx",
    "partition",
    "quantize_event",
    "rates",
    "read_quantized_csv",
    "read_raw_csv",
    "records_to_table",
    "render_report_csv",
    "render_report_text",
    "render_roc_csv",
    "risk_label",
    "roc_auc",
    "safety_distance",
    "save_model",
    "significance",
    "train_model",
    "trigger_filter",
    "ttc",
    "ttc_baseline_classify",
    "upper_approx",
    "write_quantized_csv",
    "write_raw_csv",
    "zone_overlap",
    "__version__",
]
