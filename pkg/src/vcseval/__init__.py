"""Temporal clustering evaluation for timestamped prediction streams.

Instance metrics (accuracy-family, AP, AU-ROC) see only how many errors
a model makes; the volatility-cluster statistic (VCS) also sees when
they happen. This package computes both, provides a differentiable
variant usable as a training penalty, and ships generators plus a CLI
for synthetic experiments.
"""

from .errors import (
    AllZeroWeights,
    DegenerateDistances,
    DegenerateSplit,
    EmptyInput,
    EmptySet,
    InsufficientSet,
    LengthMismatch,
    MalformedRecord,
    NonFiniteLoss,
    NoPositives,
    OneClassOnly,
    SpecViolation,
    TooFewDisagreements,
    UnsortedInput,
    VcsEvalError,
)
from .event_stream import (
    DisagreementSet,
    EvalStream,
    PredictionRecord,
    chronological_split,
    disagreement_set,
    parse_records,
    serialize_records,
    threshold_labels,
)
from .instance_metrics import (
    AGGREGATORS,
    InstanceMetricSpec,
    auroc,
    average_precision,
    hamming_disagreement,
    instance_metric,
)
from .pattern_gen import (
    DriftDataset,
    DriftSpec,
    PatternSpec,
    generate_drift_dataset,
    generate_pattern,
)
from .soft_vca import (
    SoftConfig,
    SoftTrial,
    finite_difference_check,
    soft_nn_distance,
    soft_nn_gradient,
    soft_t,
    vca_penalty,
    weighted_soft_t,
)
from .toy_trainer import (
    EvalSummary,
    LossBreakdown,
    ToyModel,
    TrainConfig,
    combined_loss,
    evaluate_model,
    history_csv,
    train,
)
from .vcs import (
    VcsConfig,
    VcsResult,
    VcsTrial,
    disg_distance_sum,
    nn_distance,
    random_reference_sum,
    t_statistic,
    vcs,
)

__version__ = "0.1.0"
