"""Curriculum training driven by linguistic complexity indices.

The pipeline: extract per-sample complexity indices from a text dataset,
standardize them, estimate how much each index matters by relating it to
per-sample validation loss, fold the important indices into a difficulty
score, and let that score steer training through weighting or subset
curricula.  Evaluation and analysis tools report accuracy across the
difficulty range and how index importance shifts over a run.
"""

from .corpus import (
    Dataset,
    IndexMatrix,
    Sample,
    concatenate_pair_indices,
    load_dataset,
    load_index_matrix,
    standardize,
    write_index_matrix,
)
from .difficulty import (
    DifficultyScore,
    aggregate_max,
    aggregate_weighted,
    load_difficulty_csv,
    loss_difficulty,
    write_difficulty_csv,
)
from .errors import (
    AlignmentError,
    ArgumentError,
    CoverageError,
    CurlearnError,
    DegenerateBatchError,
    DegenerateInputError,
    ParseError,
    UndefinedTrendError,
    UnsupportedInputError,
    ValidationError,
)
from .evaluation import (
    BinReport,
    accuracy_trend_slope,
    assign_bins,
    bin_edges,
    binned_balanced_accuracy,
    write_bin_report_csv,
)
from .filtering import (
    TrendFilterResult,
    complete_linkage_clusters,
    correlation_distance,
    correlation_matrix,
    filter_by_trend,
    select_representatives,
)
from .importance import (
    ImportanceVector,
    best_single_index,
    estimate_rho_correlation,
    estimate_rho_lasso,
    lasso_objective,
    pearson,
)
from .lexical import (
    SOPHISTICATION_COLUMNS,
    TAG_COLUMNS,
    TOKEN_ONLY_COLUMNS,
    FrequencyList,
    LexicalOptions,
    PosRecord,
    SophisticationRecord,
    TokenizedText,
    TtrRecord,
    compute_index_matrix,
    load_frequency_list,
    load_tagged,
    pos_indices,
    sophistication_counts,
    tokenize,
    ttr_family,
)
from .schedulers import (
    CurriculumConfig,
    subset_competence,
    subset_data_selection,
    subset_sampling,
    weight_gaussian,
    weight_neg_sigmoid,
    weight_sigmoid,
    weighted_mean_loss,
)
from .trainer import (
    ModelParams,
    TrainConfig,
    TrainRecord,
    featurize,
    load_checkpoint,
    load_loss_traces,
    loss_and_grad,
    per_sample_losses,
    predict,
    record_from_checkpoint,
    save_checkpoint,
    train,
    validate,
    write_loss_traces,
    write_metric_history,
    write_rho_trajectory,
)
from .trajectory import (
    RhoTrajectory,
    cluster_trajectories,
    load_rho_trajectory,
    max_change_indices,
    stage_means,
    top_indices_per_stage,
    trajectory_distance_matrix,
)

__version__ = "0.1.0"
