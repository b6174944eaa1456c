"""Gradient-free dynamic task weighting for multi-task training.

The heavy lifting lives in the compiled ``_core`` extension; this package
just re-exports it.
"""

from deepchest._core import (  # noqa: F401
    ComparisonReport,
    DeepchestError,
    DeltaMReport,
    DeltaMRow,
    EpochStats,
    Hyperparams,
    MultiTaskDataset,
    RunLog,
    SimState,
    SimTask,
    StlResult,
    Strategy,
    TaskEpoch,
    TaskProfile,
    WeightConfig,
    average_accuracy,
    binary_accuracy,
    cmd_compare,
    cmd_delta_m,
    cmd_gen_data,
    cmd_plot,
    cmd_simulate,
    delta_m_per_task,
    delta_m_total,
    generate_synthetic,
    init_weights,
    load_csv,
    normalize_pixels,
    run_comparison,
    run_sim,
    save_csv,
    split,
    strategy_from_name,
    train_mtl,
    train_stl,
    update_weights,
    weighted_total_loss,
    weights_for_epoch,
)

__version__ = "0.1.0"
