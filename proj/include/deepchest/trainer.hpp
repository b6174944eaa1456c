#ifndef DEEPCHEST_TRAINER_HPP
#define DEEPCHEST_TRAINER_HPP

#include <cstdint>
#include <vector>

#include "deepchest/controller.hpp"
#include "deepchest/data.hpp"
#include "deepchest/metrics.hpp"

namespace deepchest {

struct Hyperparams {
    std::size_t epochs = 20;
    std::size_t batch_size = 64;
    double learning_rate = 0.05;
    std::vector<std::size_t> hidden_dims = {32};
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    WeightConfig weight_cfg;
    Strategy strategy = Strategy::deepchest;
};

void validate_hyperparams(const Hyperparams& hp);

/// Everything one training run produced. Weights in epoch_stats are the
/// weights in force during that epoch (pre-update), so trajectories line up
/// with the losses they caused. final_weights is the update computed after
/// the last epoch; it never drives training. controller_seconds /
/// total_seconds support overhead accounting and stay out of serialized
/// reports.
struct RunLog {
    std::vector<EpochStats> epoch_stats;
    std::vector<double> final_val_losses;
    std::vector<double> final_val_accuracies;
    std::vector<double> stl_accuracies; // the init inputs; empty for single-task runs
    WeightVector final_weights;
    double controller_seconds = 0.0;
    double total_seconds = 0.0;
};

struct StlResult {
    double val_accuracy = 0.0;
    double val_loss = 0.0;
    RunLog log;
};

/// Trains a fresh single-head model (same trunk architecture) on one task
/// with weight 1.0. The split comes from (ds, hp.train_fraction, hp.seed);
/// the run's random stream from hp.seed + task_index, so every task trains
/// on identical rows but with its own stream.
StlResult train_stl(const MultiTaskDataset& ds, std::size_t task_index, const Hyperparams& hp);

/// The joint run: weights start from init_weights(stl_acc) (deepchest,
/// static_init) or all ones (uniform); each epoch trains on shuffled batches,
/// accumulates running training accuracy over all samples as they are
/// processed (before each batch's SGD step), then refreshes the weights for
/// the next epoch.
RunLog train_mtl(const MultiTaskDataset& ds, const Hyperparams& hp,
                 const std::vector<double>& stl_acc);

struct ComparisonReport {
    std::vector<std::string> task_names;
    std::vector<double> stl_accuracies;
    std::vector<double> stl_losses;
    std::vector<std::pair<Strategy, RunLog>> mtl_runs;
    DeltaMReport delta_m; // deepchest vs the single-task baselines
    bool has_delta_m = false;
};

/// Single-task baselines for every task, then one joint run per strategy on
/// the identical split. delta_m compares the deepchest run's validation
/// losses against the single-task validation losses.
ComparisonReport run_comparison(const MultiTaskDataset& ds, const Hyperparams& hp,
                                const std::vector<Strategy>& strategies = {
                                    Strategy::deepchest, Strategy::uniform,
                                    Strategy::static_init});

} // namespace deepchest

#endif
