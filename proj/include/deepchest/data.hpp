#ifndef DEEPCHEST_DATA_HPP
#define DEEPCHEST_DATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "deepchest/matrix.hpp"

namespace deepchest {

/// Feature matrix plus one binary label column per task.
struct MultiTaskDataset {
    Matrix features;                     // n x d
    std::vector<std::uint8_t> labels;    // n x T, row-major
    std::vector<std::string> task_names; // length T

    std::size_t n_samples() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
    std::size_t n_tasks() const { return task_names.size(); }

    std::uint8_t label(std::size_t i, std::size_t t) const { return labels[i * n_tasks() + t]; }
    std::uint8_t& label(std::size_t i, std::size_t t) { return labels[i * n_tasks() + t]; }
};

/// Difficulty/imbalance knobs for one synthetic task. margin scales how
/// cleanly the latent score separates the classes (larger = easier),
/// positive_rate sets the class balance, label_noise flips each label
/// independently with that probability.
struct TaskProfile {
    double margin = 1.0;
    double positive_rate = 0.5;
    double label_noise = 0.0;
};

/// Synthetic multi-task data. Features are iid standard normal. Each task
/// draws a random unit hyperplane u and labels sample i positive when
///   margin * (u . x_i) + e_i  >=  tau,   e_i ~ N(0, 0.25^2),
/// with tau the empirical quantile that yields the requested positive rate.
/// The e term bounds how well any classifier can do, so margin controls the
/// achievable accuracy; label_noise flips labels on top. Deterministic in
/// the seed.
MultiTaskDataset generate_synthetic(std::size_t n, std::size_t d,
                                    const std::vector<TaskProfile>& profiles, std::uint64_t seed);

/// Elementwise (x - 0.5) / 0.5: maps [0,1] onto [-1,1].
std::vector<double> normalize_pixels(const std::vector<double>& x);

/// CSV schema: header `x_0,...,x_{d-1},y_<name>,...`; features as decimal
/// floats, labels as literal 0/1, no quoting, LF line endings.
MultiTaskDataset load_csv(const std::string& path);
std::string to_csv(const MultiTaskDataset& ds);
void save_csv(const MultiTaskDataset& ds, const std::string& path);

/// Deterministic shuffle-split into disjoint, exhaustive train/validation
/// parts; both non-empty.
struct SplitDataset {
    MultiTaskDataset train;
    MultiTaskDataset validation;
};
SplitDataset split(const MultiTaskDataset& ds, double train_fraction, std::uint64_t seed);

/// Shuffled index blocks for one epoch: a permutation of 0..n-1 chunked into
/// blocks of batch_size (last block may be short). The permutation depends
/// on both seed and epoch.
std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t batch_size,
                                              std::uint64_t seed, std::size_t epoch);

/// Materializes the given rows as (features, labels) matrices.
void gather_batch(const MultiTaskDataset& ds, const std::vector<std::size_t>& rows, Matrix& x,
                  Matrix& y);

/// Copies a single task's labels into a one-task dataset (shared features).
MultiTaskDataset select_task(const MultiTaskDataset& ds, std::size_t task_index);

} // namespace deepchest

#endif
