#ifndef DEEPCHEST_METRICS_HPP
#define DEEPCHEST_METRICS_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace deepchest {

/// Per-task relative loss difference of a multi-task run against its
/// single-task baselines, plus the mean across tasks.
struct DeltaMRow {
    std::string task;
    double stl_loss = 0.0;
    double mtl_loss = 0.0;
    double delta_m = 0.0;
};

struct DeltaMReport {
    std::vector<DeltaMRow> per_task;
    double total = 0.0;
};

/// One epoch of a training run: the weight in force, mean training loss and
/// training accuracy for every task.
struct TaskEpoch {
    double weight = 0.0;
    double train_loss = 0.0;
    double train_acc = 0.0;
};

struct EpochStats {
    std::size_t epoch = 0;
    std::vector<TaskEpoch> per_task;
};

/// Fraction of samples where (prob >= threshold) matches the binary label.
/// A probability exactly at the threshold classifies positive.
double binary_accuracy(const std::vector<double>& probs, const std::vector<int>& labels,
                       double threshold);

/// Arithmetic mean of per-task accuracies. Computed as min + mean of offsets
/// from the min, summed in sorted order: an all-equal input averages to
/// exactly the common value and the result is permutation-invariant.
double average_accuracy(const std::vector<double>& acc);

/// (mtl_loss - stl_loss) / stl_loss. Negative means the multi-task run beat
/// the single-task baseline.
double delta_m_per_task(double mtl_loss, double stl_loss);

/// Mean of per-task delta_m values.
double delta_m_total(const std::vector<double>& per_task);

/// Assembles the per-task rows and total from parallel loss vectors.
DeltaMReport make_delta_m_report(const std::vector<std::string>& task_names,
                                 const std::vector<double>& stl_losses,
                                 const std::vector<double>& mtl_losses);

} // namespace deepchest

#endif
