#include "deepchest/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "deepchest/error.hpp"

namespace deepchest {

double binary_accuracy(const std::vector<double>& probs, const std::vector<int>& labels,
                       double threshold) {
    if (probs.empty()) fail(errc::empty_input, "binary_accuracy: no samples");
    if (probs.size() != labels.size())
        fail(errc::length_mismatch, "binary_accuracy: " + std::to_string(probs.size()) +
                                        " probs vs " + std::to_string(labels.size()) + " labels");
    if (!(threshold > 0.0 && threshold < 1.0))
        fail(errc::out_of_range, "binary_accuracy: threshold must lie in (0,1)");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            fail(errc::bad_label, "binary_accuracy: label " + std::to_string(labels[i]) +
                                      " at sample " + std::to_string(i));
        const int pred = probs[i] >= threshold ? 1 : 0;
        if (pred == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(probs.size());
}

double average_accuracy(const std::vector<double>& acc) {
    if (acc.empty()) fail(errc::empty_tasks, "average_accuracy: no tasks");
    const double lo = *std::min_element(acc.begin(), acc.end());
    std::vector<double> offsets;
    offsets.reserve(acc.size());
    for (double a : acc) offsets.push_back(a - lo);
    std::sort(offsets.begin(), offsets.end());
    double sum = 0.0;
    for (double o : offsets) sum += o;
    return lo + sum / static_cast<double>(acc.size());
}

double delta_m_per_task(double mtl_loss, double stl_loss) {
    if (!std::isfinite(mtl_loss) || !std::isfinite(stl_loss))
        fail(errc::non_finite, "delta_m_per_task: non-finite loss");
    if (stl_loss <= 0.0) fail(errc::zero_baseline, "delta_m_per_task: stl_loss <= 0");
    return (mtl_loss - stl_loss) / stl_loss;
}

double delta_m_total(const std::vector<double>& per_task) {
    if (per_task.empty()) fail(errc::empty_tasks, "delta_m_total: no entries");
    double sum = 0.0;
    for (double d : per_task) {
        if (!std::isfinite(d)) fail(errc::non_finite, "delta_m_total: non-finite entry");
        sum += d;
    }
    return sum / static_cast<double>(per_task.size());
}

DeltaMReport make_delta_m_report(const std::vector<std::string>& task_names,
                                 const std::vector<double>& stl_losses,
                                 const std::vector<double>& mtl_losses) {
    if (task_names.size() != stl_losses.size() || task_names.size() != mtl_losses.size())
        fail(errc::length_mismatch, "make_delta_m_report: ragged inputs");
    DeltaMReport report;
    std::vector<double> deltas;
    deltas.reserve(task_names.size());
    for (std::size_t t = 0; t < task_names.size(); ++t) {
        const double d = delta_m_per_task(mtl_losses[t], stl_losses[t]);
        report.per_task.push_back({task_names[t], stl_losses[t], mtl_losses[t], d});
        deltas.push_back(d);
    }
    report.total = delta_m_total(deltas);
    return report;
}

} // namespace deepchest
