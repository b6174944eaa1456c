#ifndef DEEPCHEST_CONTROLLER_HPP
#define DEEPCHEST_CONTROLLER_HPP

#include <optional>
#include <string>
#include <vector>

namespace deepchest {

/// One positive loss weight per task, in task order.
using WeightVector = std::vector<double>;

/// Knobs of the weighting rule. alpha multiplies the weight of a task whose
/// training accuracy is below the cross-task average, beta divides the weight
/// of a task at or above it, w_max caps every weight, init_scale sets how
/// strongly low single-task accuracy inflates the initial weight, and w_floor
/// (optional) keeps long-decaying weights away from zero.
struct WeightConfig {
    double alpha = 1.1;
    double beta = 1.05;
    double w_max = 5.0;
    double init_scale = 0.5;
    std::optional<double> w_floor;
};

/// Throws OutOfRange unless alpha > 1, beta > 1, init_scale > 0,
/// w_max >= 1 + init_scale and, when set, 0 < w_floor < 1.
void validate_config(const WeightConfig& cfg);

enum class Strategy {
    deepchest,   // performance-driven init + per-epoch update
    uniform,     // all weights fixed at 1.0
    static_init, // performance-driven init, never updated
};

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

/// Initial weights from single-task accuracies:
///   w_t = 1.0 + (1.0 - stl_acc[t]) * init_scale
/// so harder tasks (lower single-task accuracy) start heavier.
WeightVector init_weights(const std::vector<double>& stl_acc, const WeightConfig& cfg);

/// One update step. With A_avg the mean of train_acc:
///   acc <  A_avg  -> w' = min(w * alpha, w_max)
///   acc >= A_avg  -> w' = w / beta
/// then w' = max(w', w_floor) when a floor is configured. Pure: returns a new
/// vector, the input is untouched.
WeightVector update_weights(const WeightVector& w, const std::vector<double>& train_acc,
                            const WeightConfig& cfg);

/// Sum of w[t] * losses[t] in task order.
double weighted_total_loss(const WeightVector& w, const std::vector<double>& losses);

/// Strategy dispatch for the end-of-epoch weight refresh: deepchest applies
/// update_weights to prev, uniform yields all ones, static_init returns init
/// verbatim.
WeightVector weights_for_epoch(Strategy strategy, const WeightVector& init,
                               const WeightVector& prev, const std::vector<double>& train_acc,
                               const WeightConfig& cfg);

} // namespace deepchest

#endif
