#include "deepchest/controller.hpp"

#include <algorithm>
#include <cmath>

#include "deepchest/error.hpp"
#include "deepchest/metrics.hpp"

namespace deepchest {

namespace {

void check_accuracies(const std::vector<double>& acc, const char* who) {
    for (std::size_t t = 0; t < acc.size(); ++t) {
        if (!(acc[t] >= 0.0 && acc[t] <= 1.0))
            fail(errc::out_of_range, std::string(who) + ": accuracy " + std::to_string(acc[t]) +
                                         " of task " + std::to_string(t) + " outside [0,1]");
    }
}

} // namespace

void validate_config(const WeightConfig& cfg) {
    if (!(cfg.alpha > 1.0)) fail(errc::out_of_range, "WeightConfig: alpha must exceed 1");
    if (!(cfg.beta > 1.0)) fail(errc::out_of_range, "WeightConfig: beta must exceed 1");
    if (!(cfg.init_scale > 0.0)) fail(errc::out_of_range, "WeightConfig: init_scale must be positive");
    if (!(cfg.w_max >= 1.0 + cfg.init_scale))
        fail(errc::out_of_range, "WeightConfig: w_max must be at least 1 + init_scale");
    if (cfg.w_floor && !(*cfg.w_floor > 0.0 && *cfg.w_floor < 1.0))
        fail(errc::out_of_range, "WeightConfig: w_floor must lie in (0,1)");
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::deepchest: return "deepchest";
        case Strategy::uniform: return "uniform";
        case Strategy::static_init: return "static_init";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "deepchest") return Strategy::deepchest;
    if (name == "uniform") return Strategy::uniform;
    if (name == "static_init") return Strategy::static_init;
    fail(errc::bad_config, "unknown strategy '" + name + "'");
}

WeightVector init_weights(const std::vector<double>& stl_acc, const WeightConfig& cfg) {
    validate_config(cfg);
    if (stl_acc.empty()) fail(errc::empty_tasks, "init_weights: no tasks");
    check_accuracies(stl_acc, "init_weights");
    WeightVector w;
    w.reserve(stl_acc.size());
    for (double a : stl_acc) w.push_back(1.0 + (1.0 - a) * cfg.init_scale);
    return w;
}

WeightVector update_weights(const WeightVector& w, const std::vector<double>& train_acc,
                            const WeightConfig& cfg) {
    validate_config(cfg);
    if (w.empty()) fail(errc::empty_tasks, "update_weights: no tasks");
    if (w.size() != train_acc.size())
        fail(errc::length_mismatch, "update_weights: " + std::to_string(w.size()) +
                                        " weights vs " + std::to_string(train_acc.size()) +
                                        " accuracies");
    check_accuracies(train_acc, "update_weights");
    for (double v : w)
        if (!(std::isfinite(v) && v > 0.0))
            fail(errc::out_of_range, "update_weights: weights must be finite and positive");

    const double avg = average_accuracy(train_acc);
    WeightVector next;
    next.reserve(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) {
        double v = train_acc[t] < avg ? std::min(w[t] * cfg.alpha, cfg.w_max) : w[t] / cfg.beta;
        if (cfg.w_floor) v = std::max(v, *cfg.w_floor);
        next.push_back(v);
    }
    return next;
}

double weighted_total_loss(const WeightVector& w, const std::vector<double>& losses) {
    if (w.empty()) fail(errc::empty_tasks, "weighted_total_loss: no tasks");
    if (w.size() != losses.size())
        fail(errc::length_mismatch, "weighted_total_loss: " + std::to_string(w.size()) +
                                        " weights vs " + std::to_string(losses.size()) + " losses");
    double total = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (!std::isfinite(losses[t]))
            fail(errc::non_finite, "weighted_total_loss: loss of task " + std::to_string(t));
        total += w[t] * losses[t];
    }
    return total;
}

WeightVector weights_for_epoch(Strategy strategy, const WeightVector& init,
                               const WeightVector& prev, const std::vector<double>& train_acc,
                               const WeightConfig& cfg) {
    switch (strategy) {
        case Strategy::uniform: return WeightVector(prev.size(), 1.0);
        case Strategy::static_init: return init;
        case Strategy::deepchest: return update_weights(prev, train_acc, cfg);
    }
    fail(errc::bad_config, "weights_for_epoch: unknown strategy");
}

} // namespace deepchest
