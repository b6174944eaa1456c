#include "deepchest/simdyn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepchest/error.hpp"

namespace deepchest {

void validate_sim_tasks(const std::vector<SimTask>& tasks) {
    if (tasks.empty()) fail(errc::empty_tasks, "sim: no tasks");
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const SimTask& task = tasks[t];
        if (!(task.ceiling > 0.0 && task.ceiling <= 1.0))
            fail(errc::out_of_range, "sim task " + std::to_string(t) + ": ceiling must lie in (0,1]");
        if (!(task.rate >= 0.0))
            fail(errc::out_of_range, "sim task " + std::to_string(t) + ": rate must be >= 0");
        if (!(task.noise_sd >= 0.0))
            fail(errc::out_of_range, "sim task " + std::to_string(t) + ": noise_sd must be >= 0");
    }
}

SimState sim_step(const SimState& state, const std::vector<SimTask>& tasks,
                  const WeightConfig& cfg, Strategy strategy, Rng& rng) {
    const std::size_t tcount = tasks.size();
    if (state.accuracies.size() != tcount || state.weights.size() != tcount)
        fail(errc::length_mismatch, "sim_step: state and task list disagree on task count");

    double weight_sum = 0.0;
    for (double w : state.weights) weight_sum += w;

    SimState next;
    next.epoch = state.epoch + 1;
    next.accuracies.reserve(tcount);
    for (std::size_t t = 0; t < tcount; ++t) {
        const double share = state.weights[t] / weight_sum;
        const double jitter = rng.normal() * tasks[t].noise_sd;
        const double a = state.accuracies[t] +
                         tasks[t].rate * share * (tasks[t].ceiling - state.accuracies[t]) + jitter;
        next.accuracies.push_back(std::clamp(a, 0.0, tasks[t].ceiling));
    }

    const WeightVector ones(tcount, 1.0);
    next.weights = weights_for_epoch(strategy, ones, state.weights, next.accuracies, cfg);
    return next;
}

std::vector<SimState> run_sim(const std::vector<SimTask>& tasks, Strategy strategy,
                              const WeightConfig& cfg, std::size_t epochs, std::uint64_t seed) {
    if (epochs < 1) fail(errc::out_of_range, "run_sim: epochs must be >= 1");
    validate_sim_tasks(tasks);
    validate_config(cfg);

    std::vector<SimState> trajectory;
    trajectory.reserve(epochs + 1);
    trajectory.push_back({0, std::vector<double>(tasks.size(), 0.0),
                          WeightVector(tasks.size(), 1.0)});

    Rng rng(derive_seed(seed, 0x51D7));
    for (std::size_t e = 0; e < epochs; ++e)
        trajectory.push_back(sim_step(trajectory.back(), tasks, cfg, strategy, rng));
    return trajectory;
}

} // namespace deepchest
