#ifndef DEEPCHEST_SIMDYN_HPP
#define DEEPCHEST_SIMDYN_HPP

#include <cstdint>
#include <vector>

#include "deepchest/controller.hpp"
#include "deepchest/rng.hpp"

namespace deepchest {

/// Closed-form stand-in for one task's learning behaviour: accuracy climbs
/// toward ceiling at a speed proportional to the weight share the controller
/// allocates, with optional gaussian jitter.
struct SimTask {
    double ceiling = 1.0;
    double rate = 0.1;
    double noise_sd = 0.0;
};

struct SimState {
    std::size_t epoch = 0;
    std::vector<double> accuracies;
    WeightVector weights;
};

void validate_sim_tasks(const std::vector<SimTask>& tasks);

/// One epoch of the dynamics. With share s_t = w_t / sum(w):
///   a'_t = clamp(a_t + rate_t * s_t * (ceiling_t - a_t) + e_t, 0, ceiling_t)
/// with e_t ~ Normal(0, noise_sd_t) drawn from rng in task order, then the
/// weights advance via weights_for_epoch on the new accuracies (init = all
/// ones, matching run_sim's starting weights).
SimState sim_step(const SimState& state, const std::vector<SimTask>& tasks,
                  const WeightConfig& cfg, Strategy strategy, Rng& rng);

/// Iterates sim_step from zero accuracies and all-one weights. The returned
/// trajectory has epochs+1 states, the initial one first.
std::vector<SimState> run_sim(const std::vector<SimTask>& tasks, Strategy strategy,
                              const WeightConfig& cfg, std::size_t epochs, std::uint64_t seed);

} // namespace deepchest

#endif
