#ifndef DEEPCHEST_CONFIG_HPP
#define DEEPCHEST_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deepchest/data.hpp"
#include "deepchest/simdyn.hpp"
#include "deepchest/trainer.hpp"

namespace deepchest {

/// `data` section: what to synthesize.
struct DataConfig {
    std::size_t n = 1000;
    std::size_t d = 16;
    std::uint64_t seed = 1;
    std::vector<TaskProfile> tasks;
    std::vector<std::string> task_names; // parallel to tasks; defaults task_<i>
};

/// `sim` section.
struct SimConfig {
    std::size_t epochs = 100;
    std::uint64_t seed = 1;
    Strategy strategy = Strategy::deepchest;
    std::vector<SimTask> tasks;
};

/// Parsed run configuration. Sections are optional; commands check that the
/// ones they need are present. Unknown keys anywhere are an error, never
/// silently ignored.
struct RunConfig {
    std::optional<DataConfig> data;
    std::optional<Hyperparams> train; // weighting below also feeds train.weight_cfg
    WeightConfig weighting;
    std::vector<Strategy> strategies = {Strategy::deepchest, Strategy::uniform,
                                        Strategy::static_init};
    std::optional<SimConfig> sim;
    std::string output_dir = "out";
};

/// Parses the JSON document at path. Throws BadConfig (unknown key, wrong
/// type, bad value) or FileNotFound.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& origin);

} // namespace deepchest

#endif
