#ifndef DEEPCHEST_COMMANDS_HPP
#define DEEPCHEST_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "deepchest/error.hpp"

namespace deepchest {

/// Exit-code contract shared by every subcommand: 0 success, 2 config or
/// schema error, 3 I/O error, 4 numeric divergence.
int exit_code_for(errc code);

/// Command implementations. They throw Error; the CLI wrapper (and tests)
/// translate via exit_code_for. seed, when present, overrides the seed of
/// the config section the command consumes.

/// Generates the configured synthetic dataset and writes it as CSV to
/// out_path. Returns a human-readable summary (n, d, T, positive rates).
std::string cmd_gen_data(const std::string& config_path, const std::string& out_path,
                         std::optional<std::uint64_t> seed = std::nullopt);

/// Runs the single-task baselines plus one joint run per configured
/// strategy, then writes delta_m.csv, weights.csv and summary.txt into
/// out_dir.
void cmd_compare(const std::string& config_path, const std::string& data_path,
                 const std::string& out_dir, std::optional<std::uint64_t> seed = std::nullopt);

/// Runs the learning-dynamics simulation and writes sim.csv into out_dir.
void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed = std::nullopt);

/// Renders the weight trajectories of a weights.csv (or sim.csv) file as an
/// SVG line chart.
void cmd_plot(const std::string& weights_csv_path, const std::string& out_svg_path);

/// Computes per-task and total delta_m from a CSV with header
/// `task,mtl_loss,stl_loss` and returns the printable report.
std::string cmd_delta_m(const std::string& table_csv_path);

} // namespace deepchest

#endif
