#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "deepchest/commands.hpp"
#include "deepchest/log.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string data;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
};

void add_seed_option(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&args](std::uint64_t v) { args.seed = v; },
        "override the seed of the config section this command uses");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient-free dynamic task weighting for multi-task training"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic dataset CSV");
    gen->add_option("--config", args.config, "run configuration (JSON)")->required();
    gen->add_option("--out", args.out, "output directory (writes dataset.csv)");
    add_seed_option(gen, args);

    auto* compare = app.add_subcommand(
        "compare", "single-task baselines vs joint runs; writes delta_m/weights/summary");
    compare->add_option("--config", args.config, "run configuration (JSON)")->required();
    compare->add_option("--data", args.data, "dataset CSV")->required();
    compare->add_option("--out", args.out, "output directory");
    add_seed_option(compare, args);

    auto* simulate = app.add_subcommand("simulate", "closed-form learning-dynamics run");
    simulate->add_option("--config", args.config, "run configuration (JSON)")->required();
    simulate->add_option("--out", args.out, "output directory (writes sim.csv)");
    add_seed_option(simulate, args);

    auto* plot = app.add_subcommand("plot", "render weight trajectories as an SVG line chart");
    plot->add_option("--data", args.data, "weights.csv or sim.csv to plot")->required();
    plot->add_option("--out", args.out, "output directory (writes weights.svg)");

    auto* delta = app.add_subcommand("delta-m", "per-task and total delta_m from a loss table");
    delta->add_option("--data", args.data, "CSV with header task,mtl_loss,stl_loss")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage problems fall under the config-error exit code
    }

    try {
        if (gen->parsed()) {
            const std::string summary = deepchest::cmd_gen_data(args.config, args.out + "/dataset.csv", args.seed);
            std::fputs(summary.c_str(), stdout);
        } else if (compare->parsed()) {
            deepchest::cmd_compare(args.config, args.data, args.out, args.seed);
        } else if (simulate->parsed()) {
            deepchest::cmd_simulate(args.config, args.out, args.seed);
        } else if (plot->parsed()) {
            deepchest::cmd_plot(args.data, args.out + "/weights.svg");
        } else if (delta->parsed()) {
            const std::string report = deepchest::cmd_delta_m(args.data);
            std::fputs(report.c_str(), stdout);
        }
    } catch (const deepchest::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return deepchest::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
