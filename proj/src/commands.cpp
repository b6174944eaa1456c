#include "deepchest/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "deepchest/config.hpp"
#include "deepchest/log.hpp"
#include "deepchest/metrics.hpp"
#include "deepchest/svg.hpp"
#include "deepchest/textio.hpp"

namespace deepchest {

namespace {

namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(errc::io_error, "cannot create directory " + dir + ": " + ec.message());
}

std::string two_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// delta_m.csv. The delta column is recomputed from the serialized loss
/// values, so the file is internally consistent at its own precision.
std::string delta_m_to_csv(const DeltaMReport& report) {
    std::ostringstream out;
    out << "task,stl_loss,mtl_loss,delta_m\n";
    std::vector<double> deltas;
    for (const auto& row : report.per_task) {
        const std::string stl_str = fmt_g9(row.stl_loss);
        const std::string mtl_str = fmt_g9(row.mtl_loss);
        double stl = 0, mtl = 0;
        parse_double(stl_str, stl);
        parse_double(mtl_str, mtl);
        const double d = (mtl - stl) / stl;
        double d_round = 0;
        parse_double(fmt_g9(d), d_round);
        deltas.push_back(d_round);
        out << row.task << ',' << stl_str << ',' << mtl_str << ',' << fmt_g9(d) << '\n';
    }
    out << "TOTAL,,," << fmt_g9(delta_m_total(deltas)) << '\n';
    return out.str();
}

std::string weights_log_to_csv(const ComparisonReport& report) {
    std::ostringstream out;
    out << "strategy,epoch,task,weight,train_loss,train_acc\n";
    for (const auto& [strategy, log] : report.mtl_runs) {
        for (const auto& stats : log.epoch_stats) {
            for (std::size_t t = 0; t < stats.per_task.size(); ++t) {
                const TaskEpoch& te = stats.per_task[t];
                out << strategy_name(strategy) << ',' << stats.epoch << ','
                    << report.task_names[t] << ',' << fmt_g9(te.weight) << ','
                    << fmt_g9(te.train_loss) << ',' << fmt_g9(te.train_acc) << '\n';
            }
        }
    }
    return out.str();
}

std::string summary_text(const MultiTaskDataset& ds, const Hyperparams& hp,
                         const ComparisonReport& report) {
    std::ostringstream out;
    out << "multi-task comparison summary\n";
    out << "=============================\n";
    out << "dataset: n=" << ds.n_samples() << " d=" << ds.n_features()
        << " tasks=" << ds.n_tasks() << "\n";
    out << "all losses and accuracies below are measured on the validation split\n";
    out << "train: epochs=" << hp.epochs << " batch_size=" << hp.batch_size
        << " learning_rate=" << fmt_g9(hp.learning_rate) << " train_fraction="
        << fmt_g9(hp.train_fraction) << " seed=" << hp.seed << "\n";
    out << "hidden_dims=[";
    for (std::size_t i = 0; i < hp.hidden_dims.size(); ++i)
        out << (i ? "," : "") << hp.hidden_dims[i];
    out << "]\n";
    const WeightConfig& wc = hp.weight_cfg;
    out << "weighting: alpha=" << fmt_g9(wc.alpha) << " beta=" << fmt_g9(wc.beta)
        << " w_max=" << fmt_g9(wc.w_max) << " init_scale=" << fmt_g9(wc.init_scale)
        << " w_floor=" << (wc.w_floor ? fmt_g9(*wc.w_floor) : std::string("none")) << "\n\n";

    out << "single-task baselines (accuracy / loss):\n";
    for (std::size_t t = 0; t < report.task_names.size(); ++t)
        out << "  " << report.task_names[t] << ": " << fmt_g9(report.stl_accuracies[t]) << " / "
            << fmt_g9(report.stl_losses[t]) << "\n";
    out << "\n";

    for (const auto& [strategy, log] : report.mtl_runs) {
        out << "strategy " << strategy_name(strategy) << " final (accuracy / loss):\n";
        for (std::size_t t = 0; t < report.task_names.size(); ++t)
            out << "  " << report.task_names[t] << ": " << fmt_g9(log.final_val_accuracies[t])
                << " / " << fmt_g9(log.final_val_losses[t]) << "\n";
    }
    out << "\n";

    if (report.has_delta_m) {
        out << "delta_m (deepchest vs single-task, lower is better):\n";
        for (const auto& row : report.delta_m.per_task)
            out << "  " << row.task << ": " << two_decimals(row.delta_m) << "\n";
        out << "total delta_m: " << two_decimals(report.delta_m.total) << "\n";
    } else {
        out << "delta_m not computed (deepchest strategy not in the run list)\n";
    }
    return out.str();
}

} // namespace

int exit_code_for(errc code) {
    switch (code) {
        case errc::file_not_found:
        case errc::io_error: return 3;
        case errc::divergence: return 4;
        default: return 2;
    }
}

std::string cmd_gen_data(const std::string& config_path, const std::string& out_path,
                         std::optional<std::uint64_t> seed) {
    const RunConfig cfg = load_config(config_path);
    if (!cfg.data) fail(errc::bad_config, config_path + ": missing data section");
    DataConfig data_cfg = *cfg.data;
    if (seed) data_cfg.seed = *seed;

    MultiTaskDataset ds = generate_synthetic(data_cfg.n, data_cfg.d, data_cfg.tasks, data_cfg.seed);
    ds.task_names = data_cfg.task_names;
    const fs::path parent = fs::path(out_path).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
    save_csv(ds, out_path);
    log_info("wrote %s", out_path.c_str());

    std::ostringstream out;
    out << "generated dataset: n=" << ds.n_samples() << " d=" << ds.n_features()
        << " tasks=" << ds.n_tasks() << "\n";
    for (std::size_t t = 0; t < ds.n_tasks(); ++t) {
        std::size_t pos = 0;
        for (std::size_t i = 0; i < ds.n_samples(); ++i) pos += ds.label(i, t);
        out << "  " << ds.task_names[t] << ": positive rate "
            << fmt_g9(static_cast<double>(pos) / static_cast<double>(ds.n_samples())) << "\n";
    }
    return out.str();
}

void cmd_compare(const std::string& config_path, const std::string& data_path,
                 const std::string& out_dir, std::optional<std::uint64_t> seed) {
    const RunConfig cfg = load_config(config_path);
    if (!cfg.train) fail(errc::bad_config, config_path + ": missing train section");
    Hyperparams hp = *cfg.train;
    if (seed) hp.seed = *seed;

    const MultiTaskDataset ds = load_csv(data_path);
    log_info("comparison on %zu samples, %zu tasks", ds.n_samples(), ds.n_tasks());
    const ComparisonReport report = run_comparison(ds, hp, cfg.strategies);

    ensure_dir(out_dir);
    if (report.has_delta_m)
        atomic_write_file(out_dir + "/delta_m.csv", delta_m_to_csv(report.delta_m));
    atomic_write_file(out_dir + "/weights.csv", weights_log_to_csv(report));
    atomic_write_file(out_dir + "/summary.txt", summary_text(ds, hp, report));
    log_info("wrote %s/{delta_m.csv,weights.csv,summary.txt}", out_dir.c_str());
}

void cmd_simulate(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed) {
    const RunConfig cfg = load_config(config_path);
    if (!cfg.sim) fail(errc::bad_config, config_path + ": missing sim section");
    SimConfig sim_cfg = *cfg.sim;
    if (seed) sim_cfg.seed = *seed;

    const auto trajectory =
        run_sim(sim_cfg.tasks, sim_cfg.strategy, cfg.weighting, sim_cfg.epochs, sim_cfg.seed);

    std::ostringstream out;
    out << "strategy,epoch,task,weight,train_loss,train_acc,source\n";
    for (const auto& state : trajectory) {
        for (std::size_t t = 0; t < sim_cfg.tasks.size(); ++t) {
            // The dynamics law has no loss analogue, so that field stays empty.
            out << strategy_name(sim_cfg.strategy) << ',' << state.epoch << ",task_" << t << ','
                << fmt_g9(state.weights[t]) << ",," << fmt_g9(state.accuracies[t]) << ",sim\n";
        }
    }
    ensure_dir(out_dir);
    atomic_write_file(out_dir + "/sim.csv", out.str());
    log_info("wrote %s/sim.csv", out_dir.c_str());
}

void cmd_plot(const std::string& weights_csv_path, const std::string& out_svg_path) {
    const std::string content = read_file(weights_csv_path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line))
        fail(errc::parse_error, weights_csv_path + ": empty file");
    bool has_source = false;
    if (line == "strategy,epoch,task,weight,train_loss,train_acc")
        has_source = false;
    else if (line == "strategy,epoch,task,weight,train_loss,train_acc,source")
        has_source = true;
    else
        fail(errc::parse_error, weights_csv_path + ": unexpected header '" + line + "'");
    const std::size_t n_fields = has_source ? 7 : 6;

    std::vector<ChartSeries> series;
    std::map<std::string, std::size_t> index;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = weights_csv_path + ": line " + std::to_string(line_no);
        if (fields.size() != n_fields)
            fail(errc::parse_error, where + ": expected " + std::to_string(n_fields) + " fields");
        double epoch = 0, weight = 0;
        if (!parse_double(fields[1], epoch))
            fail(errc::parse_error, where + ": bad epoch '" + std::string(fields[1]) + "'");
        if (!parse_double(fields[3], weight))
            fail(errc::parse_error, where + ": bad weight '" + std::string(fields[3]) + "'");
        const std::string key = std::string(fields[0]) + "/" + std::string(fields[2]);
        auto [it, inserted] = index.try_emplace(key, series.size());
        if (inserted) series.push_back({key, {}});
        series[it->second].points.emplace_back(epoch, weight);
    }

    ChartOptions options;
    options.title = "task weights by epoch";
    options.x_label = "epoch";
    options.y_label = "weight";
    const fs::path parent = fs::path(out_svg_path).parent_path();
    if (!parent.empty()) ensure_dir(parent.string());
    atomic_write_file(out_svg_path, render_line_chart(series, options));
    log_info("wrote %s", out_svg_path.c_str());
}

std::string cmd_delta_m(const std::string& table_csv_path) {
    const std::string content = read_file(table_csv_path);
    std::istringstream in(content);
    std::string line;
    if (!std::getline(in, line) || line != "task,mtl_loss,stl_loss")
        fail(errc::parse_error, table_csv_path + ": header must be 'task,mtl_loss,stl_loss'");

    std::vector<std::string> names;
    std::vector<double> mtl, stl;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const std::string where = table_csv_path + ": line " + std::to_string(line_no);
        if (fields.size() != 3) fail(errc::parse_error, where + ": expected 3 fields");
        double m = 0, s = 0;
        if (!parse_double(fields[1], m) || !parse_double(fields[2], s))
            fail(errc::parse_error, where + ": losses must be numbers");
        if (s <= 0.0)
            fail(errc::zero_baseline, where + ": task '" + std::string(fields[0]) +
                                          "' has stl_loss <= 0");
        names.emplace_back(fields[0]);
        mtl.push_back(m);
        stl.push_back(s);
    }
    if (names.empty()) fail(errc::parse_error, table_csv_path + ": no data rows");

    const DeltaMReport report = make_delta_m_report(names, stl, mtl);
    std::ostringstream out;
    out << "task,delta_m\n";
    for (const auto& row : report.per_task) out << row.task << ',' << two_decimals(row.delta_m) << '\n';
    out << "TOTAL," << two_decimals(report.total) << '\n';
    return out.str();
}

} // namespace deepchest
