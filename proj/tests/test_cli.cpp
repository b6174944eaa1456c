#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "deepchest/commands.hpp"
#include "deepchest/config.hpp"
#include "deepchest/error.hpp"
#include "deepchest/textio.hpp"
#include "reference_losses.hpp"

using namespace deepchest;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("deepchest_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

// Minimal well-formedness scan: balanced tags, quoted attributes, one root.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    bool seen_root = false;
    while (i < text.size()) {
        if (text[i] != '<') {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        bool in_quote = false;
        while (j < text.size() && (text[j] != '>' || in_quote)) {
            if (text[j] == '"') in_quote = !in_quote;
            ++j;
        }
        if (j >= text.size()) return false;
        std::string tag = text.substr(i + 1, j - i - 1);
        i = j + 1;
        if (tag.empty()) return false;
        if (tag[0] == '?' || tag[0] == '!') continue;
        if (tag[0] == '/') {
            if (stack.empty()) return false;
            const std::string name = tag.substr(1);
            if (stack.back() != name) return false;
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        if (self_closing) tag.pop_back();
        std::size_t q = 0;
        for (char c : tag) q += c == '"';
        if (q % 2 != 0) return false;
        const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
        if (stack.empty()) {
            if (seen_root && !name.empty()) return false;
            seen_root = true;
        }
        if (!self_closing) stack.push_back(name);
    }
    return stack.empty() && seen_root;
}

const char* kTinyConfig = R"({
  "data": {"n": 120, "d": 4, "seed": 5,
           "tasks": [{"name": "easy", "margin": 1.5, "positive_rate": 0.5},
                     {"name": "hard", "margin": 0.4, "positive_rate": 0.3, "label_noise": 0.05}]},
  "train": {"epochs": 3, "batch_size": 32, "learning_rate": 0.1,
            "hidden_dims": [6], "seed": 11, "train_fraction": 0.8},
  "weighting": {"alpha": 1.1, "beta": 1.05, "w_max": 5.0, "init_scale": 0.5},
  "output": {"dir": "out"}
})";

std::string reference_table_csv() {
    std::ostringstream out;
    out << "task,mtl_loss,stl_loss\n";
    for (const auto& row : kReferenceLosses)
        out << row.task << ',' << fmt_g9(row.mtl_loss) << ',' << fmt_g9(row.stl_loss) << '\n';
    return out.str();
}

} // namespace

TEST_CASE("config: unknown keys are rejected by name") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"trian": {}})", "cfg"),
                         doctest::Contains("trian"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"train": {"epochz": 3}})", "cfg"),
                         doctest::Contains("epochz"), Error);
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"data": {"n": 5, "d": 2, "tasks": [{"margen": 1.0}]}})", "cfg"),
        doctest::Contains("margen"), Error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"weighting": {"wmax": 4.0}})", "cfg"),
                         doctest::Contains("wmax"), Error);
}

TEST_CASE("config: values land in the right places") {
    const RunConfig cfg = parse_config(kTinyConfig, "cfg");
    REQUIRE(cfg.data.has_value());
    CHECK(cfg.data->n == 120);
    CHECK(cfg.data->task_names == std::vector<std::string>{"easy", "hard"});
    CHECK(cfg.data->tasks[1].label_noise == 0.05);
    REQUIRE(cfg.train.has_value());
    CHECK(cfg.train->epochs == 3);
    CHECK(cfg.train->hidden_dims == std::vector<std::size_t>{6});
    CHECK(cfg.train->weight_cfg.alpha == 1.1);
    CHECK(cfg.strategies.size() == 3);
    CHECK(cfg.output_dir == "out");

    const RunConfig defaults = parse_config(R"({})", "cfg");
    CHECK(!defaults.data.has_value());
    CHECK(!defaults.train.has_value());
    CHECK(defaults.weighting.w_max == 5.0);

    CHECK_THROWS_AS(parse_config("{not json", "cfg"), Error);
    CHECK_THROWS_AS(parse_config(R"({"train": {"learning_rate": -1}})", "cfg"), Error);
    CHECK_THROWS_AS(parse_config(R"({"sim": {"tasks": []}})", "cfg"), Error);

    const RunConfig strat = parse_config(
        R"({"train": {"strategies": ["uniform", "deepchest"]}})", "cfg");
    REQUIRE(strat.strategies.size() == 2);
    CHECK(strat.strategies[0] == Strategy::uniform);
    CHECK_THROWS_AS(parse_config(R"({"train": {"strategies": ["nope"]}})", "cfg"), Error);
}

TEST_CASE("gen-data: writes header plus one row per sample, byte-stable") {
    TempDir dir;
    const std::string cfg_path = dir.file("cfg.json");
    write_text(cfg_path,
               R"({"data": {"n": 100, "d": 4, "seed": 2,
                   "tasks": [{"margin": 1.0}, {"margin": 0.5, "positive_rate": 0.2}]}})");
    const std::string out1 = dir.file("ds1.csv");
    const std::string summary = cmd_gen_data(cfg_path, out1);
    CHECK(summary.find("n=100") != std::string::npos);
    CHECK(summary.find("positive rate") != std::string::npos);

    const std::string content = read_file(out1);
    CHECK(count_lines(content) == 101);
    CHECK(content.substr(0, content.find('\n')) == "x_0,x_1,x_2,x_3,y_task_0,y_task_1");

    const std::string out2 = dir.file("ds2.csv");
    cmd_gen_data(cfg_path, out2);
    CHECK(read_file(out2) == content);

    // Seed override changes the bytes.
    const std::string out3 = dir.file("ds3.csv");
    cmd_gen_data(cfg_path, out3, 99);
    CHECK(read_file(out3) != content);

    CHECK_THROWS_AS(cmd_gen_data(dir.file("missing.json"), out1), Error);
    const std::string no_data = dir.file("nodata.json");
    write_text(no_data, R"({"train": {}})");
    CHECK_THROWS_AS(cmd_gen_data(no_data, out1), Error);
}

TEST_CASE("delta-m command reproduces the reference totals") {
    TempDir dir;
    const std::string table = dir.file("table.csv");
    write_text(table, reference_table_csv());
    const std::string report = cmd_delta_m(table);
    CHECK(report.find("TOTAL,-0.44\n") != std::string::npos);
    CHECK(report.find("Atelectasis,-0.63\n") != std::string::npos);

    const std::string single = dir.file("single.csv");
    write_text(single, "task,mtl_loss,stl_loss\nonly,0.5,0.5\n");
    const std::string rep2 = cmd_delta_m(single);
    CHECK(rep2.find("only,0.00\n") != std::string::npos);
    CHECK(rep2.find("TOTAL,0.00\n") != std::string::npos);

    const std::string zero = dir.file("zero.csv");
    write_text(zero, "task,mtl_loss,stl_loss\nbad,0.5,0\n");
    try {
        cmd_delta_m(zero);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::zero_baseline);
        CHECK(exit_code_for(e.code()) == 2);
    }

    const std::string badhdr = dir.file("badhdr.csv");
    write_text(badhdr, "task,stl_loss,mtl_loss\nx,1,1\n");
    CHECK_THROWS_AS(cmd_delta_m(badhdr), Error);
}

TEST_CASE("compare: emitted files follow the documented schemas") {
    TempDir dir;
    const std::string cfg_path = dir.file("cfg.json");
    write_text(cfg_path, kTinyConfig);
    const std::string data_path = dir.file("ds.csv");
    cmd_gen_data(cfg_path, data_path);

    const std::string out = dir.file("run");
    cmd_compare(cfg_path, data_path, out);

    const std::string weights = read_file(out + "/weights.csv");
    const std::string header = weights.substr(0, weights.find('\n'));
    CHECK(header == "strategy,epoch,task,weight,train_loss,train_acc");
    // 1 header + strategies x epochs x tasks
    CHECK(count_lines(weights) == 1 + 3 * 3 * 2);

    const std::string delta = read_file(out + "/delta_m.csv");
    std::istringstream din(delta);
    std::string line;
    std::getline(din, line);
    CHECK(line == "task,stl_loss,mtl_loss,delta_m");
    std::size_t rows = 0;
    bool saw_total = false;
    while (std::getline(din, line)) {
        const auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 4);
        if (fields[0] == "TOTAL") {
            saw_total = true;
            continue;
        }
        ++rows;
        // The delta column recomputes exactly from its own loss columns.
        double stl = 0, mtl = 0;
        REQUIRE(parse_double(fields[1], stl));
        REQUIRE(parse_double(fields[2], mtl));
        CHECK(std::string(fields[3]) == fmt_g9((mtl - stl) / stl));
    }
    CHECK(rows == 2);
    CHECK(saw_total);

    const std::string summary = read_file(out + "/summary.txt");
    CHECK(summary.find("total delta_m:") != std::string::npos);
    CHECK(summary.find("validation split") != std::string::npos);

    CHECK_THROWS_AS(cmd_compare(cfg_path, dir.file("none.csv"), out), Error);
}

TEST_CASE("compare: byte-identical across repeated runs") {
    TempDir dir;
    const std::string cfg_path = dir.file("cfg.json");
    write_text(cfg_path, kTinyConfig);
    const std::string data_path = dir.file("ds.csv");
    cmd_gen_data(cfg_path, data_path);

    cmd_compare(cfg_path, data_path, dir.file("a"));
    cmd_compare(cfg_path, data_path, dir.file("b"));
    for (const char* name : {"/delta_m.csv", "/weights.csv", "/summary.txt"})
        CHECK(read_file(dir.file("a") + name) == read_file(dir.file("b") + name));
}

TEST_CASE("simulate: schema, symmetry and determinism") {
    TempDir dir;
    const std::string cfg_path = dir.file("sim.json");
    write_text(cfg_path, R"({
      "sim": {"epochs": 1, "seed": 4, "strategy": "deepchest",
              "tasks": [{"ceiling": 1.0, "rate": 0.2}, {"ceiling": 1.0, "rate": 0.2}]}
    })");
    cmd_simulate(cfg_path, dir.file("s1"));
    const std::string csv = read_file(dir.file("s1") + "/sim.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "strategy,epoch,task,weight,train_loss,train_acc,source");
    CHECK(count_lines(csv) == 1 + 2 * 2); // (epochs+1) states x tasks

    // Identical noiseless tasks produce identical per-task rows.
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        for (auto f : split_csv_line(line)) fields.emplace_back(f);
        rows.push_back(fields);
    }
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 0; k < rows.size(); k += 2) {
        CHECK(rows[k][3] == rows[k + 1][3]); // weight
        CHECK(rows[k][5] == rows[k + 1][5]); // accuracy
        CHECK(rows[k][6] == "sim");
        CHECK(rows[k][4].empty()); // no loss analogue
    }

    cmd_simulate(cfg_path, dir.file("s2"));
    CHECK(read_file(dir.file("s2") + "/sim.csv") == csv);
}

TEST_CASE("plot: one polyline per series, well-formed XML") {
    TempDir dir;
    const std::string csv_path = dir.file("w.csv");
    write_text(csv_path,
               "strategy,epoch,task,weight,train_loss,train_acc\n"
               "deepchest,0,a,1.1,0.7,0.5\n"
               "deepchest,1,a,1.2,0.6,0.6\n"
               "deepchest,0,b,1.0,0.7,0.5\n"
               "deepchest,1,b,0.95,0.6,0.6\n"
               "uniform,0,a,1.0,0.8,0.4\n");
    const std::string svg_path = dir.file("w.svg");
    cmd_plot(csv_path, svg_path);
    const std::string svg = read_file(svg_path);
    CHECK(count_occurrences(svg, "<polyline") == 3);
    CHECK(xml_well_formed(svg));
    CHECK(svg.find("deepchest/a") != std::string::npos);

    // Header-only input still renders axes plus a note.
    const std::string empty_path = dir.file("empty.csv");
    write_text(empty_path, "strategy,epoch,task,weight,train_loss,train_acc\n");
    cmd_plot(empty_path, dir.file("empty.svg"));
    const std::string empty_svg = read_file(dir.file("empty.svg"));
    CHECK(count_occurrences(empty_svg, "<polyline") == 0);
    CHECK(empty_svg.find("no data") != std::string::npos);
    CHECK(xml_well_formed(empty_svg));

    // The sim.csv variant with a source column parses too.
    const std::string sim_path = dir.file("sim.csv");
    write_text(sim_path,
               "strategy,epoch,task,weight,train_loss,train_acc,source\n"
               "deepchest,0,task_0,1,,0,sim\n");
    cmd_plot(sim_path, dir.file("sim.svg"));
    CHECK(count_occurrences(read_file(dir.file("sim.svg")), "<polyline") == 1);

    // Re-rendering the same input produces the same bytes.
    cmd_plot(csv_path, dir.file("w2.svg"));
    CHECK(read_file(dir.file("w2.svg")) == svg);

    const std::string bad_path = dir.file("bad.csv");
    write_text(bad_path, "strategy,epoch\n");
    CHECK_THROWS_AS(cmd_plot(bad_path, dir.file("bad.svg")), Error);
    const std::string badrow = dir.file("badrow.csv");
    write_text(badrow,
               "strategy,epoch,task,weight,train_loss,train_acc\ndeepchest,x,a,1,0,0\n");
    CHECK_THROWS_AS(cmd_plot(badrow, dir.file("badrow.svg")), Error);
}

TEST_CASE("exit codes follow the contract") {
    CHECK(exit_code_for(errc::bad_config) == 2);
    CHECK(exit_code_for(errc::parse_error) == 2);
    CHECK(exit_code_for(errc::zero_baseline) == 2);
    CHECK(exit_code_for(errc::out_of_range) == 2);
    CHECK(exit_code_for(errc::file_not_found) == 3);
    CHECK(exit_code_for(errc::io_error) == 3);
    CHECK(exit_code_for(errc::divergence) == 4);
}

#ifdef DEEPCHEST_CLI_PATH
namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DEEPCHEST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("binary: end-to-end exit codes") {
    TempDir dir;
    CHECK(run_cli("") == 2);             // missing subcommand
    CHECK(run_cli("frobnicate") == 2);   // unknown subcommand
    CHECK(run_cli("gen-data --config /nonexistent.json --out " + dir.file("o")) == 3);

    const std::string bad_cfg = dir.file("bad.json");
    write_text(bad_cfg, R"({"data": {"n": 10, "d": 2, "tusks": []}})");
    CHECK(run_cli("gen-data --config " + bad_cfg + " --out " + dir.file("o")) == 2);

    const std::string good_cfg = dir.file("good.json");
    write_text(good_cfg, R"({"data": {"n": 20, "d": 2, "tasks": [{"margin": 1.0}]}})");
    CHECK(run_cli("gen-data --config " + good_cfg + " --out " + dir.file("o")) == 0);
    CHECK(fs::exists(dir.file("o") + "/dataset.csv"));

    const std::string zero = dir.file("zero.csv");
    write_text(zero, "task,mtl_loss,stl_loss\nbad,0.5,0\n");
    CHECK(run_cli("delta-m --data " + zero) == 2);
}

TEST_CASE("binary: DEEPCHEST_LOG gates stderr diagnostics") {
    TempDir dir;
    const std::string cfg = dir.file("cfg.json");
    write_text(cfg, R"({"data": {"n": 20, "d": 2, "seed": 1, "tasks": [{"margin": 1.0}]}})");
    const std::string base = std::string(DEEPCHEST_CLI_PATH) + " gen-data --config " + cfg +
                             " --out " + dir.file("o") + " >/dev/null 2>" + dir.file("err.txt");

    REQUIRE(std::system(base.c_str()) == 0); // default level: quiet
    CHECK(read_file(dir.file("err.txt")).empty());

    REQUIRE(std::system(("DEEPCHEST_LOG=info " + base).c_str()) == 0);
    const std::string err = read_file(dir.file("err.txt"));
    CHECK(err.find("[info]") != std::string::npos);
}

TEST_CASE("binary: divergence exits with code 4") {
    TempDir dir;
    const std::string cfg = dir.file("hot.json");
    write_text(cfg, R"({
      "data": {"n": 120, "d": 3, "seed": 1, "tasks": [{"margin": 1.0}, {"margin": 0.5}]},
      "train": {"epochs": 30, "batch_size": 16, "learning_rate": 1e12,
                "hidden_dims": [8], "seed": 1}
    })");
    CHECK(run_cli("gen-data --config " + cfg + " --out " + dir.file("d")) == 0);
    CHECK(run_cli("compare --config " + cfg + " --data " + dir.file("d") + "/dataset.csv --out " +
                  dir.file("r")) == 4);
}
#endif
