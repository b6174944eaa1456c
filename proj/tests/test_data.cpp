#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "deepchest/data.hpp"
#include "deepchest/error.hpp"
#include "deepchest/textio.hpp"

using namespace deepchest;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("deepchest_data_" + name);
}

} // namespace

TEST_CASE("generate_synthetic: deterministic and validated") {
    const std::vector<TaskProfile> profiles{{1.0, 0.5, 0.0}, {0.5, 0.2, 0.1}};
    const MultiTaskDataset a = generate_synthetic(50, 4, profiles, 9);
    const MultiTaskDataset b = generate_synthetic(50, 4, profiles, 9);
    CHECK(a.features.data == b.features.data);
    CHECK(a.labels == b.labels);
    CHECK(a.task_names == std::vector<std::string>{"task_0", "task_1"});

    const MultiTaskDataset c = generate_synthetic(50, 4, profiles, 10);
    CHECK(a.features.data != c.features.data);

    CHECK_THROWS_AS(generate_synthetic(0, 4, profiles, 1), Error);
    CHECK_THROWS_AS(generate_synthetic(10, 0, profiles, 1), Error);
    CHECK_THROWS_AS(generate_synthetic(10, 4, {}, 1), Error);
    CHECK_THROWS_AS(generate_synthetic(10, 4, {{1.0, 0.0, 0.0}}, 1), Error);
    CHECK_THROWS_AS(generate_synthetic(10, 4, {{1.0, 0.5, 0.7}}, 1), Error);
}

TEST_CASE("generate_synthetic: positive rates land on target") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const MultiTaskDataset ds =
            generate_synthetic(10000, 8, {{1.0, 0.1, 0.0}, {0.3, 0.35, 0.0}}, seed);
        for (std::size_t t = 0; t < 2; ++t) {
            std::size_t pos = 0;
            for (std::size_t i = 0; i < ds.n_samples(); ++i) pos += ds.label(i, t);
            const double frac = double(pos) / double(ds.n_samples());
            const double target = t == 0 ? 0.1 : 0.35;
            CHECK(std::abs(frac - target) <= 0.02);
        }
    }
}

TEST_CASE("generate_synthetic: label noise moves the labels") {
    const std::vector<TaskProfile> clean{{1.0, 0.5, 0.0}};
    const std::vector<TaskProfile> noisy{{1.0, 0.5, 0.25}};
    const MultiTaskDataset a = generate_synthetic(2000, 4, clean, 3);
    const MultiTaskDataset b = generate_synthetic(2000, 4, noisy, 3);
    std::size_t flips = 0;
    for (std::size_t i = 0; i < a.n_samples(); ++i) flips += a.label(i, 0) != b.label(i, 0);
    const double rate = double(flips) / double(a.n_samples());
    CHECK(rate > 0.15);
    CHECK(rate < 0.35);
}

TEST_CASE("normalize_pixels: affine map onto [-1,1]") {
    const std::vector<double> out = normalize_pixels({0.5, 1.0, 0.0});
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 1.0);
    CHECK(out[2] == -1.0);
    CHECK_THROWS_AS(normalize_pixels({1.5}), Error);
    CHECK_THROWS_AS(normalize_pixels({-0.1}), Error);

    // Strictly monotone, and the inverse recovers the input to round-off.
    std::vector<double> xs;
    for (int i = 0; i <= 100; ++i) xs.push_back(i / 100.0);
    const std::vector<double> ys = normalize_pixels(xs);
    for (std::size_t i = 1; i < ys.size(); ++i) CHECK(ys[i] > ys[i - 1]);
    for (std::size_t i = 0; i < ys.size(); ++i)
        CHECK(ys[i] * 0.5 + 0.5 == doctest::Approx(xs[i]).epsilon(1e-15));
}

TEST_CASE("load_csv: minimal schema") {
    const auto path = temp_file("minimal.csv");
    {
        std::ofstream f(path);
        f << "x_0,x_1,y_a\n0.5,-1.25,1\n3,0.125,0\n";
    }
    const MultiTaskDataset ds = load_csv(path.string());
    CHECK(ds.n_samples() == 2);
    CHECK(ds.n_features() == 2);
    CHECK(ds.n_tasks() == 1);
    CHECK(ds.task_names[0] == "a");
    CHECK(ds.features(0, 1) == -1.25);
    CHECK(ds.label(0, 0) == 1);
    CHECK(ds.label(1, 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("load_csv: malformed rows are rejected with their line number") {
    const auto path = temp_file("badlabel.csv");
    {
        std::ofstream f(path);
        f << "x_0,y_a\n0.5,1\n0.25,2\n";
    }
    try {
        load_csv(path.string());
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == errc::bad_label);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::filesystem::remove(path);

    const auto path2 = temp_file("badfield.csv");
    {
        std::ofstream f(path2);
        f << "x_0,y_a\nnope,1\n";
    }
    CHECK_THROWS_AS(load_csv(path2.string()), Error);
    std::filesystem::remove(path2);

    const auto path3 = temp_file("badheader.csv");
    {
        std::ofstream f(path3);
        f << "x_0,z_a\n0.5,1\n";
    }
    CHECK_THROWS_AS(load_csv(path3.string()), Error);
    std::filesystem::remove(path3);

    CHECK_THROWS_AS(load_csv("/nonexistent/never.csv"), Error);
}

TEST_CASE("csv round-trip preserves the dataset at serialization precision") {
    const MultiTaskDataset ds = generate_synthetic(40, 3, {{1.0, 0.4, 0.0}, {2.0, 0.6, 0.0}}, 21);
    const auto path = temp_file("roundtrip.csv");
    save_csv(ds, path.string());
    const MultiTaskDataset back = load_csv(path.string());
    REQUIRE(back.n_samples() == ds.n_samples());
    REQUIRE(back.n_features() == ds.n_features());
    CHECK(back.labels == ds.labels);
    CHECK(back.task_names == ds.task_names);
    for (std::size_t i = 0; i < ds.features.data.size(); ++i)
        CHECK(back.features.data[i] ==
              doctest::Approx(ds.features.data[i]).epsilon(1e-8));
    std::filesystem::remove(path);
}

TEST_CASE("split: deterministic, disjoint, exhaustive") {
    const MultiTaskDataset ds = generate_synthetic(10, 2, {{1.0, 0.5, 0.0}}, 4);
    const SplitDataset parts = split(ds, 0.8, 11);
    CHECK(parts.train.n_samples() == 8);
    CHECK(parts.validation.n_samples() == 2);

    const SplitDataset again = split(ds, 0.8, 11);
    CHECK(parts.train.features.data == again.train.features.data);
    CHECK(parts.validation.features.data == again.validation.features.data);

    // Every original row appears exactly once across the two parts.
    std::multiset<std::vector<double>> rows;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        std::vector<double> row(ds.n_features());
        for (std::size_t j = 0; j < ds.n_features(); ++j) row[j] = ds.features(i, j);
        rows.insert(row);
    }
    std::multiset<std::vector<double>> got;
    for (const auto* part : {&parts.train, &parts.validation})
        for (std::size_t i = 0; i < part->n_samples(); ++i) {
            std::vector<double> row(part->n_features());
            for (std::size_t j = 0; j < part->n_features(); ++j) row[j] = part->features(i, j);
            got.insert(row);
        }
    CHECK(rows == got);

    CHECK_THROWS_AS(split(ds, 0.0, 1), Error);
    CHECK_THROWS_AS(split(ds, 1.0, 1), Error);
    const MultiTaskDataset tiny = generate_synthetic(1, 2, {{1.0, 0.5, 0.0}}, 4);
    CHECK_THROWS_AS(split(tiny, 0.5, 1), Error);

    // Extreme fractions still leave both parts non-empty.
    const SplitDataset skewed = split(ds, 0.01, 2);
    CHECK(skewed.train.n_samples() == 1);
    CHECK(skewed.validation.n_samples() == 9);
}

TEST_CASE("batches: partition with epoch-dependent order") {
    const auto blocks = batches(5, 2, 7, 0);
    REQUIRE(blocks.size() == 3);
    CHECK(blocks[0].size() == 2);
    CHECK(blocks[1].size() == 2);
    CHECK(blocks[2].size() == 1);

    std::vector<std::size_t> all;
    for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<std::size_t>{0, 1, 2, 3, 4});

    CHECK(batches(100, 10, 7, 0) == batches(100, 10, 7, 0));
    CHECK(batches(100, 10, 7, 0) != batches(100, 10, 7, 1));
    CHECK(batches(100, 10, 7, 0) != batches(100, 10, 8, 0));
    CHECK_THROWS_AS(batches(10, 0, 1, 0), Error);
}

TEST_CASE("select_task keeps features and one label column") {
    const MultiTaskDataset ds = generate_synthetic(20, 3, {{1.0, 0.5, 0.0}, {0.4, 0.3, 0.0}}, 6);
    const MultiTaskDataset one = select_task(ds, 1);
    CHECK(one.n_tasks() == 1);
    CHECK(one.task_names[0] == "task_1");
    CHECK(one.features.data == ds.features.data);
    for (std::size_t i = 0; i < ds.n_samples(); ++i) CHECK(one.label(i, 0) == ds.label(i, 1));
    CHECK_THROWS_AS(select_task(ds, 2), Error);
}
