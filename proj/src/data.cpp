#include "deepchest/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "deepchest/error.hpp"
#include "deepchest/rng.hpp"
#include "deepchest/textio.hpp"

namespace deepchest {

namespace {

// Residual scale of the latent score; margin is measured against this.
constexpr double kLatentNoiseSd = 0.25;

// Stream tags so features, per-task labels, splitting and batching draw from
// unrelated parts of the seed space.
constexpr std::uint64_t kFeatureStream = 0xFEA7;
constexpr std::uint64_t kTaskStreamBase = 0x7A50;
constexpr std::uint64_t kSplitStream = 0x5917;
constexpr std::uint64_t kBatchStreamBase = 0xBA7C;

void validate_profile(const TaskProfile& p, std::size_t t) {
    if (!(p.positive_rate > 0.0 && p.positive_rate < 1.0))
        fail(errc::bad_profile, "task " + std::to_string(t) + ": positive_rate must lie in (0,1)");
    if (!(p.label_noise >= 0.0 && p.label_noise < 0.5))
        fail(errc::bad_profile, "task " + std::to_string(t) + ": label_noise must lie in [0,0.5)");
    if (!std::isfinite(p.margin))
        fail(errc::bad_profile, "task " + std::to_string(t) + ": margin must be finite");
}

} // namespace

MultiTaskDataset generate_synthetic(std::size_t n, std::size_t d,
                                    const std::vector<TaskProfile>& profiles, std::uint64_t seed) {
    if (n < 1) fail(errc::bad_dimension, "generate_synthetic: n must be >= 1");
    if (d < 1) fail(errc::bad_dimension, "generate_synthetic: d must be >= 1");
    if (profiles.empty()) fail(errc::bad_profile, "generate_synthetic: no task profiles");
    for (std::size_t t = 0; t < profiles.size(); ++t) validate_profile(profiles[t], t);

    MultiTaskDataset ds;
    ds.features = Matrix(n, d);
    {
        Rng rng(derive_seed(seed, kFeatureStream));
        for (auto& v : ds.features.data) v = rng.normal();
    }

    const std::size_t tcount = profiles.size();
    ds.labels.assign(n * tcount, 0);
    ds.task_names.reserve(tcount);
    for (std::size_t t = 0; t < tcount; ++t) ds.task_names.push_back("task_" + std::to_string(t));

    std::vector<double> latent(n);
    for (std::size_t t = 0; t < tcount; ++t) {
        const TaskProfile& prof = profiles[t];
        Rng rng(derive_seed(seed, kTaskStreamBase + t));

        std::vector<double> normal_dir(d);
        double norm_sq = 0.0;
        for (auto& u : normal_dir) {
            u = rng.normal();
            norm_sq += u * u;
        }
        const double inv_norm = norm_sq > 0.0 ? 1.0 / std::sqrt(norm_sq) : 1.0;
        for (auto& u : normal_dir) u *= inv_norm;

        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += normal_dir[j] * ds.features(i, j);
            latent[i] = prof.margin * s + rng.normal() * kLatentNoiseSd;
        }

        // Threshold at the empirical quantile so the realized positive count
        // is round(n * positive_rate) up to latent-score ties.
        std::vector<double> sorted = latent;
        std::sort(sorted.begin(), sorted.end());
        const auto n_pos = static_cast<std::size_t>(
            std::llround(prof.positive_rate * static_cast<double>(n)));
        double tau;
        if (n_pos == 0)
            tau = sorted.back() + 1.0;
        else if (n_pos >= n)
            tau = sorted.front();
        else
            tau = sorted[n - n_pos];

        for (std::size_t i = 0; i < n; ++i) {
            std::uint8_t y = latent[i] >= tau ? 1 : 0;
            if (prof.label_noise > 0.0 && rng.uniform() < prof.label_noise) y = 1 - y;
            ds.label(i, t) = y;
        }
    }
    return ds;
}

std::vector<double> normalize_pixels(const std::vector<double>& x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) {
        if (!(v >= 0.0 && v <= 1.0))
            fail(errc::out_of_range, "normalize_pixels: value " + std::to_string(v) +
                                         " outside [0,1]");
        out.push_back((v - 0.5) / 0.5);
    }
    return out;
}

MultiTaskDataset load_csv(const std::string& path) {
    const std::string content = read_file(path);

    std::vector<std::string_view> lines;
    {
        std::string_view rest = content;
        while (!rest.empty()) {
            const std::size_t nl = rest.find('\n');
            if (nl == std::string_view::npos) {
                lines.push_back(rest);
                break;
            }
            lines.push_back(rest.substr(0, nl));
            rest = rest.substr(nl + 1);
        }
    }
    if (lines.empty()) fail(errc::parse_error, path + ": empty file");

    const auto header = split_csv_line(lines[0]);
    std::size_t d = 0;
    std::vector<std::string> task_names;
    bool in_labels = false;
    for (const auto& col : header) {
        if (col.substr(0, 2) == "x_") {
            if (in_labels)
                fail(errc::parse_error, path + ": line 1: feature column after label columns");
            ++d;
        } else if (col.substr(0, 2) == "y_") {
            in_labels = true;
            task_names.emplace_back(col.substr(2));
        } else {
            fail(errc::parse_error,
                 path + ": line 1: column '" + std::string(col) + "' must start with x_ or y_");
        }
    }
    if (d == 0) fail(errc::parse_error, path + ": line 1: no feature columns");
    if (task_names.empty()) fail(errc::parse_error, path + ": line 1: no label columns");

    const std::size_t tcount = task_names.size();
    MultiTaskDataset ds;
    ds.task_names = std::move(task_names);

    std::vector<double> feat;
    std::vector<std::uint8_t> labels;
    std::size_t n = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty() && li + 1 == lines.size()) break; // trailing newline
        const auto fields = split_csv_line(lines[li]);
        const std::string where = path + ": line " + std::to_string(li + 1);
        if (fields.size() != d + tcount)
            fail(errc::parse_error, where + ": expected " + std::to_string(d + tcount) +
                                        " fields, got " + std::to_string(fields.size()));
        for (std::size_t j = 0; j < d; ++j) {
            double v;
            if (!parse_double(fields[j], v) || !std::isfinite(v))
                fail(errc::parse_error, where + ": bad feature '" + std::string(fields[j]) + "'");
            feat.push_back(v);
        }
        for (std::size_t t = 0; t < tcount; ++t) {
            const auto& fv = fields[d + t];
            if (fv == "0")
                labels.push_back(0);
            else if (fv == "1")
                labels.push_back(1);
            else
                fail(errc::bad_label, where + ": label '" + std::string(fv) + "' is not 0 or 1");
        }
        ++n;
    }
    if (n == 0) fail(errc::parse_error, path + ": no data rows");

    ds.features.rows = n;
    ds.features.cols = d;
    ds.features.data = std::move(feat);
    ds.labels = std::move(labels);
    return ds;
}

std::string to_csv(const MultiTaskDataset& ds) {
    std::ostringstream out;
    for (std::size_t j = 0; j < ds.n_features(); ++j) {
        if (j) out << ',';
        out << "x_" << j;
    }
    for (const auto& name : ds.task_names) out << ",y_" << name;
    out << '\n';
    for (std::size_t i = 0; i < ds.n_samples(); ++i) {
        for (std::size_t j = 0; j < ds.n_features(); ++j) {
            if (j) out << ',';
            out << fmt_g9(ds.features(i, j));
        }
        for (std::size_t t = 0; t < ds.n_tasks(); ++t) out << ',' << int(ds.label(i, t));
        out << '\n';
    }
    return out.str();
}

void save_csv(const MultiTaskDataset& ds, const std::string& path) {
    atomic_write_file(path, to_csv(ds));
}

namespace {

MultiTaskDataset take_rows(const MultiTaskDataset& ds, const std::vector<std::size_t>& rows) {
    MultiTaskDataset out;
    out.task_names = ds.task_names;
    out.features = Matrix(rows.size(), ds.n_features());
    out.labels.assign(rows.size() * ds.n_tasks(), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t i = rows[r];
        for (std::size_t j = 0; j < ds.n_features(); ++j) out.features(r, j) = ds.features(i, j);
        for (std::size_t t = 0; t < ds.n_tasks(); ++t) out.label(r, t) = ds.label(i, t);
    }
    return out;
}

} // namespace

SplitDataset split(const MultiTaskDataset& ds, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        fail(errc::bad_fraction, "split: train_fraction must lie in (0,1)");
    const std::size_t n = ds.n_samples();
    if (n < 2) fail(errc::too_few_samples, "split: need at least 2 samples");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(seed, kSplitStream));
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(i + 1)]);

    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

    std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + static_cast<long>(n_train));
    std::vector<std::size_t> val_rows(perm.begin() + static_cast<long>(n_train), perm.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    return {take_rows(ds, train_rows), take_rows(ds, val_rows)};
}

std::vector<std::vector<std::size_t>> batches(std::size_t n, std::size_t batch_size,
                                              std::uint64_t seed, std::size_t epoch) {
    if (batch_size < 1) fail(errc::bad_batch_size, "batches: batch_size must be >= 1");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(seed, kBatchStreamBase + epoch));
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[rng.below(i)]);

    std::vector<std::vector<std::size_t>> blocks;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t end = std::min(n, start + batch_size);
        blocks.emplace_back(perm.begin() + static_cast<long>(start),
                            perm.begin() + static_cast<long>(end));
    }
    return blocks;
}

void gather_batch(const MultiTaskDataset& ds, const std::vector<std::size_t>& rows, Matrix& x,
                  Matrix& y) {
    x = Matrix(rows.size(), ds.n_features());
    y = Matrix(rows.size(), ds.n_tasks());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::size_t i = rows[r];
        for (std::size_t j = 0; j < ds.n_features(); ++j) x(r, j) = ds.features(i, j);
        for (std::size_t t = 0; t < ds.n_tasks(); ++t) y(r, t) = ds.label(i, t);
    }
}

MultiTaskDataset select_task(const MultiTaskDataset& ds, std::size_t task_index) {
    if (task_index >= ds.n_tasks())
        fail(errc::out_of_range, "select_task: task " + std::to_string(task_index) + " of " +
                                     std::to_string(ds.n_tasks()));
    MultiTaskDataset out;
    out.features = ds.features;
    out.task_names = {ds.task_names[task_index]};
    out.labels.resize(ds.n_samples());
    for (std::size_t i = 0; i < ds.n_samples(); ++i) out.labels[i] = ds.label(i, task_index);
    return out;
}

} // namespace deepchest
