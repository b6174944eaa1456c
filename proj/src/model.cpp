#include "deepchest/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "deepchest/error.hpp"
#include "deepchest/rng.hpp"

namespace deepchest {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_labels(const Matrix& labels) {
    for (double y : labels.data)
        if (y != 0.0 && y != 1.0) fail(errc::bad_label, "labels must be 0 or 1");
}

} // namespace

ModelParams init_params(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                        std::size_t n_tasks, std::uint64_t seed) {
    if (input_dim < 1) fail(errc::bad_dimension, "init_params: input_dim must be >= 1");
    if (n_tasks < 1) fail(errc::bad_dimension, "init_params: n_tasks must be >= 1");
    for (std::size_t h : hidden_dims)
        if (h < 1) fail(errc::bad_dimension, "init_params: hidden dims must be >= 1");

    Rng rng(derive_seed(seed, 0x11D0));
    ModelParams p;
    p.input_dim = input_dim;
    std::size_t in = input_dim;
    for (std::size_t h : hidden_dims) {
        DenseLayer layer;
        layer.w = Matrix(h, in);
        layer.b.assign(h, 0.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(in));
        for (auto& v : layer.w.data) v = rng.normal() * scale;
        p.trunk.push_back(std::move(layer));
        in = h;
    }
    const double head_scale = 1.0 / std::sqrt(static_cast<double>(in));
    for (std::size_t t = 0; t < n_tasks; ++t) {
        TaskHead head;
        head.w.assign(in, 0.0);
        for (auto& v : head.w) v = rng.normal() * head_scale;
        head.b = 0.0;
        p.heads.push_back(std::move(head));
    }
    return p;
}

ForwardCache forward(const ModelParams& params, const Matrix& batch) {
    if (batch.rows == 0) fail(errc::shape_mismatch, "forward: empty batch");
    if (batch.cols != params.input_dim)
        fail(errc::shape_mismatch, "forward: batch has " + std::to_string(batch.cols) +
                                       " features, model expects " +
                                       std::to_string(params.input_dim));
    const std::size_t n = batch.rows;
    ForwardCache cache;
    cache.input = batch;

    const Matrix* cur = &cache.input;
    for (const auto& layer : params.trunk) {
        const std::size_t out = layer.b.size();
        Matrix z(n, out);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < out; ++j) {
                double s = layer.b[j];
                for (std::size_t k = 0; k < cur->cols; ++k) s += (*cur)(i, k) * layer.w(j, k);
                z(i, j) = s;
            }
        }
        Matrix a = z;
        for (auto& v : a.data) v = v > 0.0 ? v : 0.0;
        cache.pre.push_back(std::move(z));
        cache.act.push_back(std::move(a));
        cur = &cache.act.back();
    }

    const std::size_t tcount = params.n_tasks();
    cache.logits = Matrix(n, tcount);
    cache.probs = Matrix(n, tcount);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t t = 0; t < tcount; ++t) {
            const auto& head = params.heads[t];
            double s = head.b;
            for (std::size_t k = 0; k < cur->cols; ++k) s += (*cur)(i, k) * head.w[k];
            cache.logits(i, t) = s;
            cache.probs(i, t) = sigmoid(s);
        }
    }
    return cache;
}

std::vector<double> task_losses(const Matrix& logits, const Matrix& labels) {
    if (!logits.same_shape(labels))
        fail(errc::shape_mismatch, "task_losses: logits and labels differ in shape");
    if (logits.rows == 0) fail(errc::shape_mismatch, "task_losses: empty batch");
    check_labels(labels);
    std::vector<double> losses(logits.cols, 0.0);
    for (std::size_t t = 0; t < logits.cols; ++t) {
        double sum = 0.0;
        for (std::size_t i = 0; i < logits.rows; ++i) {
            const double z = logits(i, t);
            const double y = labels(i, t);
            sum += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
        }
        losses[t] = sum / static_cast<double>(logits.rows);
    }
    return losses;
}

ModelGrads backward(const ModelParams& params, const ForwardCache& cache, const Matrix& labels,
                    const WeightVector& weights) {
    const std::size_t n = cache.input.rows;
    const std::size_t tcount = params.n_tasks();
    if (!cache.logits.same_shape(labels))
        fail(errc::shape_mismatch, "backward: labels do not match cached logits");
    if (weights.size() != tcount)
        fail(errc::shape_mismatch, "backward: " + std::to_string(weights.size()) +
                                       " weights for " + std::to_string(tcount) + " heads");
    check_labels(labels);

    ModelGrads g;
    g.input_dim = params.input_dim;
    for (const auto& layer : params.trunk)
        g.trunk.push_back({Matrix(layer.w.rows, layer.w.cols), std::vector<double>(layer.b.size(), 0.0)});
    for (const auto& head : params.heads)
        g.heads.push_back({std::vector<double>(head.w.size(), 0.0), 0.0});

    const Matrix& trunk_out = params.trunk.empty() ? cache.input : cache.act.back();

    // d(weighted total loss)/d(logit_it) = w_t * (p_it - y_it) / n
    Matrix dlogits(n, tcount);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < tcount; ++t)
            dlogits(i, t) = weights[t] * (cache.probs(i, t) - labels(i, t)) / static_cast<double>(n);

    // Heads, then the trunk-output gradient accumulated in task order.
    Matrix dtrunk(n, trunk_out.cols);
    for (std::size_t t = 0; t < tcount; ++t) {
        auto& hg = g.heads[t];
        const auto& head = params.heads[t];
        for (std::size_t i = 0; i < n; ++i) {
            const double d = dlogits(i, t);
            hg.b += d;
            for (std::size_t k = 0; k < trunk_out.cols; ++k) {
                hg.w[k] += d * trunk_out(i, k);
                dtrunk(i, k) += d * head.w[k];
            }
        }
    }

    // Trunk layers, last to first.
    Matrix dout = std::move(dtrunk);
    for (std::size_t li = params.trunk.size(); li-- > 0;) {
        const auto& layer = params.trunk[li];
        const Matrix& pre = cache.pre[li];
        const Matrix& in = li == 0 ? cache.input : cache.act[li - 1];
        Matrix dz = dout;
        for (std::size_t idx = 0; idx < dz.data.size(); ++idx)
            if (pre.data[idx] <= 0.0) dz.data[idx] = 0.0;

        auto& lg = g.trunk[li];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < layer.w.rows; ++j) {
                const double d = dz(i, j);
                lg.b[j] += d;
                for (std::size_t k = 0; k < layer.w.cols; ++k) lg.w(j, k) += d * in(i, k);
            }
        }
        if (li > 0) {
            Matrix din(n, layer.w.cols);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < layer.w.rows; ++j) {
                    const double d = dz(i, j);
                    for (std::size_t k = 0; k < layer.w.cols; ++k) din(i, k) += d * layer.w(j, k);
                }
            dout = std::move(din);
        }
    }
    return g;
}

ModelGrads numeric_gradient(const ModelParams& params, const Matrix& batch, const Matrix& labels,
                            const WeightVector& weights, double eps) {
    if (!(eps > 0.0)) fail(errc::out_of_range, "numeric_gradient: eps must be positive");
    ModelParams work = params;
    const auto objective = [&]() {
        const ForwardCache cache = forward(work, batch);
        return weighted_total_loss(weights, task_losses(cache.logits, labels));
    };

    std::vector<double*> slots;
    for_each_param(work, [&](double& v) { slots.push_back(&v); });

    ModelGrads g = params; // same layout; values overwritten below
    std::vector<double*> out;
    for_each_param(g, [&](double& v) { out.push_back(&v); });

    for (std::size_t k = 0; k < slots.size(); ++k) {
        const double saved = *slots[k];
        *slots[k] = saved + eps;
        const double hi = objective();
        *slots[k] = saved - eps;
        const double lo = objective();
        *slots[k] = saved;
        *out[k] = (hi - lo) / (2.0 * eps);
    }
    return g;
}

ModelParams sgd_step(const ModelParams& params, const ModelGrads& grads, double lr) {
    if (param_count(params) != param_count(grads))
        fail(errc::shape_mismatch, "sgd_step: gradient layout differs from parameters");
    ModelParams next = params;
    std::vector<const double*> gslots;
    for_each_param(grads, [&](const double& v) { gslots.push_back(&v); });
    std::size_t k = 0;
    for_each_param(next, [&](double& v) { v -= lr * *gslots[k++]; });
    return next;
}

std::size_t param_count(const ModelParams& p) {
    std::size_t n = 0;
    for_each_param(p, [&](const double&) { ++n; });
    return n;
}

void save_params(const ModelParams& params, std::uint64_t seed, const std::string& path) {
    std::ostringstream out;
    out << "deepchest-params v1\n";
    out << "input_dim " << params.input_dim << "\n";
    out << "hidden_dims";
    for (const auto& layer : params.trunk) out << " " << layer.b.size();
    out << "\n";
    out << "n_tasks " << params.heads.size() << "\n";
    out << "seed " << seed << "\n";
    char buf[40];
    for_each_param(params, [&](const double& v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << "\n";
    });
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(errc::io_error, "save_params: cannot open " + path);
    f << out.str();
    if (!f.good()) fail(errc::io_error, "save_params: write failed for " + path);
}

ModelParams load_params(const std::string& path, std::uint64_t* seed_out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail(errc::file_not_found, "load_params: cannot open " + path);
    std::string line;
    auto bad = [&](const std::string& why) { fail(errc::parse_error, "load_params: " + why); };

    if (!std::getline(f, line) || line != "deepchest-params v1") bad("missing header");
    std::size_t input_dim = 0, n_tasks = 0;
    std::vector<std::size_t> hidden;
    std::uint64_t seed = 0;

    if (!std::getline(f, line)) bad("truncated header");
    if (std::sscanf(line.c_str(), "input_dim %zu", &input_dim) != 1) bad("input_dim line");
    if (!std::getline(f, line)) bad("truncated header");
    {
        std::istringstream hs(line);
        std::string key;
        hs >> key;
        if (key != "hidden_dims") bad("hidden_dims line");
        std::size_t h;
        while (hs >> h) hidden.push_back(h);
    }
    if (!std::getline(f, line)) bad("truncated header");
    if (std::sscanf(line.c_str(), "n_tasks %zu", &n_tasks) != 1) bad("n_tasks line");
    if (!std::getline(f, line)) bad("truncated header");
    unsigned long long seed_raw = 0;
    if (std::sscanf(line.c_str(), "seed %llu", &seed_raw) != 1) bad("seed line");
    seed = seed_raw;

    ModelParams p;
    p.input_dim = input_dim;
    std::size_t in = input_dim;
    for (std::size_t h : hidden) {
        p.trunk.push_back({Matrix(h, in), std::vector<double>(h, 0.0)});
        in = h;
    }
    for (std::size_t t = 0; t < n_tasks; ++t) p.heads.push_back({std::vector<double>(in, 0.0), 0.0});

    std::size_t read = 0;
    const std::size_t expect = param_count(p);
    bool ok = true;
    for_each_param(p, [&](double& v) {
        if (!std::getline(f, line)) { ok = false; return; }
        v = std::strtod(line.c_str(), nullptr);
        ++read;
    });
    if (!ok || read != expect) bad("expected " + std::to_string(expect) + " parameters");
    if (seed_out) *seed_out = seed;
    return p;
}

} // namespace deepchest
