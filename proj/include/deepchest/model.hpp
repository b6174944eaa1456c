#ifndef DEEPCHEST_MODEL_HPP
#define DEEPCHEST_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "deepchest/controller.hpp"
#include "deepchest/matrix.hpp"

namespace deepchest {

/// Fully connected layer, weights stored out_dim x in_dim.
struct DenseLayer {
    Matrix w;
    std::vector<double> b;
};

/// Linear readout producing one logit for one task.
struct TaskHead {
    std::vector<double> w;
    double b = 0.0;
};

/// Shared trunk of ReLU layers plus one linear head per task. An empty trunk
/// is the identity: heads read the raw input.
struct ModelParams {
    std::size_t input_dim = 0;
    std::vector<DenseLayer> trunk;
    std::vector<TaskHead> heads;

    std::size_t n_tasks() const { return heads.size(); }
    std::size_t trunk_out_dim() const { return trunk.empty() ? input_dim : trunk.back().b.size(); }
};

/// Gradients share the parameter layout.
using ModelGrads = ModelParams;

/// Everything forward() keeps for backward(): the input batch, per-layer
/// pre-activations and activations, logits and sigmoid probabilities.
struct ForwardCache {
    Matrix input;                // batch x input_dim
    std::vector<Matrix> pre;     // per trunk layer, batch x out_dim
    std::vector<Matrix> act;     // relu(pre)
    Matrix logits;               // batch x n_tasks
    Matrix probs;                // sigmoid(logits)
};

/// Random parameters: weights zero-mean normal scaled by 1/sqrt(fan_in),
/// biases zero. Deterministic in the seed.
ModelParams init_params(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                        std::size_t n_tasks, std::uint64_t seed);

ForwardCache forward(const ModelParams& params, const Matrix& batch);

/// Per-task mean binary cross-entropy over the batch, evaluated in logit
/// form: max(z,0) - z*y + log1p(exp(-|z|)). Never exponentiates a positive
/// argument, so large logits cannot overflow.
std::vector<double> task_losses(const Matrix& logits, const Matrix& labels);

/// Analytic gradient of weighted_total_loss(weights, task_losses(...)) with
/// respect to every parameter. Trunk gradients accumulate per-task
/// contributions in task order, so results are bit-reproducible.
ModelGrads backward(const ModelParams& params, const ForwardCache& cache, const Matrix& labels,
                    const WeightVector& weights);

/// Central finite differences of the same objective, one parameter at a
/// time: (f(x+eps) - f(x-eps)) / (2 eps). The reference backward() is
/// checked against.
ModelGrads numeric_gradient(const ModelParams& params, const Matrix& batch, const Matrix& labels,
                            const WeightVector& weights, double eps);

/// theta' = theta - lr * g, elementwise; inputs untouched.
ModelParams sgd_step(const ModelParams& params, const ModelGrads& grads, double lr);

/// Applies fn to every parameter in declaration order (trunk layer by layer,
/// weights then bias, then heads).
template <typename Params, typename Fn>
void for_each_param(Params& p, Fn&& fn) {
    for (auto& layer : p.trunk) {
        for (auto& v : layer.w.data) fn(v);
        for (auto& v : layer.b) fn(v);
    }
    for (auto& head : p.heads) {
        for (auto& v : head.w) fn(v);
        fn(head.b);
    }
}

std::size_t param_count(const ModelParams& p);

/// Text checkpoint: a short header (dims, task count, seed) followed by one
/// parameter per line in declaration order, printed with 17 significant
/// digits so reloads are bit-exact. Format documented in the README.
void save_params(const ModelParams& params, std::uint64_t seed, const std::string& path);
ModelParams load_params(const std::string& path, std::uint64_t* seed_out = nullptr);

} // namespace deepchest

#endif
