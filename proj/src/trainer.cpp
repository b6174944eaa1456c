#include "deepchest/trainer.hpp"

#include <chrono>
#include <cmath>

#include "deepchest/error.hpp"
#include "deepchest/model.hpp"

namespace deepchest {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct EvalResult {
    std::vector<double> losses;
    std::vector<double> accuracies;
};

EvalResult evaluate(const ModelParams& params, const MultiTaskDataset& ds) {
    Matrix x, y;
    std::vector<std::size_t> rows(ds.n_samples());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    gather_batch(ds, rows, x, y);
    const ForwardCache cache = forward(params, x);

    EvalResult res;
    res.losses = task_losses(cache.logits, y);
    res.accuracies.reserve(ds.n_tasks());
    std::vector<double> probs(ds.n_samples());
    std::vector<int> labels(ds.n_samples());
    for (std::size_t t = 0; t < ds.n_tasks(); ++t) {
        for (std::size_t i = 0; i < ds.n_samples(); ++i) {
            probs[i] = cache.probs(i, t);
            labels[i] = ds.label(i, t);
        }
        res.accuracies.push_back(binary_accuracy(probs, labels, 0.5));
    }
    return res;
}

/// The epoch loop shared by single-task and joint runs. stream_seed drives
/// model init and batch shuffling; the data split is done by the caller.
RunLog train_loop(const MultiTaskDataset& train, const MultiTaskDataset& validation,
                  const Hyperparams& hp, Strategy strategy, const WeightVector& initial,
                  std::uint64_t stream_seed, double controller_setup_seconds) {
    const auto run_start = Clock::now();
    const std::size_t tcount = train.n_tasks();
    const std::size_t n_train = train.n_samples();

    ModelParams params = init_params(train.n_features(), hp.hidden_dims, tcount, stream_seed);

    RunLog log;
    log.controller_seconds = controller_setup_seconds;
    WeightVector current = initial;
    const WeightVector init_copy = initial;

    Matrix x, y;
    std::vector<double> loss_sums(tcount), train_acc(tcount);
    std::vector<std::size_t> correct(tcount);

    for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        std::fill(loss_sums.begin(), loss_sums.end(), 0.0);
        std::fill(correct.begin(), correct.end(), std::size_t{0});

        for (const auto& block : batches(n_train, hp.batch_size, stream_seed, epoch)) {
            gather_batch(train, block, x, y);
            const ForwardCache cache = forward(params, x);

            // Running training accuracy: predictions as the batch is seen,
            // before this batch's SGD step.
            for (std::size_t t = 0; t < tcount; ++t) {
                for (std::size_t i = 0; i < block.size(); ++i) {
                    const int pred = cache.probs(i, t) >= 0.5 ? 1 : 0;
                    if (pred == static_cast<int>(y(i, t))) ++correct[t];
                }
            }
            const std::vector<double> losses = task_losses(cache.logits, y);
            for (std::size_t t = 0; t < tcount; ++t)
                loss_sums[t] += losses[t] * static_cast<double>(block.size());

            const ModelGrads grads = backward(params, cache, y, current);
            params = sgd_step(params, grads, hp.learning_rate);
        }

        EpochStats stats;
        stats.epoch = epoch;
        for (std::size_t t = 0; t < tcount; ++t) {
            const double mean_loss = loss_sums[t] / static_cast<double>(n_train);
            if (!std::isfinite(mean_loss))
                fail(errc::divergence, "training loss of task " + std::to_string(t) +
                                           " became non-finite at epoch " + std::to_string(epoch));
            train_acc[t] = static_cast<double>(correct[t]) / static_cast<double>(n_train);
            stats.per_task.push_back({current[t], mean_loss, train_acc[t]});
        }
        log.epoch_stats.push_back(std::move(stats));

        const auto ctrl_start = Clock::now();
        current = weights_for_epoch(strategy, init_copy, current, train_acc, hp.weight_cfg);
        log.controller_seconds += seconds_since(ctrl_start);
    }
    log.final_weights = current;

    const EvalResult val = evaluate(params, validation);
    log.final_val_losses = val.losses;
    log.final_val_accuracies = val.accuracies;
    for (double l : log.final_val_losses)
        if (!std::isfinite(l)) fail(errc::divergence, "validation loss became non-finite");

    log.total_seconds = seconds_since(run_start);
    return log;
}

} // namespace

void validate_hyperparams(const Hyperparams& hp) {
    if (hp.epochs < 1) fail(errc::out_of_range, "Hyperparams: epochs must be >= 1");
    if (hp.batch_size < 1) fail(errc::bad_batch_size, "Hyperparams: batch_size must be >= 1");
    if (!(hp.learning_rate >= 0.0) || !std::isfinite(hp.learning_rate))
        fail(errc::out_of_range, "Hyperparams: learning_rate must be finite and >= 0");
    if (!(hp.train_fraction > 0.0 && hp.train_fraction < 1.0))
        fail(errc::bad_fraction, "Hyperparams: train_fraction must lie in (0,1)");
    validate_config(hp.weight_cfg);
}

StlResult train_stl(const MultiTaskDataset& ds, std::size_t task_index, const Hyperparams& hp) {
    validate_hyperparams(hp);
    if (task_index >= ds.n_tasks())
        fail(errc::out_of_range, "train_stl: task " + std::to_string(task_index) + " of " +
                                     std::to_string(ds.n_tasks()));
    const SplitDataset parts = split(ds, hp.train_fraction, hp.seed);
    const MultiTaskDataset train = select_task(parts.train, task_index);
    const MultiTaskDataset val = select_task(parts.validation, task_index);

    StlResult res;
    res.log = train_loop(train, val, hp, Strategy::uniform, WeightVector{1.0},
                         hp.seed + task_index, 0.0);
    res.val_accuracy = res.log.final_val_accuracies[0];
    res.val_loss = res.log.final_val_losses[0];
    return res;
}

RunLog train_mtl(const MultiTaskDataset& ds, const Hyperparams& hp,
                 const std::vector<double>& stl_acc) {
    validate_hyperparams(hp);
    const std::size_t tcount = ds.n_tasks();
    if (tcount == 0) fail(errc::empty_tasks, "train_mtl: dataset has no tasks");
    if (stl_acc.size() != tcount)
        fail(errc::length_mismatch, "train_mtl: " + std::to_string(stl_acc.size()) +
                                        " single-task accuracies for " + std::to_string(tcount) +
                                        " tasks");

    double ctrl_setup = 0.0;
    WeightVector initial;
    if (hp.strategy == Strategy::uniform) {
        initial.assign(tcount, 1.0);
    } else {
        const auto t0 = Clock::now();
        initial = init_weights(stl_acc, hp.weight_cfg);
        ctrl_setup = seconds_since(t0);
    }

    const SplitDataset parts = split(ds, hp.train_fraction, hp.seed);
    RunLog log = train_loop(parts.train, parts.validation, hp, hp.strategy, initial, hp.seed,
                            ctrl_setup);
    log.stl_accuracies = stl_acc;
    return log;
}

ComparisonReport run_comparison(const MultiTaskDataset& ds, const Hyperparams& hp,
                                const std::vector<Strategy>& strategies) {
    validate_hyperparams(hp);
    if (ds.n_tasks() == 0) fail(errc::empty_tasks, "run_comparison: dataset has no tasks");
    if (strategies.empty()) fail(errc::bad_config, "run_comparison: no strategies");

    ComparisonReport report;
    report.task_names = ds.task_names;
    for (std::size_t t = 0; t < ds.n_tasks(); ++t) {
        const StlResult stl = train_stl(ds, t, hp);
        report.stl_accuracies.push_back(stl.val_accuracy);
        report.stl_losses.push_back(stl.val_loss);
    }

    for (Strategy s : strategies) {
        Hyperparams run_hp = hp;
        run_hp.strategy = s;
        report.mtl_runs.emplace_back(s, train_mtl(ds, run_hp, report.stl_accuracies));
    }

    for (const auto& [s, log] : report.mtl_runs) {
        if (s == Strategy::deepchest) {
            report.delta_m =
                make_delta_m_report(report.task_names, report.stl_losses, log.final_val_losses);
            report.has_delta_m = true;
            break;
        }
    }
    return report;
}

} // namespace deepchest
