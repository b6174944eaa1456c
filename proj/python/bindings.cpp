#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "deepchest/commands.hpp"
#include "deepchest/controller.hpp"
#include "deepchest/data.hpp"
#include "deepchest/metrics.hpp"
#include "deepchest/model.hpp"
#include "deepchest/simdyn.hpp"
#include "deepchest/trainer.hpp"

namespace py = pybind11;
using namespace deepchest;

namespace {

py::array_t<double> features_array(const MultiTaskDataset& ds) {
    py::array_t<double> arr({ds.n_samples(), ds.n_features()});
    std::memcpy(arr.mutable_data(), ds.features.data.data(),
                sizeof(double) * ds.features.data.size());
    return arr;
}

py::array_t<std::uint8_t> labels_array(const MultiTaskDataset& ds) {
    py::array_t<std::uint8_t> arr({ds.n_samples(), ds.n_tasks()});
    std::memcpy(arr.mutable_data(), ds.labels.data(), ds.labels.size());
    return arr;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Gradient-free dynamic task weighting for multi-task training";

    py::register_exception<Error>(m, "DeepchestError", PyExc_ValueError);

    py::enum_<Strategy>(m, "Strategy")
        .value("deepchest", Strategy::deepchest)
        .value("uniform", Strategy::uniform)
        .value("static_init", Strategy::static_init);
    m.def("strategy_from_name", &strategy_from_name, py::arg("name"));

    py::class_<WeightConfig>(m, "WeightConfig")
        .def(py::init([](double alpha, double beta, double w_max, double init_scale,
                         std::optional<double> w_floor) {
                 WeightConfig cfg{alpha, beta, w_max, init_scale, w_floor};
                 validate_config(cfg);
                 return cfg;
             }),
             py::arg("alpha") = 1.1, py::arg("beta") = 1.05, py::arg("w_max") = 5.0,
             py::arg("init_scale") = 0.5, py::arg("w_floor") = std::nullopt)
        .def_readwrite("alpha", &WeightConfig::alpha)
        .def_readwrite("beta", &WeightConfig::beta)
        .def_readwrite("w_max", &WeightConfig::w_max)
        .def_readwrite("init_scale", &WeightConfig::init_scale)
        .def_readwrite("w_floor", &WeightConfig::w_floor);

    m.def("init_weights", &init_weights, py::arg("stl_acc"), py::arg("cfg") = WeightConfig{});
    m.def("update_weights", &update_weights, py::arg("weights"), py::arg("train_acc"),
          py::arg("cfg") = WeightConfig{});
    m.def("weighted_total_loss", &weighted_total_loss, py::arg("weights"), py::arg("losses"));
    m.def("weights_for_epoch", &weights_for_epoch, py::arg("strategy"), py::arg("init"),
          py::arg("prev"), py::arg("train_acc"), py::arg("cfg") = WeightConfig{});

    m.def("binary_accuracy", &binary_accuracy, py::arg("probs"), py::arg("labels"),
          py::arg("threshold") = 0.5);
    m.def("average_accuracy", &average_accuracy, py::arg("acc"));
    m.def("delta_m_per_task", &delta_m_per_task, py::arg("mtl_loss"), py::arg("stl_loss"));
    m.def("delta_m_total", &delta_m_total, py::arg("per_task"));

    py::class_<DeltaMRow>(m, "DeltaMRow")
        .def_readonly("task", &DeltaMRow::task)
        .def_readonly("stl_loss", &DeltaMRow::stl_loss)
        .def_readonly("mtl_loss", &DeltaMRow::mtl_loss)
        .def_readonly("delta_m", &DeltaMRow::delta_m);
    py::class_<DeltaMReport>(m, "DeltaMReport")
        .def_readonly("per_task", &DeltaMReport::per_task)
        .def_readonly("total", &DeltaMReport::total);

    py::class_<TaskProfile>(m, "TaskProfile")
        .def(py::init([](double margin, double positive_rate, double label_noise) {
                 return TaskProfile{margin, positive_rate, label_noise};
             }),
             py::arg("margin") = 1.0, py::arg("positive_rate") = 0.5,
             py::arg("label_noise") = 0.0)
        .def_readwrite("margin", &TaskProfile::margin)
        .def_readwrite("positive_rate", &TaskProfile::positive_rate)
        .def_readwrite("label_noise", &TaskProfile::label_noise);

    py::class_<MultiTaskDataset>(m, "MultiTaskDataset")
        .def_property_readonly("features", &features_array)
        .def_property_readonly("labels", &labels_array)
        .def_readonly("task_names", &MultiTaskDataset::task_names)
        .def_property_readonly("n_samples", &MultiTaskDataset::n_samples)
        .def_property_readonly("n_features", &MultiTaskDataset::n_features)
        .def_property_readonly("n_tasks", &MultiTaskDataset::n_tasks);

    m.def("generate_synthetic", &generate_synthetic, py::arg("n"), py::arg("d"),
          py::arg("profiles"), py::arg("seed"));
    m.def("normalize_pixels", &normalize_pixels, py::arg("x"));
    m.def("load_csv", &load_csv, py::arg("path"));
    m.def("save_csv", &save_csv, py::arg("dataset"), py::arg("path"));
    m.def(
        "split",
        [](const MultiTaskDataset& ds, double train_fraction, std::uint64_t seed) {
            SplitDataset parts = split(ds, train_fraction, seed);
            return py::make_tuple(std::move(parts.train), std::move(parts.validation));
        },
        py::arg("dataset"), py::arg("train_fraction"), py::arg("seed"));

    py::class_<SimTask>(m, "SimTask")
        .def(py::init([](double ceiling, double rate, double noise_sd) {
                 return SimTask{ceiling, rate, noise_sd};
             }),
             py::arg("ceiling") = 1.0, py::arg("rate") = 0.1, py::arg("noise_sd") = 0.0)
        .def_readwrite("ceiling", &SimTask::ceiling)
        .def_readwrite("rate", &SimTask::rate)
        .def_readwrite("noise_sd", &SimTask::noise_sd);
    py::class_<SimState>(m, "SimState")
        .def_readonly("epoch", &SimState::epoch)
        .def_readonly("accuracies", &SimState::accuracies)
        .def_readonly("weights", &SimState::weights);
    m.def("run_sim", &run_sim, py::arg("tasks"), py::arg("strategy"),
          py::arg("cfg") = WeightConfig{}, py::arg("epochs") = 100, py::arg("seed") = 0);

    py::class_<Hyperparams>(m, "Hyperparams")
        .def(py::init([](std::size_t epochs, std::size_t batch_size, double learning_rate,
                         std::vector<std::size_t> hidden_dims, std::uint64_t seed,
                         double train_fraction, WeightConfig weight_cfg, Strategy strategy) {
                 Hyperparams hp{epochs,         batch_size,     learning_rate, hidden_dims,
                                seed,           train_fraction, weight_cfg,    strategy};
                 validate_hyperparams(hp);
                 return hp;
             }),
             py::arg("epochs") = 20, py::arg("batch_size") = 64, py::arg("learning_rate") = 0.05,
             py::arg("hidden_dims") = std::vector<std::size_t>{32}, py::arg("seed") = 0,
             py::arg("train_fraction") = 0.8, py::arg("weight_cfg") = WeightConfig{},
             py::arg("strategy") = Strategy::deepchest)
        .def_readwrite("epochs", &Hyperparams::epochs)
        .def_readwrite("batch_size", &Hyperparams::batch_size)
        .def_readwrite("learning_rate", &Hyperparams::learning_rate)
        .def_readwrite("hidden_dims", &Hyperparams::hidden_dims)
        .def_readwrite("seed", &Hyperparams::seed)
        .def_readwrite("train_fraction", &Hyperparams::train_fraction)
        .def_readwrite("weight_cfg", &Hyperparams::weight_cfg)
        .def_readwrite("strategy", &Hyperparams::strategy);

    py::class_<TaskEpoch>(m, "TaskEpoch")
        .def_readonly("weight", &TaskEpoch::weight)
        .def_readonly("train_loss", &TaskEpoch::train_loss)
        .def_readonly("train_acc", &TaskEpoch::train_acc);
    py::class_<EpochStats>(m, "EpochStats")
        .def_readonly("epoch", &EpochStats::epoch)
        .def_readonly("per_task", &EpochStats::per_task);
    py::class_<RunLog>(m, "RunLog")
        .def_readonly("epoch_stats", &RunLog::epoch_stats)
        .def_readonly("final_val_losses", &RunLog::final_val_losses)
        .def_readonly("final_val_accuracies", &RunLog::final_val_accuracies)
        .def_readonly("stl_accuracies", &RunLog::stl_accuracies)
        .def_readonly("final_weights", &RunLog::final_weights);
    py::class_<StlResult>(m, "StlResult")
        .def_readonly("val_accuracy", &StlResult::val_accuracy)
        .def_readonly("val_loss", &StlResult::val_loss)
        .def_readonly("log", &StlResult::log);
    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("task_names", &ComparisonReport::task_names)
        .def_readonly("stl_accuracies", &ComparisonReport::stl_accuracies)
        .def_readonly("stl_losses", &ComparisonReport::stl_losses)
        .def_readonly("mtl_runs", &ComparisonReport::mtl_runs)
        .def_readonly("delta_m", &ComparisonReport::delta_m)
        .def_readonly("has_delta_m", &ComparisonReport::has_delta_m);

    m.def("train_stl", &train_stl, py::arg("dataset"), py::arg("task_index"), py::arg("hp"));
    m.def("train_mtl", &train_mtl, py::arg("dataset"), py::arg("hp"), py::arg("stl_acc"));
    m.def("run_comparison", &run_comparison, py::arg("dataset"), py::arg("hp"),
          py::arg("strategies") =
              std::vector<Strategy>{Strategy::deepchest, Strategy::uniform, Strategy::static_init});

    m.def("cmd_gen_data", &cmd_gen_data, py::arg("config_path"), py::arg("out_path"),
          py::arg("seed") = std::nullopt);
    m.def("cmd_compare", &cmd_compare, py::arg("config_path"), py::arg("data_path"),
          py::arg("out_dir"), py::arg("seed") = std::nullopt);
    m.def("cmd_simulate", &cmd_simulate, py::arg("config_path"), py::arg("out_dir"),
          py::arg("seed") = std::nullopt);
    m.def("cmd_plot", &cmd_plot, py::arg("weights_csv_path"), py::arg("out_svg_path"));
    m.def("cmd_delta_m", &cmd_delta_m, py::arg("table_csv_path"));
}
