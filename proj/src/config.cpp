#include "deepchest/config.hpp"

#include <json.hpp>

#include "deepchest/error.hpp"
#include "deepchest/textio.hpp"

namespace deepchest {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) { known = true; break; }
        if (!known) fail(errc::bad_config, "unknown key '" + where + key + "'");
    }
}

template <typename T>
T get_number(const json& obj, const char* key, T fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) fail(errc::bad_config, where + key + " must be a number");
    } else {
        if (!v.is_number_unsigned())
            fail(errc::bad_config, where + key + " must be a non-negative integer");
    }
    return v.get<T>();
}

WeightConfig parse_weighting(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"alpha", "beta", "w_max", "init_scale", "w_floor"}, where);
    WeightConfig cfg;
    cfg.alpha = get_number<double>(obj, "alpha", cfg.alpha, where);
    cfg.beta = get_number<double>(obj, "beta", cfg.beta, where);
    cfg.w_max = get_number<double>(obj, "w_max", cfg.w_max, where);
    cfg.init_scale = get_number<double>(obj, "init_scale", cfg.init_scale, where);
    if (obj.contains("w_floor") && !obj.at("w_floor").is_null())
        cfg.w_floor = get_number<double>(obj, "w_floor", 0.0, where);
    validate_config(cfg);
    return cfg;
}

DataConfig parse_data(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"n", "d", "seed", "tasks"}, where);
    DataConfig cfg;
    cfg.n = get_number<std::size_t>(obj, "n", cfg.n, where);
    cfg.d = get_number<std::size_t>(obj, "d", cfg.d, where);
    cfg.seed = get_number<std::uint64_t>(obj, "seed", cfg.seed, where);
    if (!obj.contains("tasks") || !obj.at("tasks").is_array() || obj.at("tasks").empty())
        fail(errc::bad_config, where + "tasks must be a non-empty array");
    std::size_t idx = 0;
    for (const auto& t : obj.at("tasks")) {
        const std::string twhere = where + "tasks[" + std::to_string(idx) + "].";
        if (!t.is_object()) fail(errc::bad_config, twhere + " must be an object");
        reject_unknown_keys(t, {"name", "margin", "positive_rate", "label_noise"}, twhere);
        TaskProfile prof;
        prof.margin = get_number<double>(t, "margin", prof.margin, twhere);
        prof.positive_rate = get_number<double>(t, "positive_rate", prof.positive_rate, twhere);
        prof.label_noise = get_number<double>(t, "label_noise", prof.label_noise, twhere);
        cfg.tasks.push_back(prof);
        if (t.contains("name")) {
            if (!t.at("name").is_string()) fail(errc::bad_config, twhere + "name must be a string");
            cfg.task_names.push_back(t.at("name").get<std::string>());
        } else {
            cfg.task_names.push_back("task_" + std::to_string(idx));
        }
        ++idx;
    }
    return cfg;
}

SimConfig parse_sim(const json& obj, const std::string& where) {
    reject_unknown_keys(obj, {"epochs", "seed", "strategy", "tasks"}, where);
    SimConfig cfg;
    cfg.epochs = get_number<std::size_t>(obj, "epochs", cfg.epochs, where);
    cfg.seed = get_number<std::uint64_t>(obj, "seed", cfg.seed, where);
    if (obj.contains("strategy")) {
        if (!obj.at("strategy").is_string())
            fail(errc::bad_config, where + "strategy must be a string");
        cfg.strategy = strategy_from_name(obj.at("strategy").get<std::string>());
    }
    if (!obj.contains("tasks") || !obj.at("tasks").is_array() || obj.at("tasks").empty())
        fail(errc::bad_config, where + "tasks must be a non-empty array");
    std::size_t idx = 0;
    for (const auto& t : obj.at("tasks")) {
        const std::string twhere = where + "tasks[" + std::to_string(idx) + "].";
        if (!t.is_object()) fail(errc::bad_config, twhere + " must be an object");
        reject_unknown_keys(t, {"ceiling", "rate", "noise_sd"}, twhere);
        SimTask task;
        task.ceiling = get_number<double>(t, "ceiling", task.ceiling, twhere);
        task.rate = get_number<double>(t, "rate", task.rate, twhere);
        task.noise_sd = get_number<double>(t, "noise_sd", task.noise_sd, twhere);
        cfg.tasks.push_back(task);
        ++idx;
    }
    validate_sim_tasks(cfg.tasks);
    return cfg;
}

} // namespace

RunConfig parse_config(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(errc::bad_config, origin + ": " + e.what());
    }
    if (!doc.is_object()) fail(errc::bad_config, origin + ": top level must be an object");
    reject_unknown_keys(doc, {"data", "train", "weighting", "sim", "output"}, "");

    RunConfig cfg;
    if (doc.contains("weighting")) cfg.weighting = parse_weighting(doc.at("weighting"), "weighting.");

    if (doc.contains("data")) cfg.data = parse_data(doc.at("data"), "data.");
    if (doc.contains("sim")) cfg.sim = parse_sim(doc.at("sim"), "sim.");

    if (doc.contains("train")) {
        const json& t = doc.at("train");
        const std::string where = "train.";
        reject_unknown_keys(t,
                            {"epochs", "batch_size", "learning_rate", "hidden_dims", "seed",
                             "train_fraction", "strategies"},
                            where);
        Hyperparams hp;
        hp.epochs = get_number<std::size_t>(t, "epochs", hp.epochs, where);
        hp.batch_size = get_number<std::size_t>(t, "batch_size", hp.batch_size, where);
        hp.learning_rate = get_number<double>(t, "learning_rate", hp.learning_rate, where);
        hp.seed = get_number<std::uint64_t>(t, "seed", hp.seed, where);
        hp.train_fraction = get_number<double>(t, "train_fraction", hp.train_fraction, where);
        if (t.contains("hidden_dims")) {
            if (!t.at("hidden_dims").is_array())
                fail(errc::bad_config, where + "hidden_dims must be an array");
            hp.hidden_dims.clear();
            for (const auto& h : t.at("hidden_dims")) {
                if (!h.is_number_unsigned() || h.get<std::size_t>() < 1)
                    fail(errc::bad_config, where + "hidden_dims entries must be positive integers");
                hp.hidden_dims.push_back(h.get<std::size_t>());
            }
        }
        if (t.contains("strategies")) {
            if (!t.at("strategies").is_array() || t.at("strategies").empty())
                fail(errc::bad_config, where + "strategies must be a non-empty array");
            cfg.strategies.clear();
            for (const auto& s : t.at("strategies")) {
                if (!s.is_string()) fail(errc::bad_config, where + "strategies entries must be strings");
                cfg.strategies.push_back(strategy_from_name(s.get<std::string>()));
            }
        }
        hp.weight_cfg = cfg.weighting;
        try {
            validate_hyperparams(hp);
        } catch (const Error& e) {
            fail(errc::bad_config, std::string("train section: ") + e.what());
        }
        cfg.train = hp;
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown_keys(o, {"dir"}, "output.");
        if (o.contains("dir")) {
            if (!o.at("dir").is_string()) fail(errc::bad_config, "output.dir must be a string");
            cfg.output_dir = o.at("dir").get<std::string>();
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

} // namespace deepchest
