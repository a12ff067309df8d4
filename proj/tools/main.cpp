// bge - bond graph encoder toolkit
//
// Subcommands: validate, matrix, compile, simulate-dcmotor, train, evaluate,
// report, plot. Errors leave a machine-readable JSON envelope on stderr and a
// nonzero exit code.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "bge/checkpoint.hpp"
#include "bge/config.hpp"
#include "bge/dsl.hpp"
#include "bge/dualgraph.hpp"
#include "bge/matrix.hpp"
#include "bge/metrics.hpp"
#include "bge/sim.hpp"
#include "bge/svg.hpp"
#include "bge/train.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw bge::Error("io-error", "cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

bge::BondGraph load_graph(const std::string& path) { return bge::parse_dsl(read_file(path)); }

// "ch0=e1 ch1=f6" -> channel-indexed (bond, var) list
bge::ChannelMap parse_mapping(const std::vector<std::string>& entries) {
    std::vector<std::pair<int, std::pair<int, char>>> pairs;
    for (const std::string& e : entries) {
        const auto eq = e.find('=');
        if (eq == std::string::npos || e.rfind("ch", 0) != 0)
            throw bge::Error("bad-mapping", "mapping entries look like ch0=e1, got '" + e + "'");
        int channel = 0;
        try {
            channel = std::stoi(e.substr(2, eq - 2));
        } catch (const std::exception&) {
            throw bge::Error("bad-mapping", "bad channel index in '" + e + "'");
        }
        const std::string var = e.substr(eq + 1);
        if (var.size() < 2 || (var[0] != 'e' && var[0] != 'f'))
            throw bge::Error("bad-mapping",
                             "variable must be e<bond> or f<bond>, got '" + var + "'");
        int bond = 0;
        try {
            bond = std::stoi(var.substr(1));
        } catch (const std::exception&) {
            throw bge::Error("bad-mapping", "bad bond id in '" + e + "'");
        }
        pairs.push_back({channel, {bond, var[0]}});
    }
    std::sort(pairs.begin(), pairs.end());
    bge::ChannelMap map;
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (pairs[i].first != static_cast<int>(i))
            throw bge::Error("bad-mapping", "channels must be ch0..chN-1 without gaps");
        map.push_back(pairs[i].second);
    }
    return map;
}

struct ExperimentSetup {
    bge::MotorParams motor;
    bge::ExcitationSpec exc;
    double fs = 100.0;
    int window = 600;
    int samples = 500;
    uint64_t split_seed = 7;
    uint64_t sim_seed = 42;
    double duration = 0.0;  // 0 = derived from samples
    bge::TrainConfig train;
    bge::EncoderConfig enc;
    int hidden = 128;
    int runs = 20;
    int keep_best = 10;
    uint64_t base_seed = 1;
    double sdtw_gamma = 0.1;
    bool sdtw_length_norm = false;
};

ExperimentSetup setup_from_config(const bge::FlatConfig& cfg) {
    ExperimentSetup s;
    s.fs = cfg.get_double("fs", s.fs);
    s.exc.amplitude = cfg.get_double("amplitude", s.exc.amplitude);
    s.exc.freq_min = cfg.get_double("freq_min", s.exc.freq_min);
    s.exc.freq_max = cfg.get_double("freq_max", s.exc.freq_max);
    s.exc.duty_min = cfg.get_double("duty_min", s.exc.duty_min);
    s.exc.duty_max = cfg.get_double("duty_max", s.exc.duty_max);
    s.exc.noise_period = cfg.get_double("noise_period", s.exc.noise_period);
    s.exc.noise_min = cfg.get_double("noise_min", s.exc.noise_min);
    s.exc.noise_max = cfg.get_double("noise_max", s.exc.noise_max);
    s.window = cfg.get_int("window", s.window);
    s.samples = cfg.get_int("samples", s.samples);
    s.split_seed = cfg.get_u64("split_seed", s.split_seed);
    s.sim_seed = cfg.get_u64("sim_seed", s.sim_seed);
    s.duration = cfg.get_double("duration", s.duration);
    s.train.lr = cfg.get_double("lr", s.train.lr);
    s.train.epochs = cfg.get_int("epochs", s.train.epochs);
    s.train.batch = cfg.get_int("batch", s.train.batch);
    s.train.huber_delta = cfg.get_double("huber_delta", s.train.huber_delta);
    s.enc.d0 = cfg.get_int("d0", s.enc.d0);
    s.enc.layers = cfg.get_int("layers", s.enc.layers);
    s.enc.modes_per_layer = cfg.get_int_list("modes_per_layer", s.enc.modes_per_layer);
    s.enc.alpha_bgc = cfg.get_double("alpha_bgc", s.enc.alpha_bgc);
    const std::string policy = cfg.get_string("sampling_policy", "lowest");
    if (policy == "lowest")
        s.enc.policy = bge::SamplingPolicy::Lowest;
    else if (policy == "random")
        s.enc.policy = bge::SamplingPolicy::SeededRandom;
    else
        throw bge::Error("bad-config", "sampling_policy must be lowest or random");
    s.enc.sampling_seed = cfg.get_u64("sampling_seed", s.enc.sampling_seed);
    s.enc.fs = s.fs;
    s.hidden = cfg.get_int("hidden", s.hidden);
    s.runs = cfg.get_int("runs", s.runs);
    s.keep_best = cfg.get_int("keep_best", s.keep_best);
    s.base_seed = cfg.get_u64("base_seed", s.base_seed);
    s.sdtw_gamma = cfg.get_double("sdtw_gamma", s.sdtw_gamma);
    s.sdtw_length_norm = cfg.get_bool("sdtw_length_norm", s.sdtw_length_norm);
    for (const std::string& k : cfg.unused_keys())
        std::cerr << "note: unused config key '" << k << "'\n";
    return s;
}

bge::ForecastDataset dataset_for(const ExperimentSetup& s, const std::string& data_path) {
    bge::SeriesTable series;
    if (!data_path.empty()) {
        series = bge::read_series_csv(data_path);
    } else {
        double duration = s.duration;
        if (duration <= 0.0) duration = (static_cast<double>(s.samples) * s.window + 1) / s.fs;
        series = bge::to_series(bge::simulate(s.motor, s.exc, s.fs, duration, s.sim_seed));
    }
    return bge::build_dataset(series, s.window, s.samples, s.split_seed);
}

json metrics_json(const bge::Metrics& m) {
    return {{"mae", m.mae}, {"mse", m.mse}, {"sdtw", m.sdtw}};
}

json aggregate_json(const bge::RunAggregate& a) {
    auto ms = [](const bge::MeanStd& m) { return json{{"mean", m.mean}, {"std", m.stdev}}; };
    return {{"runs", a.runs},   {"kept", a.kept},     {"mae", ms(a.mae)},
            {"mse", ms(a.mse)}, {"sdtw", ms(a.sdtw)}, {"params", a.params}};
}

int cmd_validate(const std::string& path) {
    const bge::BondGraph g = load_graph(path);
    const bge::ValidationReport rep = bge::validate(g);
    if (rep.ok()) {
        std::cout << "OK: " << g.components.size() << " components, " << g.bonds.size()
                  << " bonds, all invariants satisfied\n";
        return 0;
    }
    for (const auto& v : rep.violations)
        std::cout << "violation [" << bge::rule_name(v.rule) << "] " << v.subject << ": "
                  << v.message << "\n";
    json err = {{"error",
                 {{"type", "validation-failed"},
                  {"message", std::to_string(rep.violations.size()) + " violation(s)"}}}};
    json list = json::array();
    for (const auto& v : rep.violations)
        list.push_back(
            {{"rule", bge::rule_name(v.rule)}, {"subject", v.subject}, {"message", v.message}});
    err["error"]["violations"] = list;
    std::cerr << err.dump() << "\n";
    return 1;
}

// run protocol + aggregate for one model family
json run_family(const ExperimentSetup& s, const bge::ForecastDataset& ds,
                const bge::Scenario& sc, const std::string& scenario_str,
                const bge::ModelSpec& spec, const bge::DualGraph* graph,
                const std::string& model_name) {
    const auto results = bge::run_protocol(ds, sc, spec, graph, s.train, s.base_seed, s.runs,
                                           bge::Exec::Parallel, s.sdtw_gamma, s.sdtw_length_norm);
    const bge::RunAggregate agg = bge::aggregate_best(results, s.keep_best);
    json runs = json::array();
    for (const auto& r : results) {
        json jr = metrics_json(r.test);
        jr["seed"] = r.seed;
        jr["val_loss"] = r.val_loss;
        jr["params"] = r.params;
        runs.push_back(jr);
    }
    return {{"scenario", scenario_str},
            {"model", model_name},
            {"informed", spec.informed},
            {"aggregate", aggregate_json(agg)},
            {"runs", runs}};
}

void print_aggregate(const json& family) {
    const json& a = family.at("aggregate");
    auto line = [&](const char* name) {
        const json& m = a.at(name);
        char buf[96];
        std::snprintf(buf, sizeof buf, "  %-5s %.4g +/- %.2g", name, m.at("mean").get<double>(),
                      m.at("std").get<double>());
        return std::string(buf);
    };
    std::cout << family.at("model").get<std::string>()
              << (family.at("informed").get<bool>() ? " (informed)" : " (raw)") << " on "
              << family.at("scenario").get<std::string>() << ", best " << a.at("kept") << " of "
              << a.at("runs") << " runs, " << a.at("params").get<size_t>() << " params\n"
              << line("mae") << "\n"
              << line("mse") << "\n"
              << line("sdtw") << "\n";
}

std::string format_report(const std::vector<json>& families, const std::string& format) {
    struct Row {
        std::string scenario, model;
        bool informed;
        json agg;
    };
    std::vector<Row> rows;
    for (const json& f : families)
        rows.push_back({f.at("scenario"), f.at("model"), f.at("informed"), f.at("aggregate")});

    std::ostringstream out;
    auto cell = [](const json& ms) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4g +/- %.2g", ms.at("mean").get<double>(),
                      ms.at("std").get<double>());
        return std::string(buf);
    };
    if (format == "json") {
        json arr = json::array();
        for (const json& f : families) arr.push_back(f);
        out << arr.dump(2) << "\n";
    } else if (format == "csv") {
        out << "scenario,model,informed,runs,kept,mae_mean,mae_std,mse_mean,mse_std,"
               "sdtw_mean,sdtw_std,params\n";
        for (const Row& r : rows) {
            out << r.scenario << ',' << r.model << ',' << (r.informed ? "yes" : "no") << ','
                << r.agg.at("runs") << ',' << r.agg.at("kept") << ','
                << r.agg.at("mae").at("mean") << ',' << r.agg.at("mae").at("std") << ','
                << r.agg.at("mse").at("mean") << ',' << r.agg.at("mse").at("std") << ','
                << r.agg.at("sdtw").at("mean") << ',' << r.agg.at("sdtw").at("std") << ','
                << r.agg.at("params") << "\n";
        }
    } else if (format == "md") {
        out << "| scenario | model | informed | MAE | MSE | SDTW | # param |\n";
        out << "|---|---|---|---|---|---|---|\n";
        for (const Row& r : rows)
            out << "| " << r.scenario << " | " << r.model << " | " << (r.informed ? "yes" : "no")
                << " | " << cell(r.agg.at("mae")) << " | " << cell(r.agg.at("mse")) << " | "
                << cell(r.agg.at("sdtw")) << " | " << r.agg.at("params") << " |\n";
    } else {
        throw bge::Error("bad-format", "report format must be csv, json or md");
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bond graph encoder toolkit"};
    app.require_subcommand(1);

    std::string dsl_path, config_path, data_path, out_path, checkpoint_path, results_path;
    std::string scenario_str = "100-500", model_str = "linear", format = "md";
    std::vector<std::string> map_entries, results_paths;
    bool informed = false, raw = false;
    int runs_override = -1, window_index = -1;
    double fs = 100.0, duration = 60.0;
    uint64_t seed = 42;

    auto* validate_cmd =
        app.add_subcommand("validate", "parse a bond graph and check every invariant");
    validate_cmd->add_option("dsl", dsl_path, "bond graph DSL file")->required();

    auto* matrix_cmd = app.add_subcommand("matrix", "emit the bond matrix as JSON");
    matrix_cmd->add_option("dsl", dsl_path, "bond graph DSL file")->required();

    auto* compile_cmd = app.add_subcommand("compile", "compile the dual variable graph to JSON");
    compile_cmd->add_option("dsl", dsl_path, "bond graph DSL file")->required();
    compile_cmd->add_option("--map", map_entries, "channel mapping, e.g. ch0=e1 ch1=f6");

    auto* sim_cmd = app.add_subcommand("simulate-dcmotor", "integrate the DC motor and write CSV");
    sim_cmd->add_option("--fs", fs, "sampling frequency [Hz]");
    sim_cmd->add_option("--duration", duration, "recording length [s]");
    sim_cmd->add_option("--seed", seed, "excitation seed");
    sim_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
    sim_cmd->add_option("--config", config_path, "configuration file");

    auto* train_cmd = app.add_subcommand("train", "train a forecasting model");
    train_cmd->add_option("--scenario", scenario_str, "N_in-K_out split, e.g. 100-500");
    train_cmd->add_option("--model", model_str, "linear or mlp")
        ->check(CLI::IsMember({"linear", "mlp"}));
    train_cmd->add_flag("--informed", informed, "encode the window with the bond graph encoder");
    train_cmd->add_flag("--raw", raw, "plain head on the raw window (default)");
    train_cmd->add_option("--config", config_path, "configuration file");
    train_cmd->add_option("--data", data_path, "series CSV (default: simulate per config)");
    train_cmd->add_option("--graph", dsl_path, "bond graph DSL (required with --informed)");
    train_cmd->add_option("--map", map_entries, "channel mapping for --informed");
    train_cmd->add_option("--runs", runs_override, "override the run count");
    train_cmd->add_option("--out", checkpoint_path, "checkpoint path for the best model");
    train_cmd->add_option("--results", results_path, "write run results JSON here");

    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint on the test split");
    eval_cmd->add_option("--checkpoint", checkpoint_path, "trained model")->required();
    eval_cmd->add_option("--config", config_path, "configuration file");
    eval_cmd->add_option("--data", data_path, "series CSV (default: simulate per config)");

    auto* report_cmd = app.add_subcommand("report", "format run results as a table");
    report_cmd->add_option("--format", format, "csv, json or md")
        ->check(CLI::IsMember({"csv", "json", "md"}));
    report_cmd->add_option("--results", results_paths, "results JSON files")->required();

    auto* plot_cmd = app.add_subcommand("plot", "render input/target/prediction traces as SVG");
    plot_cmd->add_option("--checkpoint", checkpoint_path, "trained model")->required();
    plot_cmd->add_option("--config", config_path, "configuration file");
    plot_cmd->add_option("--data", data_path, "series CSV (default: simulate per config)");
    plot_cmd->add_option("--window", window_index,
                         "dataset window index (default: first test window)");
    plot_cmd->add_option("--out", out_path, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(dsl_path);

        if (matrix_cmd->parsed()) {
            const bge::BondMatrix bm = bge::build_bond_matrix(load_graph(dsl_path));
            std::cout << bge::bond_matrix_json(bm).dump(2) << "\n";
            return 0;
        }

        if (compile_cmd->parsed()) {
            const bge::BondMatrix bm = bge::build_bond_matrix(load_graph(dsl_path));
            const bge::DualGraph g = bge::compile(bm, parse_mapping(map_entries));
            std::cout << bge::dual_graph_json(g).dump(2) << "\n";
            return 0;
        }

        if (sim_cmd->parsed()) {
            ExperimentSetup s;
            if (!config_path.empty())
                s = setup_from_config(bge::FlatConfig::parse_file(config_path));
            if (sim_cmd->count("--fs")) s.fs = fs;
            const bge::SimResult sim = bge::simulate(s.motor, s.exc, s.fs, duration, seed);
            if (out_path.empty()) {
                char buf[128];
                std::cout << "t,U,omega\n";
                for (size_t k = 0; k < sim.t.size(); ++k) {
                    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", sim.t[k], sim.u[k],
                                  sim.omega[k]);
                    std::cout << buf;
                }
            } else {
                bge::write_sim_csv(out_path, sim);
                std::cout << "wrote " << sim.t.size() << " samples to " << out_path << "\n";
            }
            return 0;
        }

        if (train_cmd->parsed()) {
            if (informed && raw) throw bge::Error("bad-flags", "--informed and --raw conflict");
            ExperimentSetup s;
            if (!config_path.empty())
                s = setup_from_config(bge::FlatConfig::parse_file(config_path));
            if (runs_override >= 0) s.runs = runs_override;
            const bge::ForecastDataset ds = dataset_for(s, data_path);
            const bge::Scenario sc = bge::scenario_from_string(scenario_str, ds.window);

            bge::ModelSpec spec;
            spec.head_kind = model_str == "mlp" ? bge::HeadKind::MLP : bge::HeadKind::Linear;
            spec.informed = informed;
            spec.hidden = s.hidden;
            spec.enc = s.enc;

            bge::DualGraph graph;
            if (informed) {
                if (dsl_path.empty())
                    throw bge::Error("bad-flags", "--informed requires --graph <bg.dsl>");
                bge::ChannelMap map = parse_mapping(map_entries);
                if (map.empty())
                    throw bge::Error("bad-flags", "--informed requires --map ch0=... entries");
                graph = bge::compile(bge::build_bond_matrix(load_graph(dsl_path)), map);
            }

            if (s.runs <= 1) {
                const bge::TrainResult tr =
                    bge::train_model(ds, sc, spec, informed ? &graph : nullptr, s.train,
                                     s.base_seed, bge::Exec::Parallel);
                const bge::Metrics m = bge::evaluate_model(tr.model, ds, ds.test_idx,
                                                           s.sdtw_gamma, s.sdtw_length_norm);
                std::cout << "best val loss " << tr.best_val << " at epoch " << tr.best_epoch
                          << "; test mae " << m.mae << " mse " << m.mse << " sdtw " << m.sdtw
                          << " (" << tr.model.params() << " params)\n";
                if (!checkpoint_path.empty()) {
                    bge::save_checkpoint(checkpoint_path, tr.model);
                    std::cout << "checkpoint written to " << checkpoint_path << "\n";
                }
            } else {
                const json family = run_family(s, ds, sc, scenario_str, spec,
                                               informed ? &graph : nullptr, model_str);
                print_aggregate(family);
                if (!results_path.empty()) {
                    std::ofstream rf(results_path);
                    if (!rf) throw bge::Error("io-error", "cannot write " + results_path);
                    rf << family.dump(2) << "\n";
                    std::cout << "results written to " << results_path << "\n";
                }
                if (!checkpoint_path.empty()) {
                    // retrain the best seed to materialize its model
                    uint64_t best_seed = s.base_seed;
                    double best_val = std::numeric_limits<double>::infinity();
                    for (const auto& r : family.at("runs")) {
                        if (r.at("val_loss").get<double>() < best_val) {
                            best_val = r.at("val_loss").get<double>();
                            best_seed = r.at("seed").get<uint64_t>();
                        }
                    }
                    const bge::TrainResult tr =
                        bge::train_model(ds, sc, spec, informed ? &graph : nullptr, s.train,
                                         best_seed, bge::Exec::Parallel);
                    bge::save_checkpoint(checkpoint_path, tr.model);
                    std::cout << "checkpoint (seed " << best_seed << ") written to "
                              << checkpoint_path << "\n";
                }
            }
            return 0;
        }

        if (eval_cmd->parsed()) {
            ExperimentSetup s;
            if (!config_path.empty())
                s = setup_from_config(bge::FlatConfig::parse_file(config_path));
            const bge::Model model = bge::load_checkpoint(checkpoint_path);
            const bge::ForecastDataset ds = dataset_for(s, data_path);
            if (ds.window != model.scenario.n_in + model.scenario.k_out)
                throw bge::Error("bad-data",
                                 "dataset window does not match the checkpoint scenario");
            const bge::Metrics m = bge::evaluate_model(model, ds, ds.test_idx, s.sdtw_gamma,
                                                       s.sdtw_length_norm, bge::Exec::Parallel);
            json out = metrics_json(m);
            out["params"] = model.params();
            out["windows"] = ds.test_idx.size();
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (report_cmd->parsed()) {
            std::vector<json> families;
            for (const std::string& p : results_paths) {
                json j;
                std::ifstream f(p);
                if (!f) throw bge::Error("io-error", "cannot open " + p);
                f >> j;
                families.push_back(j);
            }
            std::cout << format_report(families, format);
            return 0;
        }

        if (plot_cmd->parsed()) {
            ExperimentSetup s;
            if (!config_path.empty())
                s = setup_from_config(bge::FlatConfig::parse_file(config_path));
            const bge::Model model = bge::load_checkpoint(checkpoint_path);
            const bge::ForecastDataset ds = dataset_for(s, data_path);
            if (ds.window != model.scenario.n_in + model.scenario.k_out)
                throw bge::Error("bad-data",
                                 "dataset window does not match the checkpoint scenario");
            const int w = window_index >= 0 ? window_index : ds.test_idx.front();
            if (w < 0 || w >= static_cast<int>(ds.samples.size()))
                throw bge::Error("bad-window", "window index out of range");
            const bge::Mat pred = bge::predict(model, ds.samples[w], bge::Exec::Parallel);
            std::vector<bge::ForecastTrace> traces;
            for (int c = 0; c < ds.channels(); ++c) {
                bge::ForecastTrace tr;
                tr.title = ds.channel_names[c] + " (window " + std::to_string(w) + ")";
                for (int t = 0; t < model.scenario.n_in; ++t)
                    tr.input.push_back(ds.samples[w].at(t, c));
                for (int t = 0; t < model.scenario.k_out; ++t) {
                    tr.target.push_back(ds.samples[w].at(model.scenario.n_in + t, c));
                    tr.prediction.push_back(pred.at(c, t));
                }
                traces.push_back(std::move(tr));
            }
            bge::write_forecast_svg(out_path, traces);
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
    } catch (const bge::Error& e) {
        json err = {{"error", {{"type", e.code()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err = {{"error", {{"type", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
