/*
 * Copyright 2026 the dieselnet authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dieselnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace dieselnet {

namespace fs = std::filesystem;

RegressorSpec default_speed_spec() {
    return RegressorSpec{"R", 2, {{"T", 1, 1}}};
}
RegressorSpec default_pressure_spec() {
    return RegressorSpec{"P", 1, {{"R", 1, 1}}};
}
RegressorSpec default_airflow_spec() {
    return RegressorSpec{"mdot", 1, {{"P", 1, 1}, {"R", 1, 1}}};
}
RegressorSpec default_opacity_spec() {
    return RegressorSpec{"Op", 1, {{"T", 1, 4}, {"R", 1, 4}, {"mdot", 1, 4}}};
}

double nrmse(const std::vector<double>& truth, const std::vector<double>& estimate,
             std::size_t begin) {
    if (truth.size() != estimate.size() || begin >= truth.size()) {
        throw ValidationError("nrmse: shape mismatch");
    }
    double lo = truth[begin], hi = truth[begin], sq = 0.0;
    for (std::size_t k = begin; k < truth.size(); ++k) {
        lo = std::min(lo, truth[k]);
        hi = std::max(hi, truth[k]);
        const double e = truth[k] - estimate[k];
        sq += e * e;
    }
    const double rmse = std::sqrt(sq / static_cast<double>(truth.size() - begin));
    const double span = hi - lo;
    return span > 0.0 ? rmse / span : rmse;
}

GenDataSummary cmd_gen_data(const RunConfig& config, const std::string& out_path,
                            bool validation) {
    config.validate();
    const int duration = validation ? config.validation_duration : config.excitation_duration;
    const std::uint64_t seed = validation ? config.validation_seed : config.excitation_seed;

    const std::vector<double> pump = generate_excitation(config.excitation, duration, seed);
    const PlantState initial = settle_plant(config.plant, pump.front());
    const SignalLog log = simulate_plant(config.plant, pump, initial);
    save_log(log, out_path, config.digest());

    GenDataSummary summary;
    summary.path = out_path;
    summary.samples = static_cast<int>(log.size());
    for (const char* name : {"T", "R", "P", "mdot", "mdot_f", "Op"}) {
        const std::vector<double> values = log.channel(name);
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        summary.ranges[name] = {*lo, *hi};
    }
    return summary;
}

namespace {

struct NamedSpec {
    std::string name;
    RegressorSpec spec;
    int hidden;
};

std::vector<NamedSpec> identify_specs(const RunConfig& config) {
    return {
        {"speed", default_speed_spec(), config.speed_hidden},
        {"pressure", default_pressure_spec(), config.pressure_hidden},
        {"airflow", default_airflow_spec(), config.airflow_hidden},
        {"opacity", default_opacity_spec(), config.opacity_hidden},
    };
}

}  // namespace

IdentifySummary cmd_identify(const RunConfig& config, const std::string& data_path,
                             const std::string& validation_path,
                             const std::string& out_dir) {
    config.validate();
    const SignalLog full = load_log(data_path);

    SignalLog train, validation;
    if (validation_path.empty()) {
        const auto cut = static_cast<std::size_t>(
            config.train_split * static_cast<double>(full.size()));
        train = full.slice(0, cut);
        validation = full.slice(cut, full.size());
    } else {
        train = full;
        validation = load_log(validation_path);
    }

    IdentifySummary summary;
    summary.model_dir = out_dir;

    std::map<std::string, SubModel> fitted;
    int index = 0;
    for (const NamedSpec& ns : identify_specs(config)) {
        FitConfig fit = config.fit;
        fit.seed = config.fit.seed + static_cast<std::uint64_t>(index++) * 1000003ULL;
        const FitResult res = fit_oe_model(train, ns.spec, ns.hidden, fit);
        summary.train_sse[ns.name] = res.sse;
        fitted.emplace(ns.name, res.model);
    }

    EngineModel model =
        assemble_engine_model(fitted.at("speed"), fitted.at("pressure"),
                              fitted.at("airflow"), fitted.at("opacity"));
    save_engine_model(model, out_dir, config.digest());

    // Free-run validation: the composite sees only the pump position.
    const std::vector<double> pump = validation.channel("T");
    const EngineInit init = EngineInit::from_log(validation, model.min_history());
    const EngineTrajectories traj = simulate_engine_model(model, pump, init);
    const auto start = static_cast<std::size_t>(model.min_history());
    summary.validation_nrmse["R"] = nrmse(validation.channel("R"), traj.R, start);
    summary.validation_nrmse["P"] = nrmse(validation.channel("P"), traj.P, start);
    summary.validation_nrmse["mdot"] = nrmse(validation.channel("mdot"), traj.mdot, start);
    summary.validation_nrmse["Op"] = nrmse(validation.channel("Op"), traj.Op, start);

    std::ofstream table(fs::path(out_dir) / "validation.csv");
    table << "# config_digest " << config.digest() << '\n';
    table << "channel,nrmse\n";
    for (const auto& [channel, value] : summary.validation_nrmse) {
        table << channel << ',' << value << '\n';
    }
    return summary;
}

SelectResult cmd_select(const RunConfig& config, const std::string& data_path,
                        const std::string& channel, const std::string& out_csv) {
    config.validate();
    const SignalLog log = load_log(data_path);

    std::vector<RegressorSpec> grid;
    const int max_order = config.select_max_order;
    for (int na = 1; na <= max_order; ++na) {
        for (int nb = 1; nb <= max_order; ++nb) {
            if (channel == "speed") {
                grid.push_back(RegressorSpec{"R", na, {{"T", nb, 1}}});
            } else if (channel == "pressure") {
                grid.push_back(RegressorSpec{"P", na, {{"R", nb, 1}}});
            } else if (channel == "airflow") {
                grid.push_back(RegressorSpec{"mdot", na, {{"P", nb, 1}, {"R", nb, 1}}});
            } else if (channel == "opacity") {
                grid.push_back(
                    RegressorSpec{"Op", na, {{"T", nb, 4}, {"R", nb, 4}, {"mdot", nb, 4}}});
            } else {
                throw ValidationError("select: unknown channel '" + channel + "'");
            }
        }
    }

    SelectConfig sel;
    sel.fit = config.fit;
    sel.phase1_hidden = config.select_phase1_hidden;
    sel.node_grid = config.select_node_grid;

    SelectResult result = select_structure(log, grid, sel);
    save_fpe_report(result.report, out_csv, config.digest());
    return result;
}

ReferenceProfile profile_from_config(const RunConfig& config, const EngineModel* model) {
    if (config.op_ref_mode == OpRefMode::kSteadyMap) {
        if (model == nullptr) {
            throw ValidationError("profile: steady-map Op_ref needs an engine model");
        }
        return build_profile(config.profile_steps, OpRefMode::kSteadyMap, config.plant.ts,
                             config.profile_duration, config.op_ceiling,
                             [model](double rpm) { return settled_model_opacity(*model, rpm); });
    }
    return build_profile(config.profile_steps, OpRefMode::kCeiling, config.plant.ts,
                         config.profile_duration, config.op_ceiling);
}

TrainControllerSummary cmd_train_controller(const RunConfig& config,
                                            const std::string& model_dir, double eta_op,
                                            const std::string& out_dir) {
    config.validate();
    const EngineModel model = load_engine_model(model_dir);
    const ReferenceProfile profile = profile_from_config(config, &model);

    CriterionWeights weights;
    weights.eta_y = 1.0;
    weights.eta_z = eta_op;

    const ControllerTrainResult trained =
        train_controller(model, profile, weights, config.controller);

    fs::create_directories(out_dir);
    trained.controller.save((fs::path(out_dir) / "controller.txt").string(),
                            config.digest());
    save_training_metrics(trained.metrics, (fs::path(out_dir) / "metrics.csv").string(),
                          config.digest());

    TrainControllerSummary summary;
    summary.controller_dir = out_dir;
    summary.eta_op = eta_op;
    summary.metrics = trained.metrics;
    return summary;
}

namespace {

std::optional<double> eta_from_controller_dir(const std::string& controller_dir) {
    std::ifstream in(fs::path(controller_dir) / "metrics.csv");
    if (!in) return {};
    std::string line, last;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#' && line.find(',') != std::string::npos &&
            line.find("epoch") == std::string::npos) {
            last = line;
        }
    }
    if (last.empty()) return {};
    const auto comma = last.rfind(',');
    try {
        return std::stod(last.substr(comma + 1));
    } catch (const std::exception&) {
        return {};
    }
}

void write_svg_plot(const RunResult& run, const std::string& path) {
    const int width = 900, panel = 240, pad = 50;
    const int height = 2 * panel + 3 * pad;
    const std::size_t n = run.profile.size();

    auto polyline = [&](const std::vector<double>& y, double lo, double hi, int top,
                        const char* color) {
        std::ostringstream out;
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t k = 0; k < n; ++k) {
            const double x = pad + (width - 2.0 * pad) * static_cast<double>(k) /
                                       static_cast<double>(n - 1);
            const double frac = (y[k] - lo) / (hi - lo);
            const double ypix = top + panel - panel * std::clamp(frac, 0.0, 1.0);
            out << x << ',' << ypix << ' ';
        }
        out << "\"/>\n";
        return out.str();
    };

    const auto [rlo_it, rhi_it] = std::minmax_element(run.R.begin(), run.R.end());
    double rlo = std::min(*rlo_it, *std::min_element(run.profile.r_ref.begin(),
                                                     run.profile.r_ref.end()));
    double rhi = std::max(*rhi_it, *std::max_element(run.profile.r_ref.begin(),
                                                     run.profile.r_ref.end()));
    rlo -= 0.05 * (rhi - rlo) + 1.0;
    rhi += 0.05 * (rhi - rlo) + 1.0;

    std::ofstream out(path);
    if (!out) throw ValidationError("plot: cannot open '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    out << "<text x=\"" << pad << "\" y=\"" << pad - 15 << "\">Engine speed (rpm)</text>\n";
    out << polyline(run.profile.r_ref, rlo, rhi, pad, "#888888");
    out << polyline(run.R, rlo, rhi, pad, "#c0392b");
    out << "<text x=\"" << pad << "\" y=\"" << panel + 2 * pad - 15
        << "\">Opacity (%)</text>\n";
    out << polyline(run.profile.op_ref, 0.0, 100.0, panel + 2 * pad, "#888888");
    out << polyline(run.Op, 0.0, 100.0, panel + 2 * pad, "#27ae60");
    out << "</svg>\n";
}

}  // namespace

SimulateSummary cmd_simulate(const RunConfig& config, const std::string& model_dir,
                             bool use_plant, const std::string& controller_dir,
                             const std::string& out_csv, bool emit_plot) {
    config.validate();
    const fs::path ctrl_path = fs::is_directory(controller_dir)
                                   ? fs::path(controller_dir) / "controller.txt"
                                   : fs::path(controller_dir);
    const Controller ctrl = Controller::load(ctrl_path.string());
    const std::optional<double> eta = eta_from_controller_dir(controller_dir);

    RunResult run = [&] {
        if (use_plant) {
            return run_closed_loop(config.plant, ctrl, profile_from_config(config, nullptr));
        }
        const EngineModel model = load_engine_model(model_dir);
        return run_closed_loop(model, ctrl, profile_from_config(config, &model));
    }();

    save_run_csv(run, out_csv, eta, config.digest());
    const std::string json_path = out_csv + ".metrics.json";
    save_metrics_json(run.metrics, json_path, eta, config.digest(), config.serialize());
    if (emit_plot) {
        write_svg_plot(run, out_csv + ".svg");
    }

    SimulateSummary summary;
    summary.run_csv = out_csv;
    summary.metrics_json = json_path;
    summary.metrics = run.metrics;
    return summary;
}

ReportSummary cmd_report(const RunConfig& config, const std::vector<std::string>& runs,
                         const std::string& out_csv) {
    if (runs.empty()) throw ValidationError("report: no runs given");

    ReportSummary summary;
    for (const std::string& path : runs) {
        const LoadedRun loaded = load_run_csv(path);
        ReportRow row;
        row.run = path;
        if (!loaded.eta_op) {
            throw ValidationError("report: run '" + path + "' carries no eta_op comment");
        }
        row.eta_op = *loaded.eta_op;
        row.metrics = loaded.result.metrics;
        summary.rows.push_back(row);
    }
    std::sort(summary.rows.begin(), summary.rows.end(),
              [](const ReportRow& a, const ReportRow& b) { return a.eta_op < b.eta_op; });

    summary.monotone = true;
    for (std::size_t i = 1; i < summary.rows.size(); ++i) {
        if (summary.rows[i].metrics.max_opacity >
                summary.rows[i - 1].metrics.max_opacity + 1e-9 ||
            summary.rows[i].metrics.rmse_transient <
                summary.rows[i - 1].metrics.rmse_transient - 1e-9) {
            summary.monotone = false;
        }
    }

    std::ofstream out(out_csv);
    if (!out) throw ValidationError("report: cannot open '" + out_csv + "'");
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "# config_digest " << config.digest() << '\n';
    out << "run,eta_op,rmse_speed,rmse_transient,max_opacity,opacity_excess\n";
    for (const ReportRow& row : summary.rows) {
        out << row.run << ',' << row.eta_op << ',' << row.metrics.rmse_speed << ','
            << row.metrics.rmse_transient << ',' << row.metrics.max_opacity << ','
            << row.metrics.opacity_excess << '\n';
    }
    return summary;
}

}  // namespace dieselnet
