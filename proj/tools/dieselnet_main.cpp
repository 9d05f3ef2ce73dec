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

#include <CLI11.hpp>
#include <iostream>

#include "dieselnet/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

dieselnet::RunConfig resolve_config(const std::string& config_path,
                                    const std::vector<std::string>& overrides) {
    dieselnet::RunConfig config;
    if (!config_path.empty()) {
        config = dieselnet::load_config(config_path);
    }
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw dieselnet::ValidationError("--set expects section.key=value, got '" + kv +
                                             "'");
        }
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural modelling and emission-constrained speed control of a "
                 "turbocharged diesel engine"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "Configuration file (key = value sections)");
    app.add_option("--set", overrides, "Override a config entry, section.key=value")
        ->take_all();

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Simulate the surrogate plant and write a CSV log");
    std::string gen_out = "log.csv";
    bool gen_validation = false;
    gen->add_option("--out", gen_out, "Output CSV path");
    gen->add_flag("--validation", gen_validation,
                  "Use the held-out validation seed and duration");

    // identify
    auto* ident = app.add_subcommand("identify", "Fit the four OE sub-models and assemble the engine model");
    std::string ident_data, ident_validation, ident_out = "model";
    ident->add_option("--data", ident_data, "Identification log CSV")->required();
    ident->add_option("--validation", ident_validation,
                      "Separate validation log (default: 70/30 time split)");
    ident->add_option("--out", ident_out, "Model directory");

    // select
    auto* sel = app.add_subcommand("select", "FPE structure search for one channel");
    std::string sel_data, sel_channel = "speed", sel_out = "report.csv";
    sel->add_option("--data", sel_data, "Identification log CSV")->required();
    sel->add_option("--channel", sel_channel, "speed|pressure|airflow|opacity");
    sel->add_option("--out", sel_out, "FPE report CSV");

    // train-controller
    auto* train = app.add_subcommand("train-controller",
                                     "Specialized recursive training of the neural controller");
    std::string train_model = "model", train_out = "ctrl";
    double train_eta = 0.0;
    train->add_option("--model", train_model, "Engine model directory")->required();
    train->add_option("--eta", train_eta, "Opacity constraint weight");
    train->add_option("--out", train_out, "Controller directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Closed-loop run of a trained controller");
    std::string sim_model, sim_controller, sim_out = "run.csv";
    bool sim_plant = false, sim_plot = false;
    sim->add_option("--model", sim_model, "Engine model directory");
    sim->add_flag("--plant", sim_plant, "Run against the surrogate plant instead");
    sim->add_option("--controller", sim_controller, "Controller directory or file")
        ->required();
    sim->add_option("--out", sim_out, "Run CSV path (metrics JSON written alongside)");
    sim->add_flag("--plot", sim_plot, "Also draw speed and opacity vs time as SVG");

    // report
    auto* rep = app.add_subcommand("report", "Tabulate metrics across runs of the eta sweep");
    std::vector<std::string> rep_runs;
    std::string rep_out = "summary.csv";
    rep->add_option("--runs", rep_runs, "Run CSVs")->required()->take_all();
    rep->add_option("--out", rep_out, "Summary CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        const dieselnet::RunConfig config = resolve_config(config_path, overrides);

        if (*gen) {
            const auto summary = dieselnet::cmd_gen_data(config, gen_out, gen_validation);
            std::cout << "wrote " << summary.path << " (" << summary.samples
                      << " samples)\n";
            for (const auto& [channel, range] : summary.ranges) {
                std::cout << "  " << channel << " in [" << range.first << ", "
                          << range.second << "]\n";
            }
        } else if (*ident) {
            const auto summary =
                dieselnet::cmd_identify(config, ident_data, ident_validation, ident_out);
            std::cout << "wrote model to " << summary.model_dir << "\n";
            std::cout << "validation NRMSE:\n";
            for (const auto& [channel, value] : summary.validation_nrmse) {
                std::cout << "  " << channel << ": " << 100.0 * value << "%\n";
            }
        } else if (*sel) {
            const auto result = dieselnet::cmd_select(config, sel_data, sel_channel, sel_out);
            std::cout << "wrote " << sel_out << "\n";
            std::cout << "selected " << result.report.best->spec.to_string() << " with "
                      << result.report.best->n_hidden << " hidden nodes (FPE "
                      << result.report.best->fpe << ")\n";
        } else if (*train) {
            const auto summary =
                dieselnet::cmd_train_controller(config, train_model, train_eta, train_out);
            std::cout << "wrote controller to " << summary.controller_dir << "\n";
            if (!summary.metrics.empty()) {
                const auto& last = summary.metrics.back();
                std::cout << "final epoch " << last.epoch << ": J=" << last.J
                          << " rmse_speed=" << last.rmse_speed << " rpm, max Op "
                          << last.max_opacity << "%\n";
            }
        } else if (*sim) {
            if (!sim_plant && sim_model.empty()) {
                throw dieselnet::ValidationError("simulate: need --model or --plant");
            }
            const auto summary = dieselnet::cmd_simulate(config, sim_model, sim_plant,
                                                         sim_controller, sim_out, sim_plot);
            std::cout << "wrote " << summary.run_csv << " and " << summary.metrics_json
                      << "\n";
            std::cout << "rmse_speed=" << summary.metrics.rmse_speed
                      << " rpm, rmse_transient=" << summary.metrics.rmse_transient
                      << " rpm, max_opacity=" << summary.metrics.max_opacity
                      << "%, opacity_excess=" << summary.metrics.opacity_excess << "\n";
        } else if (*rep) {
            const auto summary = dieselnet::cmd_report(config, rep_runs, rep_out);
            std::cout << "wrote " << rep_out << "\n";
            for (const auto& row : summary.rows) {
                std::cout << "  eta=" << row.eta_op << " max_opacity="
                          << row.metrics.max_opacity << " rmse_transient="
                          << row.metrics.rmse_transient << "\n";
            }
            if (!summary.monotone) {
                std::cerr << "sweep monotonicity violated\n";
                return 1;
            }
        }
        return kExitOk;
    } catch (const dieselnet::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const dieselnet::NumericalFault& e) {
        std::cerr << "numerical fault: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
