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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dieselnet/config.hpp"
#include "dieselnet/engine_model.hpp"

namespace dieselnet {

/// The fixed sub-model lag structures used by `identify` (structure
/// selection can override them per run).
RegressorSpec default_speed_spec();
RegressorSpec default_pressure_spec();
RegressorSpec default_airflow_spec();
RegressorSpec default_opacity_spec();

/// RMSE normalized by the measured channel's range.
double nrmse(const std::vector<double>& truth, const std::vector<double>& estimate,
             std::size_t begin);

struct GenDataSummary {
    std::string path;
    int samples = 0;
    std::map<std::string, std::pair<double, double>> ranges;
};
/// Excitation + plant simulation + CSV. validation=true switches to the
/// held-out sequence (its own seed and duration).
GenDataSummary cmd_gen_data(const RunConfig& config, const std::string& out_path,
                            bool validation = false);

struct IdentifySummary {
    std::string model_dir;
    std::map<std::string, double> validation_nrmse;  ///< per channel
    std::map<std::string, double> train_sse;         ///< per channel, normalized
};
/// Fits the four sub-models with the fixed default structure, assembles the
/// composite, validates by free-run simulation and writes the model
/// directory. validation_path empty: time-ordered train/validation split.
IdentifySummary cmd_identify(const RunConfig& config, const std::string& data_path,
                             const std::string& validation_path,
                             const std::string& out_dir);

/// Fig.-2 style two-phase structure search for one channel
/// (speed|pressure|airflow|opacity); writes the FPE report CSV.
SelectResult cmd_select(const RunConfig& config, const std::string& data_path,
                        const std::string& channel, const std::string& out_csv);

struct TrainControllerSummary {
    std::string controller_dir;
    double eta_op = 0.0;
    std::vector<EpochMetrics> metrics;
};
TrainControllerSummary cmd_train_controller(const RunConfig& config,
                                            const std::string& model_dir, double eta_op,
                                            const std::string& out_dir);

struct SimulateSummary {
    std::string run_csv;
    std::string metrics_json;
    RunMetrics metrics;
};
/// Closed loop of a trained controller against the engine model (or the
/// surrogate plant when use_plant). Optionally draws speed and opacity vs
/// time as an SVG next to the CSV.
SimulateSummary cmd_simulate(const RunConfig& config, const std::string& model_dir,
                             bool use_plant, const std::string& controller_dir,
                             const std::string& out_csv, bool emit_plot = false);

struct ReportRow {
    std::string run;
    double eta_op = 0.0;
    RunMetrics metrics;
};
struct ReportSummary {
    std::vector<ReportRow> rows;  ///< sorted by eta_op
    bool monotone = false;  ///< max opacity non-increasing, transient RMSE non-decreasing
};
ReportSummary cmd_report(const RunConfig& config, const std::vector<std::string>& runs,
                         const std::string& out_csv);

/// Reference profile as configured; steady-map mode queries the model.
ReferenceProfile profile_from_config(const RunConfig& config, const EngineModel* model);

}  // namespace dieselnet
