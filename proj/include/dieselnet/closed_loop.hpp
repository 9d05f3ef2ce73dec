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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dieselnet/controller.hpp"
#include "dieselnet/plant.hpp"

namespace dieselnet {

/// Speed reference and opacity constraint, one value per sample.
struct ReferenceProfile {
    double ts = 0.1;
    std::vector<double> r_ref;
    std::vector<double> op_ref;

    void validate() const;
    std::size_t size() const { return r_ref.size(); }

    /// Clamped access; references hold their last value past the horizon.
    double r_at(long k) const;
    double op_at(long k) const;
};

struct ProfileStep {
    double time = 0.0;  ///< s
    double rpm = 0.0;
};

enum class OpRefMode {
    kCeiling,    ///< constant low ceiling, denies the transient peak
    kSteadyMap,  ///< settled opacity per speed level
};

/**
 * Piecewise-constant speed reference from (time, rpm) steps; the first step
 * must start at t = 0. The opacity constraint is a flat ceiling or, in
 * steady-map mode, the settled opacity of each level as given by the caller's
 * map.
 */
ReferenceProfile build_profile(const std::vector<ProfileStep>& steps, OpRefMode mode,
                               double ts, double duration_s, double ceiling = 15.0,
                               const std::function<double(double)>& steady_map = {});

/// The shipped default experiment: 1200/2000/2800/1600 rpm staircase over
/// 60 s at Ts = 0.1 s with a 15% opacity ceiling.
ReferenceProfile default_experiment_profile();

struct RunMetrics {
    double rmse_speed = 0.0;      ///< rpm, full controlled run
    double rmse_transient = 0.0;  ///< rpm, pooled +-2 s windows at reference steps
    double max_opacity = 0.0;     ///< %
    double opacity_excess = 0.0;  ///< integral of max(0, Op - Op_ref) dt, %*s
};

/// Metrics over [start, end); step instants recovered from r_ref changes.
RunMetrics compute_metrics(const std::vector<double>& speed,
                           const std::vector<double>& opacity,
                           const ReferenceProfile& profile, int start,
                           double transient_window_s = 2.0);

struct RunResult {
    std::vector<double> U;
    std::vector<double> R;
    std::vector<double> P;
    std::vector<double> mdot;
    std::vector<double> Op;
    ReferenceProfile profile;
    int start = 0;  ///< first controlled sample
    RunMetrics metrics;
};

/// Closed loop against the neural engine model (the paper's simulation
/// setting). The initial state settles at the first reference level.
RunResult run_closed_loop(const EngineModel& model, const Controller& ctrl,
                          const ReferenceProfile& profile);

/// Closed loop against the surrogate plant. The controller's opacity input
/// is the latest measurement (a physical plant has no lookahead).
RunResult run_closed_loop(const PlantParams& plant, const Controller& ctrl,
                          const ReferenceProfile& profile);

/// k,t,U,R_ref,R,P,mdot,Op_ref,Op rows; eta and digest recorded as comments.
void save_run_csv(const RunResult& result, const std::string& path,
                  std::optional<double> eta_op = {}, const std::string& digest = "");

struct LoadedRun {
    RunResult result;
    std::optional<double> eta_op;
};
LoadedRun load_run_csv(const std::string& path);

void save_metrics_json(const RunMetrics& metrics, const std::string& path,
                       std::optional<double> eta_op = {}, const std::string& digest = "",
                       const std::string& config_echo = "");

}  // namespace dieselnet
